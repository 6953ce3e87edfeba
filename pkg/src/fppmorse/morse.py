"""Sublinear neighbourhoods, projections, contraction, Morse gauges, middle
recurrence and divergence of a marked line.

Sets Z are given as one of

* :class:`LineSet` / :class:`SegmentSet` for the marked line or a finite
  stretch of it (distances and projections in closed form);
* :class:`FiniteSet` for an explicit vertex set (multi-source BFS);
* :class:`WholeSet` for the whole graph.

Every set exposes ``locate(g, x, cutoff) -> (d(x, Z) or None, argmin set)``
and ``diameter(g, points)``.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import PathError, PreconditionError
from .graphs import Generator, MarkedLine, RegularTree, Vertex, bfs, distance, set_distance, some_geodesic
from .metric import Path, QuasiCheck, quasigeodesic_check_all, slope
from .sublinear import ConcaveTable, SublinearFunction, concavize
from .weights import GAMMA, MASK64, fmix64

__all__ = [
    "LineSet", "SegmentSet", "FiniteSet", "WholeSet", "as_set",
    "NeighborhoodResult", "in_kappa_neighborhood", "nearest_point_projection",
    "ProjectionStats", "contraction_estimate", "sample_pairs", "fit_contracting_power",
    "climb", "sample_quasigeodesic", "MorseGauge", "morse2_test", "gauge_violations",
    "middle_third", "RecurrenceResult", "middle_recurrence_test", "sample_detours",
    "in_linear_neighborhood", "avoiding_shortest_path", "phi_samples", "phi_estimate",
    "Lemma33Result", "lemma33_inequality_check", "radius_contracting_fit", "concavize",
]


# ---------------------------------------------------------------- sets


@dataclass(frozen=True)
class LineSet:
    line: MarkedLine

    def locate(self, g, x, cutoff=None):
        return self.line.distance(x), self.line.projection(x)

    def diameter(self, g, points):
        idx = [self.line.index(p) for p in points]
        return max(idx) - min(idx) if idx else 0

    def __contains__(self, x):
        return x in self.line


@dataclass(frozen=True)
class SegmentSet:
    """line([lo, hi])"""

    line: MarkedLine
    lo: int
    hi: int

    def locate(self, g, x, cutoff=None):
        f = min(max(self.line.foot(x), self.lo), self.hi)
        return self.line.segment_distance(x, self.lo, self.hi), frozenset([self.line(f)])

    def diameter(self, g, points):
        idx = [self.line.index(p) for p in points]
        return max(idx) - min(idx) if idx else 0

    def __contains__(self, x):
        i = self.line.index(x)
        return i is not None and self.lo <= i <= self.hi


class FiniteSet:
    def __init__(self, vertices: Iterable[Vertex]):
        self.vertices = frozenset(vertices)
        if not self.vertices:
            raise PreconditionError("Z must be nonempty")

    def locate(self, g, x, cutoff=64):
        d, pts = set_distance(g, x, self.vertices.__contains__, cutoff)
        return d, frozenset(pts)

    def diameter(self, g, points):
        pts = sorted(points)
        return max((distance(g, a, b) for i, a in enumerate(pts) for b in pts[i + 1 :]), default=0)

    def __contains__(self, x):
        return x in self.vertices


class WholeSet:
    def locate(self, g, x, cutoff=None):
        return 0, frozenset([x])

    def diameter(self, g, points):
        return FiniteSet.diameter(self, g, points)

    def __contains__(self, x):
        return True


def as_set(Z):
    if isinstance(Z, (LineSet, SegmentSet, FiniteSet, WholeSet)):
        return Z
    if isinstance(Z, MarkedLine):
        return LineSet(Z)
    return FiniteSet(Z)


# ---------------------------------------------------------------- neighbourhoods


@dataclass(frozen=True)
class NeighborhoodResult:
    """``member`` is None when d(x, Z) exceeded the cutoff but the radius did not."""

    member: bool | None
    distance: int | None
    radius: float
    norm: int

    def __bool__(self):
        return self.member is True


def in_kappa_neighborhood(g, Z, kappa, n: float, x: Vertex, o: Vertex, cutoff: int = 256) -> NeighborhoodResult:
    """Is d(x, Z) <= n * kappa(d(o, x))?"""
    Z = as_set(Z)
    norm = distance(g, o, x)
    radius = n * kappa(norm)
    d, _ = Z.locate(g, x, cutoff)
    if d is None:
        # d > cutoff: decided only if the radius is below the cutoff
        return NeighborhoodResult(False if radius < cutoff else None, None, radius, norm)
    return NeighborhoodResult(d <= radius, d, radius, norm)


def in_linear_neighborhood(g, line: MarkedLine, c: float, x: Vertex, o: Vertex | None = None) -> bool:
    """x in Ln(line, c): d(x, line) <= c * d(o, x)."""
    if c <= 0:
        raise PreconditionError("linear neighbourhood constant must be positive")
    o = line.o if o is None else o
    return line.distance(x) <= c * distance(g, o, x)


def nearest_point_projection(g, Z, x: Vertex, cutoff: int = 256) -> frozenset:
    d, pts = as_set(Z).locate(g, x, cutoff)
    if d is None:
        raise PreconditionError(f"no point of Z within {cutoff} of {x!r}")
    return pts


# ---------------------------------------------------------------- contraction


def climb(g, line: MarkedLine, t: int, h: int, rng: random.Random) -> Vertex:
    """Walk up to ``h`` steps straight away from line(t), keeping the foot at t.

    Stops early when no neighbour increases the line distance (a patch top).
    """
    v = line(t)
    for _ in range(h):
        d = line.distance(v)
        up = [w for w in g.neighbors(v) if line.distance(w) == d + 1 and line.foot(w) == t]
        if not up:
            break
        v = up[0] if len(up) == 1 else rng.choice(sorted(up))
    return v


def sample_pairs(g, line: MarkedLine, count: int, positions: tuple[int, int], height: int, C1: float, seed: int):
    """Pairs (x, y) with x off the line and y a random walk of <= C1*d(x, line) steps from x."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        t = rng.randint(*positions)
        x = climb(g, line, t, rng.randint(1, height), rng)
        y = x
        for _ in range(int(C1 * line.distance(x))):
            y = rng.choice(g.neighbors(y))
        out.append((x, y))
    return out


@dataclass(frozen=True)
class ProjectionStats:
    c2: float
    witness: tuple | None
    samples: int
    skipped: int  # x on Z
    rejected: int  # d(x, y) > C1 d(x, Z)
    C1: float

    def to_json(self):
        return {
            "c2": self.c2,
            "witness": [list(v) for v in self.witness] if self.witness else None,
            "samples": self.samples,
            "skipped": self.skipped,
            "rejected": self.rejected,
            "C1": self.C1,
        }


def contraction_estimate(
    g, Z, kappa, pairs, C1: float = 1.0, o: Vertex | None = None, cutoff: int = 256, log: list | None = None
):
    """c2 = max diam(pi(x) u pi(y)) / kappa(||x||) over admissible pairs.

    ``log`` collects (x, y, d(x, Z), diameter, value) for each admissible pair.
    """
    Z = as_set(Z)
    o = (0, 0, 0) if o is None else o
    best, witness = 0.0, None
    used = skipped = rejected = 0
    for x, y in pairs:
        dx, px = Z.locate(g, x, cutoff)
        if dx == 0:
            skipped += 1
            continue
        if distance(g, x, y) > C1 * dx:
            rejected += 1
            continue
        _, py = Z.locate(g, y, cutoff)
        used += 1
        diam = Z.diameter(g, px | py)
        val = diam / kappa(distance(g, o, x))
        if log is not None:
            log.append((x, y, dx, diam, val))
        if val > best:
            best, witness = val, (x, y)
    return ProjectionStats(best, witness, used, skipped, rejected, C1)


@dataclass(frozen=True)
class PowerFit:
    power: float | None
    kappa: SublinearFunction | None
    table: dict  # power -> (c2 at scale S, c2 at 2S)
    threshold: float


def fit_contracting_power(
    g,
    line: MarkedLine,
    powers: Sequence[float] = (0.25, 0.5, 0.75),
    scale: int = 256,
    count: int = 400,
    C1: float = 1.0,
    threshold: float = 1.1,
    seed: int = 0,
) -> PowerFit:
    """Smallest p such that c2 for kappa = t^p does not grow when the sample radius doubles.

    Samples at scale S take foot positions in [S/2, S]; heights go up to S.
    """
    table = {}
    chosen = None
    for p in sorted(powers):
        kappa = SublinearFunction("pow", 1.0, p)
        c = []
        for k, S in enumerate((scale, 2 * scale)):
            pairs = sample_pairs(g, line, count, (S // 2, S), S, C1, seed + k)
            c.append(contraction_estimate(g, line, kappa, pairs, C1, line.o).c2)
        table[p] = tuple(c)
        if chosen is None and c[1] <= threshold * c[0]:
            chosen = p
    kappa = SublinearFunction("pow", 1.0, chosen) if chosen is not None else None
    return PowerFit(chosen, kappa, table, threshold)


# ---------------------------------------------------------------- quasi-geodesics and Morse gauges


def _concat(g, points) -> Path:
    verts = [points[0]]
    for a, b in zip(points, points[1:]):
        if a != b:
            verts.extend(some_geodesic(g, a, b)[1:])
    return Path(verts)


def sample_quasigeodesic(
    g, line: MarkedLine, a: int, b: int, q: float, Q: float, seed: int, waypoints: int | None = None
) -> tuple[Path, QuasiCheck]:
    """A (q, Q)-quasi-geodesic from line(a) to line(b) through random off-line waypoints.

    Waypoint heights start from the budget h = Q/2 + (1 - 1/q)|b-a|/4 and are
    halved until the exhaustive check passes; with zero height the path is a
    geodesic, so the loop always terminates.
    """
    if q < 1 or Q < 0:
        raise PreconditionError(f"infeasible quasi-geodesic budget q={q}, Q={Q}")
    if abs(b - a) < 4:
        raise PreconditionError("endpoints must be at least 4 apart")
    rng = random.Random(seed)
    lo, hi = min(a, b), max(a, b)
    k = rng.randint(0, 3) if waypoints is None else waypoints
    feet = sorted(rng.randint(lo + 1, hi - 1) for _ in range(k))
    if a > b:
        feet.reverse()
    budget = Q / 2 + (1 - 1 / q) * (hi - lo) / 4
    heights = [rng.randint(0, int(budget)) for _ in feet]
    climb_seed = rng.getrandbits(32)
    while True:
        crng = random.Random(climb_seed)
        pts = [line(a)] + [climb(g, line, t, h, crng) for t, h in zip(feet, heights)] + [line(b)]
        p = _concat(g, pts)
        check = quasigeodesic_check_all(g, p, q, Q)
        if check:
            return p, check
        heights = [h // 2 for h in heights]


def _excess(g, Z, kappa, p: Path, o):
    """max over x in p of d(x, Z) / kappa(||x||), with its vertex."""
    best, arg = 0.0, None
    for x in p:
        d, _ = Z.locate(g, x)
        val = d / kappa(distance(g, o, x))
        if val > best:
            best, arg = val, x
    return best, arg


def gauge_violations(g, Z, kappa, paths: Iterable[Path], m: float, o: Vertex) -> list:
    """Vertices of the given paths that lie outside N_kappa(Z, m)."""
    Z = as_set(Z)
    out = []
    for p in paths:
        for x in p:
            d, _ = Z.locate(g, x)
            if d > m * kappa(distance(g, o, x)):
                out.append(x)
    return out


@dataclass
class MorseGauge:
    """Fitted m(q, Q) per grid point plus the raw per-separation maxima."""

    m: dict = field(default_factory=dict)  # (q, Q) -> clamped m-hat
    raw: dict = field(default_factory=dict)  # (q, Q) -> unclamped m-hat
    clamped: dict = field(default_factory=dict)  # (q, Q) -> bool
    by_separation: dict = field(default_factory=dict)  # (q, Q) -> {sep: m-hat}
    witness: dict = field(default_factory=dict)  # (q, Q) -> vertex attaining raw m-hat
    samples: list = field(default_factory=list)  # (q, Q, sep, trial, m-hat)

    def growth_slope(self, qQ) -> float:
        """Least-squares slope of m-hat against endpoint separation."""
        pts = sorted(self.by_separation[qQ].items())
        if len(pts) < 2:
            return 0.0
        xs, ys = zip(*pts)
        mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
        sxx = sum((x - mx) ** 2 for x in xs)
        return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx

    def stabilizing(self, qQ, rel_tol: float = 0.1) -> bool:
        """m-hat at the largest separation within rel_tol of the value at the previous one.

        Both values are clamped below by max(q, Q), as ``m`` is.
        """
        floor = max(qQ)
        pts = [max(v, floor) for _, v in sorted(self.by_separation[qQ].items())]
        if len(pts) < 2:
            return True
        return pts[-1] <= (1 + rel_tol) * pts[-2]

    def to_json(self):
        key = lambda qQ: f"{qQ[0]!r},{qQ[1]!r}"
        return {
            "m": {key(k): v for k, v in sorted(self.m.items())},
            "raw": {key(k): v for k, v in sorted(self.raw.items())},
            "clamped": {key(k): v for k, v in sorted(self.clamped.items())},
            "by_separation": {
                key(k): {str(s): v for s, v in sorted(d.items())} for k, d in sorted(self.by_separation.items())
            },
            "witness": {key(k): list(v) if v else None for k, v in sorted(self.witness.items())},
            "growth_slope": {key(k): self.growth_slope(k) for k in sorted(self.m)},
        }


def morse2_test(
    g,
    line: MarkedLine,
    kappa,
    grid: Sequence[tuple[float, float]],
    trials: int,
    separations: Sequence[int] = (16, 32, 64),
    center: int = 0,
    seed: int = 0,
) -> MorseGauge:
    """Fit m(q, Q) = max over sampled (q, Q)-quasi-geodesics with endpoints on the line
    of d(x, line)/kappa(||x||), clamped below by max(q, Q).

    ``raw`` keeps the per-grid-point maxima; ``m`` pools every dominated grid
    point, which makes it nondecreasing in q and in Q.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    Z = LineSet(line)
    o = line.o
    gauge = MorseGauge()
    for qi, (q, Q) in enumerate(grid):
        overall, arg = 0.0, None
        gauge.by_separation[(q, Q)] = {}
        for sep in separations:
            sep_best = 0.0
            for t in range(trials):
                trial_seed = hash_seed(seed, qi, sep, t)
                rng = random.Random(trial_seed)
                a = center + rng.randint(-sep // 2, sep // 2) - sep // 2
                p, _ = sample_quasigeodesic(g, line, a, a + sep, q, Q, trial_seed)
                val, x = _excess(g, Z, kappa, p, o)
                gauge.samples.append((q, Q, sep, t, val))
                sep_best = max(sep_best, val)
                if val > overall:
                    overall, arg = val, x
            gauge.by_separation[(q, Q)][sep] = sep_best
        gauge.raw[(q, Q)] = overall
        gauge.witness[(q, Q)] = arg
    # a (q', Q')-quasi-geodesic with q' <= q, Q' <= Q is also a (q, Q) one, so
    # samples drawn for dominated grid points count for (q, Q) as well
    for q, Q in gauge.raw:
        pooled = max(v for (a, b), v in gauge.raw.items() if a <= q and b <= Q)
        floor = max(q, Q)
        gauge.clamped[(q, Q)] = pooled < floor
        gauge.m[(q, Q)] = max(pooled, floor)
    return gauge


def hash_seed(*parts: int) -> int:
    """Deterministic 64-bit seed from integers (no dependence on PYTHONHASHSEED)."""
    h = fmix64(GAMMA)
    for x in parts:
        h = fmix64(((h ^ (int(x) & MASK64)) + GAMMA) & MASK64)
    return h


# ---------------------------------------------------------------- middle recurrence


def middle_third(g, p: Path | Sequence[Vertex], a: Vertex, b: Vertex) -> list:
    """Vertices x of p between a and b with min(d(x, a), d(x, b)) >= d(a, b)/3."""
    verts = list(p)
    if a not in verts or b not in verts:
        raise PathError("a and b must lie on the path")
    if a == b:
        warnings.warn("middle third of a degenerate segment is empty", stacklevel=2)
        return []
    i, j = sorted((verts.index(a), verts.index(b)))
    dab = distance(g, a, b)
    return [x for x in verts[i : j + 1] if 3 * min(distance(g, x, a), distance(g, x, b)) >= dab]


@dataclass(frozen=True)
class RecurrenceResult:
    c: float
    witness: Path | None
    per_trial: tuple  # (d(a, b), value) for each accepted sample
    accepted: int
    rejected: int

    def to_json(self):
        return {
            "c": self.c,
            "witness": [list(v) for v in self.witness] if self.witness else None,
            "accepted": self.accepted,
            "rejected": self.rejected,
        }


def sample_detours(g, line: MarkedLine, a: int, b: int, C: float, rng: random.Random) -> Path:
    """A random detour from line(a) to line(b) through up to three off-line waypoints."""
    lo, hi = min(a, b), max(a, b)
    d = hi - lo
    hmax = max(0, int((C - 1) * d / 2))
    k = rng.randint(1, 3)
    feet = sorted(rng.randint(lo, hi) for _ in range(k))
    pts = [line(a)] + [climb(g, line, t, rng.randint(0, hmax), rng) for t in feet] + [line(b)]
    return _concat(g, pts)


def patch_detours(g, line: MarkedLine, a: int, b: int) -> list:
    """Deterministic over-the-patch detours for strip generators (empty otherwise)."""
    if not hasattr(g, "patches_at"):
        return []
    lo, hi = min(a, b), max(a, b)
    seen = set()
    out = []
    for x in range(lo, hi + 1):
        for L, w in g.patches_at(x):
            if (L, w) in seen:
                continue
            seen.add((L, w))
            pts = [line(a), (L, w, L), (L + w, w, L), line(b)]
            out.append(_concat(g, pts))
    return out


def middle_recurrence_test(
    g,
    line: MarkedLine,
    C: float,
    kappa_prime,
    paths: Iterable[tuple[int, int, Path]],
    log: list | None = None,
) -> RecurrenceResult:
    """c = max over detours p of min_{x in p} d(x, middle third)/kappa'(||x||).

    ``paths`` yields (a, b, p) with p running from line(a) to line(b); samples
    with length above C*d(a, b) are rejected and counted. ``log`` collects
    (a, b, length, value or None when rejected).
    """
    best, witness = 0.0, None
    per, rejected = [], 0
    o = line.o
    for a, b, p in paths:
        d = abs(b - a)
        if p.m > C * d:
            rejected += 1
            if log is not None:
                log.append((a, b, p.m, None))
            continue
        lo, hi = min(a, b), max(a, b)
        # on the line, d(x, a) = |i - a|; the middle third is an index interval
        mt = SegmentSet(line, lo + math.ceil(d / 3), hi - math.ceil(d / 3))
        val = min(mt.locate(g, x)[0] / kappa_prime(distance(g, o, x)) for x in p)
        per.append((d, val))
        if log is not None:
            log.append((a, b, p.m, val))
        if witness is None or val > best:
            best, witness = val, p
    return RecurrenceResult(best, witness, tuple(per), len(per), rejected)


# ---------------------------------------------------------------- divergence


def avoiding_shortest_path(g, line: MarkedLine, R: int, x1: Vertex, y1: Vertex, box: int | None = None) -> Path | None:
    """Unit-weight shortest path from x1 to y1 avoiding the open R-neighbourhood of the line.

    The search is confined to paths of length <= box (default 3 max(d(x1, y1), R));
    None means no such path.
    """
    for v in (x1, y1):
        if line.distance(v) != R:
            raise PreconditionError(f"endpoint {v!r} is at distance {line.distance(v)} from the line, not {R}")
    if isinstance(g, RegularTree) and R > 0:
        # the R-avoiding component of x is the subtree under its depth-R ancestor
        if x1[0] != y1[0] or g._ancestor(x1, R) != g._ancestor(y1, R):
            return None
        return Path(g.path(x1, y1))
    if box is None:
        box = 3 * max(distance(g, x1, y1), R)
    dist = bfs(g, [x1], radius=box, allowed=lambda v: line.distance(v) >= R, stop=lambda v, d: v == y1)
    if y1 not in dist:
        return None
    path = [y1]
    while path[-1] != x1:
        cur = path[-1]
        k = dist[cur]
        path.append(min(w for w in g.neighbors(cur) if dist.get(w) == k - 1))
    return Path(path[::-1])


def phi_samples(g, line: MarkedLine, R: int, count: int, positions: tuple[int, int], seed: int):
    """(s, t, x', y') with x' R straight above line(s), y' above line(t), d(x', y') >= 4R."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        s = rng.randint(*positions)
        t = s + rng.randint(4 * R, 8 * R) * rng.choice((-1, 1))
        x1 = climb(g, line, s, R, rng)
        y1 = climb(g, line, t, R, rng)
        if line.distance(x1) != R or line.distance(y1) != R or distance(g, x1, y1) < 4 * R:
            continue
        out.append((s, t, x1, y1))
    return out


@dataclass(frozen=True)
class PhiEntry:
    phi: float | None  # None: no valid sample
    samples: int
    disconnected: int
    witness: tuple | None
    reason: str = ""


def phi_estimate(g, line: MarkedLine, samples_by_R: dict, box: int | None = None, log: list | None = None) -> dict:
    """phi(R) = min over samples of |avoiding path| / d(x, y); disconnected samples count as +inf.

    ``log`` collects (R, s, t, path length or None, ratio) per sample.
    """
    table = {}
    for R, samples in sorted(samples_by_R.items()):
        if not samples:
            table[R] = PhiEntry(None, 0, 0, None, "no valid sample")
            continue
        best, witness, disc = math.inf, None, 0
        for s, t, x1, y1 in samples:
            p = avoiding_shortest_path(g, line, R, x1, y1, box)
            val = math.inf if p is None else p.m / abs(t - s)
            if log is not None:
                log.append((R, s, t, None if p is None else p.m, val))
            if p is None:
                disc += 1
                continue
            if val < best:
                best, witness = val, (s, t, x1, y1)
        table[R] = PhiEntry(best, len(samples), disc, witness)
    return table


# ---------------------------------------------------------------- far-path inequality monitor


@dataclass(frozen=True)
class Lemma33Result:
    holds: bool
    slack: float
    lhs: float
    rhs: float


def lemma33_inequality_check(g, line: MarkedLine, p: Path, K: int, kappa_prime) -> Lemma33Result:
    """kappa'(K)/(2K) >= (1 - (2K + kappa'(K))/d(s, e)) / sl(p) for a path at distance >= K."""
    if K <= 0:
        raise PreconditionError("K must be positive")
    if line.distance(p.start) != K or line.distance(p.end) != K:
        raise PreconditionError("path endpoints must be at distance exactly K from the line")
    if any(line.distance(x) < K for x in p):
        raise PreconditionError("path comes closer than K to the line")
    dse = distance(g, p.start, p.end)
    if dse == 0:
        raise PathError("endpoints coincide: d(s, e) = 0")
    kp = kappa_prime(K)
    lhs = kp / (2 * K)
    rhs = (1 - (2 * K + kp) / dse) / slope(g, p)
    return Lemma33Result(lhs >= rhs, lhs - rhs, lhs, rhs)


def radius_contracting_fit(g, line: MarkedLine, radii: Sequence[int], centers: Iterable[Vertex]) -> ConcaveTable:
    """Concave majorant of K -> max diam(pi(B)) over balls B of radius K disjoint from the line.

    Ball projections are read off the feet of the ball's vertices.
    """
    centers = list(centers)
    samples = []
    for K in sorted(radii):
        best = 1.0
        for c in centers:
            if line.distance(c) <= K:
                continue
            dist = bfs(g, [c], radius=K)
            feet = [line.foot(v) for v in dist]
            best = max(best, float(max(feet) - min(feet)))
        samples.append((float(K), best))
    return concavize(samples)


def lemma33_samples(g, line: MarkedLine, radii: Sequence[int], count: int, positions: tuple[int, int], seed: int):
    """(K, p) with p a path at distance >= K from the line and endpoints at distance exactly K.

    Each sample is the shortest K-avoiding path between two points K above the
    line, raised by a random extra height when the raised route stays valid.
    Draws are repeated until ``count`` samples exist (at most 20 * count draws).
    """
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        K = rng.choice(list(radii))
        s = rng.randint(*positions)
        t = s + rng.randint(1, 4 * K + 8) * rng.choice((-1, 1))
        x1 = climb(g, line, s, K, rng)
        y1 = climb(g, line, t, K, rng)
        if line.distance(x1) != K or line.distance(y1) != K or x1 == y1:
            continue
        p = avoiding_shortest_path(g, line, K, x1, y1)
        if p is None:
            continue
        h = rng.randint(0, K)
        if h:
            up1 = climb(g, line, s, K + h, random.Random(rng.getrandbits(32)))
            up2 = climb(g, line, t, K + h, random.Random(rng.getrandbits(32)))
            raised = _concat(g, [x1, up1, up2, y1])
            if all(line.distance(x) >= K for x in raised) and raised.self_avoiding:
                p = raised
        out.append((K, p))
    return out
