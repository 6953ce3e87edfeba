"""Trial pipeline for escaping omega-geodesics, boundedness reports, limit
extraction, and the two linear-growth estimators for omega-lengths."""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import PreconditionError
from .graphs import Generator, MarkedLine, Vertex, distance, parse_generator
from .metric import Path, omega_distance, omega_distance_to_set
from .weights import Distribution, WeightField, parse_distribution

# ---------------------------------------------------------------- trials


RECORD_FIELDS = (
    "gen", "dist", "seed", "n", "d_graph", "d_omega", "edges", "omega_length", "distance", "exact", "settled",
)


@dataclass(frozen=True)
class TrialRecord:
    """One escaping-geodesic trial between line(-n) and line(n).

    Wall time is kept out of the record so records are a pure function of
    (generator, distribution, seed, n); see :class:`Trial`.
    """

    gen: str
    dist: str
    seed: int
    n: int
    d_graph: int  # d(o, geodesic)
    d_omega: float  # d_omega(o, geodesic)
    edges: int
    omega_length: float
    distance: float  # d_omega(x_n, y_n) as reported by the search
    exact: bool
    settled: int

    def row(self) -> list:
        return [
            self.gen, self.dist, self.seed, self.n, self.d_graph, repr(self.d_omega), self.edges,
            repr(self.omega_length), repr(self.distance), int(self.exact), self.settled,
        ]


@dataclass(frozen=True)
class Trial:
    record: TrialRecord
    path: Path
    wall: float


def run_thm38_trial(g: Generator, W: WeightField, n: int, cap: int | None = None) -> Trial:
    """omega-geodesic between line(-n) and line(n) and its distances to the base point."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    line = g.line()
    o = line.o
    t0 = time.perf_counter()
    res = omega_distance(g, W, line(-n), line(n), cap)
    path = res.path
    d_graph = min(distance(g, o, v) for v in path)
    if o in set(path.vertices):
        d_om = 0.0
    else:
        d_om = omega_distance_to_set(g, W, o, path.vertices, cap)[0].distance
    rec = TrialRecord(
        g.spec, W.distribution.spec, W.seed, n, d_graph, d_om, path.m,
        path.omega_length(W), res.distance, res.exact, res.settled,
    )
    return Trial(rec, path, time.perf_counter() - t0)


@lru_cache(maxsize=8)
def _generator(spec: str) -> Generator:
    # strip generators carry width tables that are costly to rebuild per trial
    return parse_generator(spec)


def _job(args):
    gen_spec, dist_spec, seed, n, cap = args
    g = _generator(gen_spec)
    return run_thm38_trial(g, WeightField(seed, parse_distribution(dist_spec)), n, cap)


def run_trials(
    gen_spec: str, dist_spec: str, seeds: Iterable[int], scales: Sequence[int], jobs: int = 1, cap: int | None = None
) -> list[Trial]:
    """All (seed, n) trials, returned in (seed, n) order whatever the completion order."""
    work = [(gen_spec, dist_spec, s, n, cap) for s in seeds for n in scales]
    if jobs <= 1:
        return [_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_job, work, chunksize=max(1, len(work) // (8 * jobs))))


# ---------------------------------------------------------------- boundedness


def nearest_rank(values: Sequence[float], q: float) -> float:
    """The ceil(q N)-th smallest value."""
    xs = sorted(values)
    if not xs:
        raise PreconditionError("quantile of an empty sample")
    k = max(1, math.ceil(q * len(xs)))
    return xs[k - 1]


@dataclass(frozen=True)
class BoundednessReport:
    scales: tuple
    stats: dict  # n -> {"count", "q50", "q95", "max"}
    mid: int
    top: int
    factor: float
    stabilizing: bool
    excluded: int  # inexact trials left out

    def to_json(self):
        return {
            "scales": list(self.scales),
            "stats": {str(n): s for n, s in sorted(self.stats.items())},
            "mid_scale": self.mid,
            "top_scale": self.top,
            "factor": self.factor,
            "verdict": "stabilizing" if self.stabilizing else "non-stabilizing",
            "excluded_inexact": self.excluded,
        }


def boundedness_report(
    records: Iterable[TrialRecord], factor: float = 1.5, min_scales: int = 3, min_seeds: int = 30
) -> BoundednessReport:
    """Per-scale quantiles of d(o, geodesic); stabilizing iff q95(top) <= factor * q95(mid)."""
    by_n: dict = {}
    excluded = 0
    for r in records:
        if not r.exact:
            excluded += 1
            continue
        by_n.setdefault(r.n, []).append(r.d_graph)
    scales = tuple(sorted(by_n))
    if len(scales) < min_scales:
        raise PreconditionError(f"need at least {min_scales} scales, got {len(scales)}: {list(scales)}")
    small = {n: len(v) for n, v in by_n.items() if len(v) < min_seeds}
    if small:
        raise PreconditionError(f"need at least {min_seeds} exact trials per scale; short scales: {small}")
    stats = {
        n: {"count": len(v), "q50": nearest_rank(v, 0.5), "q95": nearest_rank(v, 0.95), "max": max(v)}
        for n, v in by_n.items()
    }
    mid, top = scales[(len(scales) - 1) // 2], scales[-1]
    ok = stats[top]["q95"] <= factor * stats[mid]["q95"]
    return BoundednessReport(scales, stats, mid, top, factor, ok, excluded)


# ---------------------------------------------------------------- limit extraction


def _trace(g, path: Sequence[Vertex], v: Vertex, r: int) -> tuple:
    """The maximal run of the path inside ball(v, r) that contains v."""
    k = path.index(v)
    i = k
    while i > 0 and distance(g, v, path[i - 1]) <= r:
        i -= 1
    j = k
    while j + 1 < len(path) and distance(g, v, path[j + 1]) <= r:
        j += 1
    return tuple(path[i : j + 1])


def _is_contiguous_sub(small: tuple, big: tuple) -> bool:
    m = len(small)
    return any(big[i : i + m] == small for i in range(len(big) - m + 1))


@dataclass
class LimitGeodesic:
    anchor: Vertex | None
    traces: dict = field(default_factory=dict)  # r -> majority trace
    support: dict = field(default_factory=dict)  # r -> (count, surviving)
    tied: dict = field(default_factory=dict)  # r -> bool
    nested: list = field(default_factory=list)  # per ladder step: bool
    trace: tuple = ()  # largest trace of the initial nested chain
    K: float | None = None  # d_omega(o, trace)
    verified: bool = False  # trace is an omega-geodesic between its endpoints
    failure: str = ""
    competing: tuple | None = None  # the two traces when nesting breaks

    @property
    def nesting_rate(self) -> float:
        return sum(self.nested) / len(self.nested) if self.nested else 0.0

    def to_json(self):
        return {
            "anchor": list(self.anchor) if self.anchor else None,
            "traces": {str(r): [list(v) for v in t] for r, t in sorted(self.traces.items())},
            "support": {str(r): list(s) for r, s in sorted(self.support.items())},
            "tied": {str(r): t for r, t in sorted(self.tied.items())},
            "nested": self.nested,
            "trace": [list(v) for v in self.trace],
            "K": self.K,
            "verified": self.verified,
            "failure": self.failure,
            "competing": [[list(v) for v in t] for t in self.competing] if self.competing else None,
        }


def extract_limit(
    g: Generator, W, trials: Sequence[Trial], ladder: Sequence[int] = (4, 8, 16, 32), threshold: float = 0.5
) -> LimitGeodesic:
    """Nested majority traces around the most visited vertex.

    All trials should share one environment (one seed, several n). A trial
    survives at radius r when it visits the anchor and both its endpoints lie
    farther than r from it.
    """
    line = g.line()
    o = line.o
    counts = Counter()
    for t in trials:
        counts.update(set(t.path.vertices))
    if not counts:
        return LimitGeodesic(None, failure="no trials")
    top = max(counts.values())
    anchor = min((v for v, c in counts.items() if c == top), key=lambda v: (distance(g, o, v), v))
    out = LimitGeodesic(anchor)
    for r in sorted(ladder):
        traces = Counter()
        surviving = 0
        for t in trials:
            p = t.path.vertices
            if anchor not in p or distance(g, anchor, p[0]) <= r or distance(g, anchor, p[-1]) <= r:
                continue
            surviving += 1
            traces[_trace(g, p, anchor, r)] += 1
        if not surviving:
            out.failure = f"no surviving trial at radius {r}"
            break
        best = max(traces.values())
        winners = sorted(t for t, c in traces.items() if c == best)
        out.tied[r] = len(winners) > 1
        if best < threshold * surviving:
            out.failure = f"no majority trace at radius {r} ({best}/{surviving})"
            break
        out.traces[r] = winners[0]
        out.support[r] = (best, surviving)
    radii = sorted(out.traces)
    chain_ok = True
    out.trace = out.traces[radii[0]] if radii else ()
    for r0, r1 in zip(radii, radii[1:]):
        ok = _is_contiguous_sub(out.traces[r0], out.traces[r1])
        out.nested.append(ok)
        if ok and chain_ok:
            out.trace = out.traces[r1]
        elif not ok and chain_ok:
            chain_ok = False
            out.competing = (out.traces[r0], out.traces[r1])
            out.failure = out.failure or f"traces at radii {r0} and {r1} do not nest"
    # ladder steps that never got a trace count as failures
    out.nested += [False] * (len(ladder) - 1 - len(out.nested))
    if out.trace:
        tr = out.trace
        if o in tr:
            out.K = 0.0
        else:
            out.K = omega_distance_to_set(g, W, o, tr)[0].distance
        res = omega_distance(g, W, tr[0], tr[-1])
        length = Path(tr).omega_length(W)
        out.verified = res.exact and abs(res.distance - length) <= 1e-12 * max(1.0, length)
    return out


# ---------------------------------------------------------------- linear bounds on omega-lengths


def _exact(x: float) -> Fraction:
    return Fraction(x)


def estimate_prop213_upper(weights: Sequence[float], b: float) -> tuple[float, int, int]:
    """max over 0 <= i <= j <= L of S(j) - S(i) - 2b(j - i) along a ray.

    ``weights[k]`` is the weight of the k-th ray edge. Prefix sums and a
    running minimum give O(L); arithmetic is exact (rationals) and only the
    result is rounded, so it agrees bit for bit with the quadratic search.
    Returns (r0, i, j) with the first maximising pair.
    """
    two_b = 2 * _exact(b)
    T = Fraction(0)
    best, arg = Fraction(0), (0, 0)
    low, low_i = Fraction(0), 0
    for k, w in enumerate(weights, start=1):
        T += _exact(w) - two_b
        if T - low > best:
            best, arg = T - low, (low_i, k)
        if T < low:
            low, low_i = T, k
    return float(best), arg[0], arg[1]


def prop213_upper_bruteforce(weights: Sequence[float], b: float) -> float:
    """Quadratic reference for :func:`estimate_prop213_upper`."""
    two_b = 2 * _exact(b)
    ws = [_exact(w) for w in weights]
    best = Fraction(0)
    for i in range(len(ws) + 1):
        s = Fraction(0)
        for j in range(i + 1, len(ws) + 1):
            s += ws[j - 1] - two_b
            best = max(best, s)
    return float(best)


def ray_weights(W, line: MarkedLine, length: int) -> list:
    return [W.weight((line(k), line(k + 1))) for k in range(length)]


@dataclass(frozen=True)
class LowerFit:
    c: float
    r1: float
    samples: int
    rejected: int
    budget: float

    @property
    def positive(self) -> bool:
        return self.c > 0


def estimate_prop213_lower(
    g: Generator, W, o: Vertex, paths: Iterable[Sequence[Vertex]], r1_budget: float = 0.0
) -> LowerFit:
    """Largest c with |gamma|_w >= c|gamma| - r1 on all samples, for r1 <= budget.

    Every nonempty prefix of every sample path is a sample point. Paths that
    are not self-avoiding, or with d(o, gamma) > |gamma|, are rejected.
    """
    points = []
    rejected = 0
    for p in paths:
        p = list(p)
        if len(set(p)) != len(p) or len(p) < 2 or min(distance(g, o, v) for v in p) > len(p) - 1:
            rejected += 1
            continue
        s = 0.0
        near = math.inf
        for k in range(1, len(p)):
            s += W.weight((p[k - 1], p[k]) if p[k - 1] < p[k] else (p[k], p[k - 1]))
            near = min(near, distance(g, o, p[k - 1]), distance(g, o, p[k]))
            if near <= k:
                points.append((k, s))
    if not points:
        raise PreconditionError("no admissible sample path")
    # exact rationals so that r1 = 0 when the budget is 0
    budget = _exact(r1_budget)
    c = min((_exact(s) + budget) / k for k, s in points)
    r1 = max(Fraction(0), max(c * k - _exact(s) for k, s in points))
    return LowerFit(float(c), float(r1), len(points), rejected, r1_budget)


def greedy_light_path(g: Generator, W, start: Vertex, length: int) -> list:
    """Self-avoiding walk that always takes the lightest edge to an unvisited vertex."""
    path = [start]
    seen = {start}
    cur = start
    for _ in range(length):
        options = [v for v in g.neighbors(cur) if v not in seen]
        if not options:
            break
        cur = min(options, key=lambda v: (W.weight((cur, v) if cur < v else (v, cur)), v))
        path.append(cur)
        seen.add(cur)
    return path


# ---------------------------------------------------------------- escape geometry


@dataclass(frozen=True)
class Lemma38Result:
    status: str  # "ok", "fail" or "inapplicable"
    p: int | None = None
    q: int | None = None
    r: int | None = None
    detail: str = ""
    witness: int | None = None

    def __bool__(self):
        return self.status == "ok"


def lemma38_geometry_check(
    g: Generator, line: MarkedLine, path: Sequence[Vertex], R: int, pq: tuple[int, int] | None = None
) -> Lemma38Result:
    """Find p < q with d(path(p), line) = d(path(q), line) = R, every index in
    between at distance >= R, and d(path(p), path(q)) >= 4R.

    Without ``pq`` the indices come from the construction: r is the first index
    at distance exactly 10R from the ray line([10R, inf)), p the last index
    <= r and q the first index >= r within distance R of the line. With ``pq``
    the given pair is checked instead.
    """
    if R < 1:
        raise PreconditionError("R must be >= 1")
    o = line.o
    path = list(path)
    for k, v in enumerate(path):
        if distance(g, o, v) < 10 * R:
            return Lemma38Result("inapplicable", detail=f"vertex {k} lies inside ball(o, 10R)", witness=k)
    ld = [line.distance(v) for v in path]
    r = None
    if pq is None:
        r = next((k for k, v in enumerate(path) if line.ray_distance(v, 10 * R, 1) == 10 * R), None)
        if r is None:
            return Lemma38Result("fail", detail="path never reaches distance 10R from the positive ray")
        p = next((k for k in range(r, -1, -1) if ld[k] <= R), None)
        q = next((k for k in range(r, len(path)) if ld[k] <= R), None)
        if p is None or q is None:
            return Lemma38Result("fail", r=r, detail="path does not come within R of the line on both sides of r")
    else:
        p, q = pq
        if not 0 <= p < q < len(path):
            raise PreconditionError(f"bad index pair {pq}")
    if ld[p] != R or ld[q] != R:
        return Lemma38Result("fail", p, q, r, "endpoint not at distance exactly R", p if ld[p] != R else q)
    for k in range(p, q + 1):
        if ld[k] < R:
            return Lemma38Result("fail", p, q, r, f"index {k} is closer than R to the line", k)
    if distance(g, path[p], path[q]) < 4 * R:
        return Lemma38Result("fail", p, q, r, "d(path(p), path(q)) < 4R")
    return Lemma38Result("ok", p, q, r)
