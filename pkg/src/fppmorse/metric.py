"""Paths, omega-geodesics and the first-passage metric d_omega."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import inf
from typing import Iterable

from . import search
from .errors import PathError, PreconditionError
from .graphs import Generator, Vertex, ball_cap, distance
from .weights import omega_length


class Path:
    """A finite vertex sequence whose consecutive vertices are adjacent."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Vertex], gen: Generator | None = None):
        self.vertices = tuple(vertices)
        if not self.vertices:
            raise PathError("a path needs at least one vertex")
        if gen is not None:
            for i, (a, b) in enumerate(zip(self.vertices, self.vertices[1:])):
                if b not in gen.neighbors(a):
                    raise PathError(f"vertices {a!r} and {b!r} at step {i} are not adjacent")

    @property
    def m(self) -> int:
        """Graph length (number of edges)."""
        return len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other):
        return isinstance(other, Path) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Path({list(self.vertices)!r})"

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def self_avoiding(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def omega_length(self, W) -> float:
        return omega_length(self.vertices, W)

    def __add__(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise PathError(f"cannot join paths ending at {self.end!r} and starting at {other.start!r}")
        return Path(self.vertices + other.vertices[1:])


def subpath(p: Path, i: int, j: int) -> Path:
    """Vertices p(i)..p(j)."""
    if not 0 <= i <= j <= p.m:
        raise PathError(f"subpath indices ({i}, {j}) out of range for a path with {p.m} edges")
    return Path(p.vertices[i : j + 1])


@dataclass(frozen=True)
class GeodesicResult:
    distance: float
    path: Path
    settled: int
    exact: bool

    def to_json(self) -> dict:
        return {
            "distance": self.distance,
            "path": [list(v) for v in self.path],
            "settled": self.settled,
            "exact": self.exact,
        }


def omega_distance(g: Generator, W, u: Vertex, v: Vertex, cap: int | None = None) -> GeodesicResult:
    """Exact d_omega(u, v) and the canonical omega-geodesic by lazy Dijkstra.

    When more than ``cap`` vertices would be settled the search stops and the
    result carries the best upper bound found so far with ``exact=False``.
    """
    g.validate(u)
    g.validate(v)
    if u == v:
        return GeodesicResult(0.0, Path([u]), 0, True)
    cap = ball_cap() if cap is None else cap
    hull = g.hull(u, v)
    d, path, settled, exact, _ = search.dijkstra(g, W, u, (v,), cap, hull)
    if not path:
        return GeodesicResult(inf, Path([u]), settled, False)
    return GeodesicResult(d, Path(path), settled, exact)


def omega_distance_to_set(g: Generator, W, u: Vertex, targets: Iterable[Vertex], cap: int | None = None):
    """d_omega(u, T) for a finite set T; returns (GeodesicResult, nearest target)."""
    targets = frozenset(targets)
    if not targets:
        raise PreconditionError("target set is empty")
    cap = ball_cap() if cap is None else cap
    d, path, settled, exact, t = search.dijkstra(g, W, u, targets, cap)
    if not path:
        return GeodesicResult(inf, Path([u]), settled, False), None
    return GeodesicResult(d, Path(path), settled, exact), t


def slope(g: Generator, p: Path) -> float:
    """Arc length over endpoint distance."""
    if p.start == p.end:
        raise PathError("slope is undefined for a path with identical endpoints")
    d = distance(g, p.start, p.end, cutoff=p.m)
    return p.m / d


@dataclass(frozen=True)
class QuasiCheck:
    ok: bool
    witness: tuple | None = None  # (i, j, d(p_i, p_j)) of the first violation
    pairs_checked: int = 0

    def __bool__(self):
        return self.ok


def quasigeodesic_check(
    g: Generator, p: Path, q: float, Q: float, sample: int = 1000, seed: int = 0, exhaustive_below: int = 64
) -> QuasiCheck:
    """Check (1/q)|i-j| - Q <= d(p_i, p_j) <= q|i-j| + Q over index pairs.

    All pairs are checked when the path has at most ``exhaustive_below``
    edges, otherwise ``sample`` random pairs.
    """
    if q < 1 or Q < 0:
        raise PreconditionError(f"need q >= 1 and Q >= 0, got q={q}, Q={Q}")
    m = p.m
    if m <= exhaustive_below:
        pairs = ((i, j) for i in range(m + 1) for j in range(i + 1, m + 1))
    else:
        rng = random.Random(seed)
        pairs = sorted({tuple(sorted(rng.sample(range(m + 1), 2))) for _ in range(sample)})
    n = 0
    for i, j in pairs:
        n += 1
        t = j - i
        d = distance(g, p[i], p[j], cutoff=t)
        if d is None or d < t / q - Q or d > q * t + Q:
            return QuasiCheck(False, (i, j, d), n)
    return QuasiCheck(True, None, n)


def quasigeodesic_check_all(g: Generator, p: Path, q: float, Q: float) -> QuasiCheck:
    """Exhaustive version of :func:`quasigeodesic_check`."""
    return quasigeodesic_check(g, p, q, Q, exhaustive_below=p.m)
