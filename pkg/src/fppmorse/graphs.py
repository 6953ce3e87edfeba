"""Lazy generators for infinite bounded-degree graphs.

Every vertex is a 3-tuple of signed 64-bit integers; tuples compare
lexicographically, which is the vertex order used for canonical edges and
all tie-breaking.

Encodings
---------
lattice(d)
    ``(x1, x2, x3)`` with the coordinates past ``d`` fixed at 0.
    Marked line: the first axis, ``line(i) = (i, 0, 0)``.
tree(k)
    The k-regular tree drawn around a bi-infinite spine. ``(s, 0, 0)`` is the
    spine vertex at position s. ``(s, h, w)`` with ``h >= 1`` hangs at depth h
    below spine vertex s; ``w`` is the branch word in mixed radix: the first
    digit lies in ``[0, k-2)``, later digits in ``[0, k-1)``, so the parent of
    ``(s, h, w)`` is ``(s, h-1, w // (k-1))`` for ``h >= 2``. Words of deep
    vertices outgrow 64 bits; they stay exact Python ints (the compiled search
    hands such vertices back to the Python backend).
    Marked line: the spine.
strip(kappa, cap)
    A spine copy of Z with square grid patches glued along spine segments.
    Patch widths are ``w(n) = min(cap, ceil(kappa(|n|)))``. Scanning n = 0, 1, ...
    a patch covering ``[n, n + w(n)]`` is accepted when ``n % w(n) == 0`` and it
    does not overlap the interior of the previously accepted patch; the
    negative side is the mirror image. A patch with left endpoint L and width w
    has vertex columns ``L..L+w`` and rows ``0..w``, row 0 being the spine.
    ``(x, 0, 0)`` is spine position x; ``(x, r, L)`` with ``r >= 1`` is row r,
    column x of the patch whose left endpoint is L.
    Marked line: the spine.
"""

from __future__ import annotations

import math
import os
import threading
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import GuardError, InvalidVertexError, PreconditionError, SpecError
from .sublinear import SublinearFunction, parse_sublinear

Vertex = tuple  # (int, int, int)
Edge = tuple  # (Vertex, Vertex) with edge[0] < edge[1]

INT64_MAX = 2**63 - 1
DEFAULT_BALL_CAP = 5_000_000
STRIP_TABLE_EXTENT = 1 << 16


def ball_cap() -> int:
    """Vertex cap for materialized balls; ``FPP_BALL_CAP`` overrides the default."""
    raw = os.environ.get("FPP_BALL_CAP")
    if raw is None:
        return DEFAULT_BALL_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SpecError(f"FPP_BALL_CAP must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise SpecError("FPP_BALL_CAP must be positive")
    return cap


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    if u == v:
        raise PreconditionError(f"loop edge at {u!r}")
    return (u, v) if u < v else (v, u)


def as_vertex(v: Iterable[int]) -> Vertex:
    """Pad a short coordinate sequence with zeros to a 3-tuple."""
    coords = tuple(int(c) for c in v)
    if len(coords) > 3:
        raise PreconditionError(f"vertex {coords!r} has more than 3 coordinates")
    return coords + (0,) * (3 - len(coords))


def _check_shape(gen, v, wide_last=False):
    if not (isinstance(v, tuple) and len(v) == 3 and all(isinstance(c, int) for c in v)):
        raise InvalidVertexError(gen, v, "expected a 3-tuple of ints")
    if any(abs(c) > INT64_MAX for c in (v[:2] if wide_last else v)):
        raise InvalidVertexError(gen, v, "coordinate exceeds 64 bits")


class Generator:
    """Common surface of the graph generators.

    Subclasses implement ``neighbors``, ``validate``, ``distance``; those with a
    marked line also implement ``line_point``, ``line_index``, ``line_distance``
    and ``foot``.
    """

    degree_bound: int
    kernel_kind: int | None = None

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec

    def neighbors(self, v: Vertex) -> list:
        raise NotImplementedError

    def validate(self, v: Vertex) -> None:
        raise NotImplementedError

    def distance(self, u: Vertex, v: Vertex) -> int | None:
        """Closed-form graph distance, or None when the generator has none."""
        return None

    def hull(self, u: Vertex, v: Vertex) -> frozenset | None:
        """A finite vertex set containing every simple u-v path, if one is known.

        Shortest-path searches may be confined to it without losing exactness.
        """
        return None

    @property
    def has_line(self) -> bool:
        return False

    def line(self) -> "MarkedLine":
        if not self.has_line:
            raise PreconditionError(f"generator {self.spec} has no marked line")
        return MarkedLine(self)

    @property
    def base_point(self) -> Vertex:
        return (0, 0, 0)


@dataclass(frozen=True, eq=True)
class Lattice(Generator):
    dim: int = 2

    kernel_kind = 0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise SpecError(f"lattice dimension must be 1, 2 or 3, got {self.dim}")

    @property
    def degree_bound(self) -> int:
        return 2 * self.dim

    @property
    def spec(self) -> str:
        return f"lattice:{self.dim}"

    def validate(self, v):
        _check_shape(self.spec, v)
        if any(v[self.dim :]):
            raise InvalidVertexError(self.spec, v, f"coordinates past dimension {self.dim} must be 0")

    def neighbors(self, v):
        self.validate(v)
        out = []
        for axis in range(self.dim):
            for step in (1, -1):
                w = list(v)
                w[axis] += step
                out.append(tuple(w))
        return out

    def distance(self, u, v):
        return abs(u[0] - v[0]) + abs(u[1] - v[1]) + abs(u[2] - v[2])

    def straight_geodesic(self, u, v):
        """Staircase geodesic: fix the first axis, then the second, then the third."""
        path = [u]
        cur = list(u)
        for axis in range(3):
            step = 1 if v[axis] > cur[axis] else -1
            while cur[axis] != v[axis]:
                cur[axis] += step
                path.append(tuple(cur))
        return path

    @property
    def has_line(self):
        return True

    def line_point(self, i):
        return (i, 0, 0)

    def line_index(self, v):
        return v[0] if v[1] == 0 and v[2] == 0 else None

    def line_distance(self, v):
        return abs(v[1]) + abs(v[2])

    def foot(self, v):
        return v[0]


@dataclass(frozen=True, eq=True)
class RegularTree(Generator):
    k: int = 3

    kernel_kind = 1

    def __post_init__(self):
        if self.k < 2:
            raise SpecError(f"tree degree must be >= 2, got {self.k}")

    @property
    def degree_bound(self) -> int:
        return self.k

    @property
    def spec(self) -> str:
        return f"tree:{self.k}"

    def validate(self, v):
        _check_shape(self.spec, v, wide_last=True)
        s, h, w = v
        if h < 0:
            raise InvalidVertexError(self.spec, v, "negative depth")
        if h == 0:
            if w != 0:
                raise InvalidVertexError(self.spec, v, "spine vertices have word 0")
            return
        if self.k == 2:
            raise InvalidVertexError(self.spec, v, "tree:2 has no off-spine vertices")
        if not 0 <= w < (self.k - 2) * (self.k - 1) ** (h - 1):
            raise InvalidVertexError(self.spec, v, "branch word out of range for depth")

    def _children(self, v):
        s, h, w = v
        if h == 0:
            return [(s, 1, j) for j in range(self.k - 2)]
        base = w * (self.k - 1)
        return [(s, h + 1, base + j) for j in range(self.k - 1)]

    def _parent(self, v):
        s, h, w = v
        if h == 1:
            return (s, 0, 0)
        return (s, h - 1, w // (self.k - 1))

    def neighbors(self, v):
        self.validate(v)
        s, h, _ = v
        if h == 0:
            return [(s - 1, 0, 0), (s + 1, 0, 0)] + self._children(v)
        return [self._parent(v)] + self._children(v)

    def _ancestor(self, v, depth):
        s, h, w = v
        if depth == 0:
            return (s, 0, 0)
        return (s, depth, w // (self.k - 1) ** (h - depth))

    def _lca_depth(self, u, v):
        if u[0] != v[0]:
            return None
        lo, hi = 0, min(u[1], v[1])
        # ancestors agree on a prefix of depths: binary search its end
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._ancestor(u, mid) == self._ancestor(v, mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def distance(self, u, v):
        t = self._lca_depth(u, v)
        if t is None:
            return u[1] + v[1] + abs(u[0] - v[0])
        return u[1] + v[1] - 2 * t

    def path(self, u, v) -> list:
        """The unique simple path from u to v."""
        t = self._lca_depth(u, v)
        up = [self._ancestor(u, d) for d in range(u[1], (t or 0) - 1, -1)]
        down = [self._ancestor(v, d) for d in range(v[1], (t or 0) - 1, -1)]
        if t is not None:
            return up + down[::-1][1:]
        step = 1 if v[0] > u[0] else -1
        spine = [(s, 0, 0) for s in range(u[0] + step, v[0], step)]
        return up + spine + down[::-1]

    def hull(self, u, v):
        return frozenset(self.path(u, v))

    straight_geodesic = path

    @property
    def has_line(self):
        return True

    def line_point(self, i):
        return (i, 0, 0)

    def line_index(self, v):
        return v[0] if v[1] == 0 else None

    def line_distance(self, v):
        return v[1]

    def foot(self, v):
        return v[0]


class StripLine(Generator):
    """Spine with glued grid patches of sublinearly growing width."""

    degree_bound = 6
    kernel_kind = 2

    def __init__(self, kappa: SublinearFunction, cap: int = 32):
        if cap < 1:
            raise SpecError(f"strip cap must be >= 1, got {cap}")
        self.kappa = kappa
        self.cap = int(cap)
        self._lock = threading.Lock()
        self._lefts: list[int] = []  # positive-side patches, sorted
        self._widths: list[int] = []
        self._scanned = -1  # positions 0.._scanned have been scanned
        self._last_end = 0
        self._ensure(STRIP_TABLE_EXTENT)

    def __eq__(self, other):
        return isinstance(other, StripLine) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"StripLine({self.kappa!r}, cap={self.cap})"

    def __getstate__(self):
        return {"kappa": self.kappa, "cap": self.cap, "extent": self._scanned}

    def __setstate__(self, state):
        self.__init__(state["kappa"], state["cap"])
        self._ensure(state["extent"])

    @property
    def spec(self):
        return f"strip:{self.kappa.spec}:{self.cap}"

    def width_at(self, n: int) -> int:
        return min(self.cap, max(1, math.ceil(self.kappa(abs(n)))))

    def _ensure(self, x: int) -> None:
        """Scan positive positions up to |x| + cap so every patch touching x is known."""
        need = abs(x) + self.cap + 1
        if need <= self._scanned:
            return
        with self._lock:
            n = self._scanned + 1
            while n <= need:
                w = self.width_at(n)
                if n % w == 0 and n >= self._last_end:
                    self._lefts.append(n)
                    self._widths.append(w)
                    self._last_end = n + w
                n += 1
            self._scanned = need

    @property
    def extent(self) -> int:
        return self._scanned

    def table(self, extent: int):
        """Positive-side patch table (lefts, widths) covering positions up to ``extent``."""
        self._ensure(extent)
        return list(self._lefts), list(self._widths)

    def _positive_patches(self, x):
        # patches [L, L+w] with L <= x <= L+w, x >= 0
        i = bisect_right(self._lefts, x) - 1
        out = []
        if i >= 1 and self._lefts[i - 1] + self._widths[i - 1] >= x:
            out.append((self._lefts[i - 1], self._widths[i - 1]))
        if i >= 0 and self._lefts[i] + self._widths[i] >= x:
            out.append((self._lefts[i], self._widths[i]))
        return out

    def patches_at(self, x: int) -> list:
        """(left, width) of every patch whose bottom edge contains spine position x."""
        self._ensure(x)
        out = []
        if x <= 0:
            out.extend((-L - w, w) for L, w in self._positive_patches(-x))
        if x >= 0:
            out.extend(self._positive_patches(x))
        return sorted(out)

    def patch_width(self, left: int) -> int | None:
        """Width of the patch with this left endpoint, or None if there is none."""
        self._ensure(left)
        if left >= 0:
            i = bisect_right(self._lefts, left) - 1
            if i >= 0 and self._lefts[i] == left:
                return self._widths[i]
            return None
        # mirror of the positive patch whose right end is -left
        for L, w in self._positive_patches(-left):
            if L + w == -left:
                return w
        return None

    def validate(self, v):
        _check_shape(self.spec, v)
        x, r, L = v
        if r == 0:
            if L != 0:
                raise InvalidVertexError(self.spec, v, "spine vertices have patch field 0")
            return
        if r < 0:
            raise InvalidVertexError(self.spec, v, "negative row")
        w = self.patch_width(L)
        if w is None:
            raise InvalidVertexError(self.spec, v, f"no patch with left endpoint {L}")
        if not (L <= x <= L + w and r <= w):
            raise InvalidVertexError(self.spec, v, f"outside patch [{L}, {L + w}] of width {w}")

    def neighbors(self, v):
        self.validate(v)
        x, r, L = v
        if r == 0:
            return [(x - 1, 0, 0), (x + 1, 0, 0)] + [(x, 1, P) for P, _ in self.patches_at(x)]
        w = self.patch_width(L)
        out = [(x, r - 1, L) if r > 1 else (x, 0, 0)]
        if r < w:
            out.append((x, r + 1, L))
        if x > L:
            out.append((x - 1, r, L))
        if x < L + w:
            out.append((x + 1, r, L))
        return out

    def distance(self, u, v):
        if u[1] and v[1] and u[2] == v[2]:
            return abs(u[0] - v[0]) + abs(u[1] - v[1])
        return u[1] + v[1] + abs(u[0] - v[0])

    def straight_geodesic(self, u, v):
        """Inside one patch: across, then up or down. Otherwise down, along the spine, up."""
        if u[1] and v[1] and u[2] == v[2]:
            x, r, L = u
            path = [u]
            while x != v[0]:
                x += 1 if v[0] > x else -1
                path.append((x, r, L))
            while r != v[1]:
                r += 1 if v[1] > r else -1
                path.append((x, r, L))
            return path
        path = [(u[0], r, u[2]) for r in range(u[1], 0, -1)]
        step = 1 if v[0] > u[0] else -1
        path += [(x, 0, 0) for x in range(u[0], v[0], step)]
        path += [(v[0], r, v[2]) if r else (v[0], 0, 0) for r in range(0, v[1] + 1)]
        return path

    @property
    def has_line(self):
        return True

    def line_point(self, i):
        return (i, 0, 0)

    def line_index(self, v):
        return v[0] if v[1] == 0 else None

    def line_distance(self, v):
        return v[1]

    def foot(self, v):
        return v[0]


class ExplicitGraph(Generator):
    """A finite graph given by adjacency; vertices are ``(i, 0, 0)``.

    Used for small oracle instances and hand-built examples.
    """

    kernel_kind = None

    def __init__(self, adjacency: Mapping[Vertex, Iterable[Vertex]]):
        adj: dict = {}
        for u, nbrs in adjacency.items():
            adj.setdefault(u, set())
            for v in nbrs:
                if u == v:
                    raise PreconditionError(f"loop at {u!r}")
                adj[u].add(v)
                adj.setdefault(v, set()).add(u)
        self._adj = {u: sorted(vs) for u, vs in adj.items()}
        self.degree_bound = max((len(vs) for vs in self._adj.values()), default=0)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None):
        adj: dict = {}
        if n is not None:
            for i in range(n):
                adj[(i, 0, 0)] = set()
        for a, b in edges:
            adj.setdefault((a, 0, 0), set()).add((b, 0, 0))
        return cls(adj)

    @property
    def spec(self):
        return f"explicit:{len(self._adj)}"

    @property
    def vertices(self):
        return sorted(self._adj)

    @property
    def edges(self):
        return sorted({canonical_edge(u, v) for u in self._adj for v in self._adj[u]})

    def validate(self, v):
        if v not in self._adj:
            raise InvalidVertexError(self.spec, v, "not a vertex of the graph")

    def neighbors(self, v):
        self.validate(v)
        return list(self._adj[v])


@dataclass(frozen=True)
class MarkedLine:
    """The designated bi-infinite geodesic of a generator; base point line(0)."""

    gen: Generator

    def __call__(self, i: int) -> Vertex:
        return self.gen.line_point(i)

    @property
    def o(self) -> Vertex:
        return self.gen.line_point(0)

    def __contains__(self, v) -> bool:
        return self.gen.line_index(v) is not None

    def index(self, v) -> int | None:
        return self.gen.line_index(v)

    def distance(self, v) -> int:
        """Graph distance from v to the whole line."""
        return self.gen.line_distance(v)

    def foot(self, v) -> int:
        """Index of the (unique) nearest line point."""
        return self.gen.foot(v)

    def projection(self, v) -> frozenset:
        return frozenset([self.gen.line_point(self.gen.foot(v))])

    def ray_distance(self, v, start: int, direction: int) -> int:
        """Distance from v to the ray {line(t) : direction * (t - start) >= 0}."""
        gap = direction * (start - self.gen.foot(v))
        return self.gen.line_distance(v) + max(0, gap)

    def segment_distance(self, v, i: int, j: int) -> int:
        """Distance from v to the segment line([min(i,j), max(i,j)])."""
        lo, hi = min(i, j), max(i, j)
        f = self.gen.foot(v)
        return self.gen.line_distance(v) + max(0, lo - f, f - hi)

    def segment(self, i: int, j: int) -> list:
        step = 1 if j >= i else -1
        return [self.gen.line_point(t) for t in range(i, j + step, step)]

    def norm(self, v) -> int:
        """||v|| = d(o, v)."""
        return self.gen.distance(self.o, v)


def parse_generator(text: str) -> Generator:
    """``lattice:d``, ``tree:k`` or ``strip:<kappa>:<cap>`` (kappa as in parse_sublinear)."""
    text = text.strip()
    head, _, rest = text.partition(":")
    try:
        if head == "lattice" and rest:
            return Lattice(int(rest))
        if head == "tree" and rest:
            return RegularTree(int(rest))
        if head == "strip" and rest:
            kappa_text, _, cap = rest.rpartition(":")
            return StripLine(parse_sublinear(kappa_text), int(cap))
    except ValueError as exc:
        raise SpecError(f"bad generator spec {text!r}: {exc}") from None
    raise SpecError(
        f"bad generator spec {text!r}; grammar: lattice:d | tree:k | strip:<kappa>:<cap> "
        "with kappa one of const:A, pow:A:p, log:A"
    )


def parse_vertex(text: str) -> Vertex:
    try:
        return as_vertex(int(c) for c in text.replace(" ", "").strip("()").split(","))
    except ValueError:
        raise SpecError(f"bad vertex {text!r}; expected comma-separated integers") from None


@dataclass(frozen=True)
class FiniteGraph:
    """A materialized ball: vertices in BFS layer order, induced edges."""

    center: Vertex
    radius: int
    layers: tuple
    edges: tuple
    adjacency: Mapping = field(repr=False, compare=False, default=None)

    @property
    def vertices(self) -> tuple:
        return tuple(v for layer in self.layers for v in layer)

    def __len__(self):
        return sum(len(layer) for layer in self.layers)

    def __contains__(self, v):
        return v in self.adjacency

    def depth(self) -> dict:
        return {v: d for d, layer in enumerate(self.layers) for v in layer}

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "radius": self.radius,
            "vertices": [list(v) for v in self.vertices],
            "edges": [[list(a), list(b)] for a, b in self.edges],
            "layers": [[list(v) for v in layer] for layer in self.layers],
        }


def ball(g: Generator, center: Vertex, radius: int, cap: int | None = None) -> FiniteGraph:
    """All vertices within graph distance ``radius`` of ``center`` plus induced edges."""
    if radius < 0:
        raise PreconditionError(f"radius must be >= 0, got {radius}")
    cap = ball_cap() if cap is None else cap
    g.validate(center)
    depth = {center: 0}
    layers = [[center]]
    for d in range(1, radius + 1):
        nxt = set()
        for u in layers[-1]:
            for v in g.neighbors(u):
                if v not in depth:
                    nxt.add(v)
        if not nxt:
            break
        layer = sorted(nxt)
        for v in layer:
            depth[v] = d
        if len(depth) > cap:
            raise GuardError(f"ball around {center!r} of radius {radius} exceeds cap of {cap} vertices")
        layers.append(layer)
    adjacency = {}
    edges = set()
    for u in depth:
        nb = [v for v in g.neighbors(u) if v in depth]
        adjacency[u] = tuple(nb)
        for v in nb:
            edges.add(canonical_edge(u, v))
    return FiniteGraph(center, radius, tuple(tuple(l) for l in layers), tuple(sorted(edges)), adjacency)


def bfs(
    g: Generator,
    sources: Iterable[Vertex],
    radius: int | None = None,
    allowed: Callable[[Vertex], bool] | None = None,
    stop: Callable[[Vertex, int], bool] | None = None,
    cap: int | None = None,
) -> dict:
    """Multi-source BFS distances.

    Expansion stops at ``radius``, skips vertices rejected by ``allowed`` and
    halts as soon as ``stop(v, d)`` is true for a labelled vertex. Layers are
    expanded in vertex order so the result is reproducible.
    """
    cap = ball_cap() if cap is None else cap
    dist = {}
    frontier = sorted(set(sources))
    for s in frontier:
        dist[s] = 0
        if stop is not None and stop(s, 0):
            return dist
    d = 0
    while frontier and (radius is None or d < radius):
        d += 1
        nxt = set()
        for u in frontier:
            for v in g.neighbors(u):
                if v in dist or v in nxt:
                    continue
                if allowed is not None and not allowed(v):
                    continue
                nxt.add(v)
        frontier = sorted(nxt)
        for v in frontier:
            dist[v] = d
        if len(dist) > cap:
            raise GuardError(f"BFS exceeded cap of {cap} vertices")
        if stop is not None:
            for v in frontier:
                if stop(v, d):
                    return dist
    return dist


def graph_distance(g: Generator, u: Vertex, v: Vertex, cutoff: int, use_hull: bool = True) -> int | None:
    """Exact BFS distance if it is at most ``cutoff``, else None (unreached)."""
    if cutoff < 0:
        raise PreconditionError("cutoff must be >= 0")
    g.validate(u)
    g.validate(v)
    if u == v:
        return 0
    hull = g.hull(u, v) if use_hull else None
    allowed = hull.__contains__ if hull is not None else None
    dist = bfs(g, [u], radius=cutoff, allowed=allowed, stop=lambda x, d: x == v)
    return dist.get(v)


def distance(g: Generator, u: Vertex, v: Vertex, cutoff: int | None = None) -> int | None:
    """Closed-form distance when the generator has one, BFS otherwise."""
    d = g.distance(u, v)
    if d is not None:
        return d if cutoff is None or d <= cutoff else None
    return graph_distance(g, u, v, cutoff if cutoff is not None else ball_cap())


def set_distance(
    g: Generator, x: Vertex, member: Callable[[Vertex], bool], cutoff: int
) -> tuple[int | None, list]:
    """Distance from x to the set {member}, and the set's points at that distance.

    Returns (None, []) when no member lies within ``cutoff``.
    """
    if member(x):
        return 0, [x]
    cap = ball_cap()
    seen = {x}
    frontier = [x]
    for d in range(1, cutoff + 1):
        nxt = set()
        for u in frontier:
            for v in g.neighbors(u):
                if v not in seen:
                    nxt.add(v)
        frontier = sorted(nxt)
        seen.update(frontier)
        if len(seen) > cap:
            raise GuardError(f"set-distance search from {x!r} exceeded cap of {cap} vertices")
        found = [v for v in frontier if member(v)]
        if found:
            return d, found
        if not frontier:
            break
    return None, []


def some_geodesic(g: Generator, u: Vertex, v: Vertex) -> list:
    """A unit-weight geodesic, closed-form when the generator provides one."""
    builder = getattr(g, "straight_geodesic", None)
    if builder is not None:
        return builder(u, v)
    return geodesic_path(g, u, v)


def geodesic_path(g: Generator, u: Vertex, v: Vertex, cutoff: int | None = None) -> list:
    """A canonical unit-weight shortest path from u to v.

    Among shortest paths the one whose vertex sequence, read from v backwards,
    is lexicographically smallest is returned.
    """
    if u == v:
        return [u]
    hull = g.hull(u, v)
    allowed = hull.__contains__ if hull is not None else None
    limit = cutoff if cutoff is not None else ball_cap()
    dist = bfs(g, [u], radius=limit, allowed=allowed, stop=lambda x, d: x == v)
    if v not in dist:
        raise PreconditionError(f"no path from {u!r} to {v!r} within {limit}")
    path = [v]
    while path[-1] != u:
        cur = path[-1]
        d = dist[cur]
        path.append(min(w for w in g.neighbors(cur) if dist.get(w) == d - 1))
    return path[::-1]
