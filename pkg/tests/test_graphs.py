import random
from collections import deque

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from fppmorse.errors import GuardError, InvalidVertexError, PreconditionError, SpecError
from fppmorse.graphs import (
    ExplicitGraph,
    ball,
    bfs,
    canonical_edge,
    distance,
    geodesic_path,
    graph_distance,
    parse_generator,
    parse_vertex,
    set_distance,
    some_geodesic,
)

GENS = ["lattice:2", "lattice:3", "tree:3", "tree:4", "strip:pow:1:0.5:32", "strip:pow:2:0.5:8"]


def closure(g, center, radius):
    """Brute-force ball: repeated closure under neighbors(), no layering."""
    seen = {center}
    for _ in range(radius):
        seen |= {w for v in seen for w in g.neighbors(v)}
    return seen


def nx_ball(g, center, radius):
    G = nx.Graph()
    q = deque([(center, 0)])
    seen = {center}
    while q:
        v, d = q.popleft()
        for w in g.neighbors(v):
            G.add_edge(v, w)
            if w not in seen and d < radius:
                seen.add(w)
                q.append((w, d + 1))
    return G


def random_vertex(g, rng, steps=30):
    v = g.line().o
    for _ in range(rng.randint(0, steps)):
        v = rng.choice(g.neighbors(v))
    return v


def test_lattice_neighbors():
    g = parse_generator("lattice:2")
    assert sorted(g.neighbors((0, 0, 0))) == sorted([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)])


def test_tree_root_degree():
    g = parse_generator("tree:3")
    assert len(g.neighbors((0, 0, 0))) == 3


def test_strip_neighbors_golden(golden):
    doc = golden("strip_neighbors.json")
    g = parse_generator(doc["gen"])
    for row in doc["neighbors"]:
        got = sorted(list(x) for x in g.neighbors(tuple(row["v"])))
        assert got == row["nbrs"], row["v"]
    lefts, widths = g.table(300)
    assert [[l, w] for l, w in zip(lefts, widths) if l <= 300] == doc["patches"]


def test_strip_spine_100():
    g = parse_generator("strip:pow:1:0.5:32")
    nb = g.neighbors((100, 0, 0))
    assert (99, 0, 0) in nb and (101, 0, 0) in nb
    assert any(v[1] == 1 for v in nb) and len(nb) <= 4


@pytest.mark.parametrize("spec", GENS)
def test_symmetric_adjacency_and_degree(spec):
    g = parse_generator(spec)
    rng = random.Random(1)
    for _ in range(300):
        v = random_vertex(g, rng)
        nb = g.neighbors(v)
        assert len(nb) == len(set(nb)) <= g.degree_bound
        for w in nb:
            assert v in g.neighbors(w)


@pytest.mark.parametrize("spec", GENS)
def test_closed_form_distance_matches_bfs(spec):
    g = parse_generator(spec)
    o = g.line().o
    R = 8 if spec == "tree:4" else 12
    G = nx_ball(g, o, R)
    lengths = nx.single_source_shortest_path_length(G, o)
    rng = random.Random(2)
    nodes = sorted(G.nodes)
    for _ in range(200):
        u, v = rng.choice(nodes), rng.choice(nodes)
        want = nx.shortest_path_length(G, u, v)
        if lengths[u] + lengths[v] > R:
            continue  # the truncated ball may miss shortcuts
        assert distance(g, u, v) == want


@pytest.mark.parametrize("spec", GENS)
def test_straight_geodesic_is_a_geodesic(spec):
    g = parse_generator(spec)
    rng = random.Random(3)
    for _ in range(300):
        u, v = random_vertex(g, rng), random_vertex(g, rng)
        p = some_geodesic(g, u, v)
        assert p[0] == u and p[-1] == v
        assert len(p) - 1 == distance(g, u, v)
        assert all(b in g.neighbors(a) for a, b in zip(p, p[1:]))


def test_ball_sizes():
    b = ball(parse_generator("lattice:2"), (0, 0, 0), 1)
    assert (len(b.vertices), len(b.edges)) == (5, 4)
    assert len(ball(parse_generator("tree:3"), (0, 0, 0), 2).vertices) == 10
    g = parse_generator("strip:pow:1:0.5:32")
    assert set(ball(g, (0, 0, 0), 8).vertices) == closure(g, (0, 0, 0), 8)


@pytest.mark.parametrize("r", [0, 1, 2, 5, 9])
def test_lattice_ball_count(r):
    assert len(ball(parse_generator("lattice:2"), (0, 0, 0), r).vertices) == 2 * r * r + 2 * r + 1


def test_ball_guard():
    with pytest.raises(GuardError):
        ball(parse_generator("lattice:3"), (0, 0, 0), 30, cap=1000)


def test_ball_guard_env(monkeypatch):
    monkeypatch.setenv("FPP_BALL_CAP", "50")
    with pytest.raises(GuardError):
        ball(parse_generator("lattice:2"), (0, 0, 0), 10)


def test_distance_cases():
    g = parse_generator("lattice:2")
    assert distance(g, (0, 0, 0), (3, 4, 0)) == 7
    assert distance(g, (5, 5, 0), (5, 5, 0)) == 0
    assert graph_distance(g, (0, 0, 0), (3, 4, 0), cutoff=10) == 7
    assert graph_distance(g, (0, 0, 0), (3, 4, 0), cutoff=6) is None


def test_strip_interior_distance_unit_dijkstra():
    g = parse_generator("strip:pow:1:0.5:32")
    center = (1030, 0, 0)
    G = nx_ball(g, center, 40)
    a, b = (1034, 10, 1024), (1060, 3, 1056)
    assert distance(g, a, b) == nx.dijkstra_path_length(G, a, b)
    c = (1040, 20, 1024)
    assert distance(g, a, c) == nx.dijkstra_path_length(G, a, c)


@pytest.mark.parametrize(
    "spec,v",
    [
        ("lattice:2", (0, 0, 1)),
        ("lattice:2", (0, 0)),
        ("tree:3", (0, 0, 5)),
        ("tree:3", (0, 1, 1)),
        ("tree:3", (0, -1, 0)),
        ("strip:pow:1:0.5:32", (100, 1, 99)),
        ("strip:pow:1:0.5:32", (100, 11, 100)),
        ("strip:pow:1:0.5:32", (0, 0, 3)),
    ],
)
def test_invalid_vertices(spec, v):
    with pytest.raises(InvalidVertexError):
        parse_generator(spec).neighbors(v)


@pytest.mark.parametrize("bad", ["lattice:0", "lattice:4", "tree:1", "strip:pow:1:1:32", "strip:pow:1:0.5:0", "cube:3", ""])
def test_bad_generators(bad):
    with pytest.raises(SpecError):
        parse_generator(bad)


def test_spec_round_trip():
    for spec in GENS:
        assert parse_generator(parse_generator(spec).spec).spec == parse_generator(spec).spec


def test_parse_vertex():
    assert parse_vertex("1,2") == (1, 2, 0)
    assert parse_vertex("-1, 2, 3") == (-1, 2, 3)
    with pytest.raises(SpecError):
        parse_vertex("a,b")


def test_canonical_edge_order():
    assert canonical_edge((1, 0, 0), (0, 0, 0)) == ((0, 0, 0), (1, 0, 0))


def test_marked_line_closed_forms():
    for spec in GENS:
        g = parse_generator(spec)
        line = g.line()
        rng = random.Random(4)
        for _ in range(100):
            v = random_vertex(g, rng)
            if line.distance(v) > 8:
                continue  # keeps the BFS oracle small on trees
            d, feet = set_distance(g, v, lambda x: line.index(x) is not None, 64)
            assert line.distance(v) == d
            assert line.projection(v) == frozenset(feet)


def test_explicit_graph_and_bfs():
    g = ExplicitGraph.from_edges([(0, 1), (1, 2), (2, 3), (0, 3), (3, 4)])
    dist = bfs(g, [(0, 0, 0)])
    assert dist[(4, 0, 0)] == 2
    assert geodesic_path(g, (0, 0, 0), (2, 0, 0)) == [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
    with pytest.raises(PreconditionError):
        ExplicitGraph({(0, 0, 0): [(0, 0, 0)]})


@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(-500, 500), st.integers(-500, 500))
def test_lattice_distance_is_l1(a, b, c, d):
    g = parse_generator("lattice:2")
    assert distance(g, (a, b, 0), (c, d, 0)) == abs(a - c) + abs(b - d)
