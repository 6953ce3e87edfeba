"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import csv
import itertools
import json
import random
import time
from collections import deque

import networkx as nx

from fppmorse.cli import main, verify
from fppmorse.experiments import (
    estimate_prop213_lower,
    estimate_prop213_upper,
    greedy_light_path,
    prop213_upper_bruteforce,
    ray_weights,
    run_trials,
)
from fppmorse.graphs import ExplicitGraph, distance, parse_generator
from fppmorse.metric import omega_distance
from fppmorse.morse import (
    FiniteSet,
    LineSet,
    avoiding_shortest_path,
    hash_seed,
    in_kappa_neighborhood,
    middle_third,
    morse2_test,
    phi_estimate,
    phi_samples,
)
from fppmorse.sublinear import SublinearFunction, concavize, parse_sublinear
from fppmorse.weights import TableWeights, WeightField, parse_distribution

LAT = parse_generator("lattice:2")
TREE = parse_generator("tree:3")
STRIP = parse_generator("strip:pow:1:0.5:32")

# max over seeds 0..49 of r0 on exp(1) rays of length 2000, pinned from a pilot run
R0_GOLDEN = 13.18310762680742


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nacceptance {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def walk(g, v, steps, rng):
    for _ in range(steps):
        v = rng.choice(g.neighbors(v))
    return v


def run_cli(*argv):
    rc = main([str(a) for a in argv])
    assert rc == 0, argv
    return rc


def read_summary(path):
    return json.loads((path / "summary.json").read_text())


# ---------------------------------------------------------------- 1


def simple_path_minimum(n, edges, w, s, t):
    adj = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    best = float("inf")

    def go(v, seen, acc):
        nonlocal best
        if v == t:
            best = min(best, acc)
            return
        for x in adj[v]:
            if x not in seen:
                seen.add(x)
                go(x, seen, acc + w[(min(v, x), max(v, x))])
                seen.remove(x)

    go(s, {s}, 0.0)
    return best


def test_01_oracle_equivalence(capsys):
    rng = random.Random(2024)
    cases, bad, spent = 0, 0, 0.0
    while cases < 1000:
        n = rng.randint(2, 10)
        edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        G = nx.Graph(edges)
        G.add_nodes_from(range(n))
        if not nx.is_connected(G):
            continue
        w = {e: rng.random() or 0.5 for e in edges}
        s, t = rng.sample(range(n), 2)
        t0 = time.perf_counter()
        g = ExplicitGraph.from_edges(edges, n)
        W = TableWeights({((a, 0, 0), (b, 0, 0)): x for (a, b), x in w.items()})
        res = omega_distance(g, W, (s, 0, 0), (t, 0, 0))
        spent += time.perf_counter() - t0
        want = simple_path_minimum(n, edges, w, s, t)
        cases += 1
        if not res.exact or abs(res.distance - want) > 1e-12 * max(1.0, want):
            bad += 1
    verdict(capsys, 1, bad == 0 and spent < 10, f"{cases} graphs, {bad} mismatches, {spent:.2f}s")


# ---------------------------------------------------------------- 2


def test_02_constant_weights_give_graph_distance(capsys):
    W = WeightField(0, parse_distribution("const:1"))
    rng = random.Random(7)
    bad = {}
    for name, g in (("lattice:2", LAT), ("tree:3", TREE), ("strip", STRIP)):
        line = g.line()
        bad[name] = 0
        for _ in range(500):
            u = walk(g, line(rng.randint(-300, 300)), rng.randint(0, 20), rng)
            v = walk(g, u, rng.randint(1, 40), rng)
            res = omega_distance(g, W, u, v)
            if not res.exact or res.distance != distance(g, u, v):
                bad[name] += 1
    verdict(capsys, 2, not any(bad.values()), f"500 pairs per generator, mismatches {bad}")


# ---------------------------------------------------------------- 3


def test_03_tree_geodesics_pass_through_base_point(capsys):
    t0 = time.perf_counter()
    trials = run_trials("tree:3", "unif:0:1", range(50), (32, 64, 128, 256), jobs=1)
    spent = time.perf_counter() - t0
    off = [(t.record.seed, t.record.n) for t in trials if t.record.d_graph != 0]
    ok = len(trials) == 200 and not off and spent < 30
    verdict(capsys, 3, ok, f"{len(trials)} trials, {len(off)} off the base point, {spent:.1f}s")


# ---------------------------------------------------------------- 4


def test_04_upper_linear_bound(capsys):
    dist = parse_distribution("exp:1")
    line = LAT.line()
    r0s, mismatch = [], 0
    for s in range(50):
        w = ray_weights(WeightField(s, dist), line, 2000)
        r0s.append(estimate_prop213_upper(w, dist.mean)[0])
        if estimate_prop213_upper(w[:200], dist.mean)[0] != prop213_upper_bruteforce(w[:200], dist.mean):
            mismatch += 1
    top = max(r0s)
    ok = all(r < float("inf") for r in r0s) and top < 1.2 * R0_GOLDEN and mismatch == 0
    verdict(capsys, 4, ok, f"max r0 {top:.4f} (limit {1.2 * R0_GOLDEN:.4f}), brute-force mismatches {mismatch}")


# ---------------------------------------------------------------- 5


def self_avoiding_walk(g, start, length, rng):
    path, seen = [start], {start}
    for _ in range(length):
        options = [v for v in g.neighbors(path[-1]) if v not in seen]
        if not options:
            break
        path.append(rng.choice(options))
        seen.add(path[-1])
    return path


def test_05_lower_linear_bound(capsys):
    dist = parse_distribution("unif:0.5:1.5")
    rng = random.Random(5)
    o = LAT.line().o
    low_c, low_r1 = float("inf"), 0.0
    for s in range(20):
        W = WeightField(s, dist)
        paths = [self_avoiding_walk(LAT, o, 200, rng) for _ in range(5)] + [greedy_light_path(LAT, W, o, 500)]
        fit = estimate_prop213_lower(LAT, W, o, paths, 0.0)
        low_c, low_r1 = min(low_c, fit.c), max(low_r1, fit.r1)
    bounded_ok = low_c >= 0.5 and low_r1 == 0.0

    unif = parse_distribution("unif:0:1")
    o = TREE.line().o
    failures, cs = 0, []
    for s in range(100):
        W = WeightField(s, unif)
        fit = estimate_prop213_lower(TREE, W, o, [greedy_light_path(TREE, W, o, 1000)], 1.0)
        cs.append(fit.c)
        failures += fit.rejected > 0 or fit.c < 0.1
    tree_ok = failures < 1
    verdict(
        capsys, 5, bounded_ok and tree_ok,
        f"unif(0.5,1.5): c {low_c:.4f}, r1 {low_r1}; tree greedy: min c {min(cs):.4f}, failures {failures}/100",
    )


# ---------------------------------------------------------------- 6


def constrained_bfs(g, line, R, x, y, radius):
    """Plain BFS over vertices at distance >= R from the line, up to ``radius`` steps."""
    seen = {x: 0}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        if v == y:
            return seen[v]
        if seen[v] == radius:
            continue
        for u in g.neighbors(v):
            if u not in seen and line.distance(u) >= R:
                seen[u] = seen[v] + 1
                queue.append(u)
    return None


def phi_table(g):
    line = g.line()
    samples = {R: phi_samples(g, line, R, 100, (1024, 4096), hash_seed(0, R)) for R in (2, 4, 8, 16)}
    return line, samples, phi_estimate(g, line, samples)


def test_06_divergence(capsys):
    t0 = time.perf_counter()
    checked, disagree = 0, 0
    phis = {}
    for name, g in (("strip", STRIP), ("lattice", LAT)):
        line, samples, table = phi_table(g)
        phis[name] = {R: e.phi for R, e in table.items()}
        # independent constrained BFS on the witness and the first few samples of each radius
        for R, entry in table.items():
            probe = samples[R][:3] + ([entry.witness] if entry.witness else [])
            for s, t, x1, y1 in probe:
                radius = 3 * max(distance(g, x1, y1), R)
                want = constrained_bfs(g, line, R, x1, y1, radius)
                p = avoiding_shortest_path(g, line, R, x1, y1)
                got = None if p is None else p.m
                ratio = float("inf") if want is None else want / abs(t - s)
                checked += 1
                disagree += got != want or (entry.witness == (s, t, x1, y1) and ratio != entry.phi)
    st, la = phis["strip"], phis["lattice"]
    strip_ok = all(a <= b for a, b in zip([st[R] for R in (2, 4, 8)], [st[R] for R in (4, 8, 16)]))
    strip_ok = strip_ok and st[16] >= 2 * st[2]
    lat_ok = la[16] <= 1.5 * la[2]
    spent = time.perf_counter() - t0
    verdict(
        capsys, 6, strip_ok and lat_ok and disagree == 0 and spent < 300,
        f"strip phi {st}, lattice phi {la}, oracle {checked - disagree}/{checked}, {spent:.0f}s",
    )


# ---------------------------------------------------------------- 7


def test_07_middle_recurrence(capsys, tmp_path):
    out = tmp_path / "rec"
    run_cli("morse", "recurrence", "--trials", 1000, "--C", 3, "--out", out)
    s = read_summary(out)
    c = {int(k): v for k, v in s["c"].items()}
    # every accepted detour reaches the c(D)-neighbourhood of its middle third
    over = 0
    with open(out / "samples.csv") as f:
        for row in csv.DictReader(f):
            if row["value"]:
                over += float(row["value"]) > c[int(row["separation"])]
    accepted = sum(s["accepted"].values())
    ok = over == 0 and all(v < float("inf") for v in c.values()) and s["ratio_top_bottom"] <= 1.25
    verdict(
        capsys, 7, ok,
        f"kappa' {s['kappa_prime']}, c {c}, ratio {s['ratio_top_bottom']:.3f}, accepted {accepted}, outside {over}",
    )


# ---------------------------------------------------------------- 8


def test_08_strip_stabilization(capsys, tmp_path):
    out = tmp_path / "thm38"
    t0 = time.perf_counter()
    run_cli("exp", "thm38", "--seeds", 100, "--out", out)
    spent = time.perf_counter() - t0
    rep = read_summary(out)["report"]
    lim = json.loads((out / "limit.json").read_text())
    q95 = {int(n): v["q95"] for n, v in sorted(rep["stats"].items(), key=lambda kv: int(kv[0]))}
    ok = (
        rep["verdict"] == "stabilizing"
        and q95[rep["top_scale"]] <= 1.5 * q95[rep["mid_scale"]]
        and lim["nesting_rate"] >= 0.95
        and lim["verified"] == lim["seeds"] == 100
        and spent < 900
    )
    verdict(
        capsys, 8, ok,
        f"verdict {rep['verdict']}, q95 {q95}, nesting {lim['nesting_rate']:.3f}, "
        f"verified {lim['verified']}/100, {spent:.0f}s",
    )


# ---------------------------------------------------------------- 9


def test_09_lattice_contrast(capsys, tmp_path):
    out = tmp_path / "z2"
    run_cli("exp", "contrast-z2", "--seeds", 200, "--out", out)
    s = read_summary(out)
    ratio = s["median"]["256"] / s["median"]["64"]
    verdict(capsys, 9, ratio >= 1.5 and s["inexact"] == 0, f"medians {s['median']}, ratio {ratio:.3f}")


# ---------------------------------------------------------------- 10


def test_10_determinism(capsys, tmp_path, golden):
    runs = [
        ("exp", "thm38", "--seeds", 30, "--scales", "8,16,32"),
        ("morse", "phi", "--count", 5, "--radii", "2,4"),
        ("exp", "prop213", "--seeds", 3, "--length", 300, "--greedy-length", 200),
    ]
    failures = []
    for k, argv in enumerate(runs):
        a, b = tmp_path / f"a{k}", tmp_path / f"b{k}"
        run_cli(*argv, "--out", a)
        run_cli(*argv, "--out", b)
        outputs = json.loads((a / "manifest.json").read_text())["outputs"]
        for name in list(outputs) + ["manifest.json"]:
            if (a / name).read_bytes() != (b / name).read_bytes():
                failures.append(f"{argv[1]}:{name}")
        ok, diff = verify(a / "manifest.json")
        if not ok:
            failures.append(f"{argv[1]} verify {diff}")
    rows = golden("weight_vectors.json")
    vec_bad = 0
    for r in rows:
        e = tuple(tuple(v) for v in r["edge"])
        for spec, hexw in r["weights"].items():
            vec_bad += WeightField(r["seed"], parse_distribution(spec)).weight(e) != float.fromhex(hexw)
    cells = sum(len(r["weights"]) for r in rows)
    verdict(
        capsys, 10, not failures and vec_bad == 0,
        f"{len(runs)} manifests re-verified, differences {failures}; golden {cells - vec_bad}/{cells}",
    )


# ---------------------------------------------------------------- 11


def test_11_invariant_suites(capsys):
    rng = random.Random(11)
    counts, bad = {}, {}

    def tally(name, ok):
        counts[name] = counts.get(name, 0) + 1
        bad[name] = bad.get(name, 0) + (not ok)

    line = LAT.line()
    kappas = [parse_sublinear(s) for s in ("pow:1:0.5", "pow:2:0.3", "log:1", "const:2")]
    for _ in range(1000):
        x = (rng.randint(-200, 200), rng.randint(-60, 60), 0)
        lo, hi = sorted((rng.uniform(0, 5), rng.uniform(0, 5)))
        k = rng.choice(kappas)
        bigger = SublinearFunction(k.kind, 2 * k.A, k.p)
        small = in_kappa_neighborhood(LAT, line, k, lo, x, line.o).member
        ok = not small or (
            in_kappa_neighborhood(LAT, line, k, hi, x, line.o).member
            and in_kappa_neighborhood(LAT, line, bigger, lo, x, line.o).member
        )
        tally("neighborhood monotone", ok)

    for _ in range(1000):
        grid = [(3.0 * i, rng.uniform(1, 50)) for i in range(rng.randint(1, 25))]
        env = concavize(grid)
        again = concavize(list(zip(env.ts, env.values)))
        dominated = all(v >= y - 1e-12 for (_, y), v in zip(grid, env.values))
        idem = all(abs(a - b) <= 1e-9 * max(1.0, abs(b)) for a, b in zip(again.values, env.values))
        tally("concavize dominates, idempotent", dominated and idem)

    for _ in range(1000):
        kind = rng.choice(["lattice", "strip", "finite"])
        if kind == "finite":
            g = LAT
            Z = FiniteSet([(rng.randint(-6, 6), rng.randint(-6, 6), 0) for _ in range(rng.randint(1, 6))])
            x = walk(g, (0, 0, 0), rng.randint(0, 12), rng)
        else:
            g = LAT if kind == "lattice" else STRIP
            Z = LineSet(g.line())
            x = walk(g, g.line()(rng.randint(-300, 300)), rng.randint(0, 12), rng)
        d, pts = Z.locate(g, x, 64)
        tally("projection factor two", all(distance(g, x, z) == d for z in pts) and Z.diameter(g, pts) <= 2 * d)

    steps = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    while counts.get("middle third symmetric", 0) < 1000:
        v, verts = (0, 0, 0), [(0, 0, 0)]
        for _ in range(rng.randint(1, 40)):
            dx, dy = rng.choice(steps)
            v = (v[0] + dx, v[1] + dy, 0)
            if v in verts:
                break
            verts.append(v)
        if len(verts) < 2:
            continue
        i = rng.randint(0, len(verts) - 2)
        a, b = verts[i], verts[rng.randint(i + 1, len(verts) - 1)]
        fwd = middle_third(LAT, verts, a, b)
        tally("middle third symmetric", fwd == middle_third(LAT, verts, b, a)
              and fwd[::-1] == middle_third(LAT, verts[::-1], a, b))

    one = parse_sublinear("const:1")
    qs, Qs = [1.0, 1.5, 2.0, 3.0], [0.0, 1.0, 2.0, 4.0]
    for _ in range(1000):
        grid = rng.sample(list(itertools.product(qs, Qs)), rng.randint(1, 4))
        g = rng.choice([LAT, STRIP])
        G = morse2_test(g, g.line(), one, grid, 1, separations=(8, 12), seed=rng.randint(0, 2**16))
        ok = all(G.m[a] >= max(a) for a in grid) and all(
            G.m[a] <= G.m[b] for a in grid for b in grid if a[0] <= b[0] and a[1] <= b[1]
        )
        tally("gauge monotone", ok)

    ok = all(n >= 1000 for n in counts.values()) and not any(bad.values())
    verdict(capsys, 11, ok, ", ".join(f"{k} {counts[k] - bad[k]}/{counts[k]}" for k in counts))
