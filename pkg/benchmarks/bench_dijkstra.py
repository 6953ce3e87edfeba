"""Compiled kernel vs pure-Python fallback on the escaping-geodesic search.

    python benchmarks/bench_dijkstra.py [--repeat 3]

Both backends must return identical results; the script checks that before
reporting timings.
"""

import argparse
import os
import time

from fppmorse import search
from fppmorse.graphs import parse_generator
from fppmorse.metric import omega_distance
from fppmorse.weights import WeightField, parse_distribution

CASES = [
    ("lattice:2", "unif:0:1", 64),
    ("lattice:2", "exp:1", 128),
    ("lattice:3", "unif:0:1", 16),
    ("tree:3", "unif:0:1", 512),
    ("strip:pow:1:0.5:32", "unif:0:1", 256),
    ("strip:pow:1:0.5:32", "lognorm:0:1", 512),
]


def run(backend, gen, dist, n, repeat):
    os.environ["FPP_BACKEND"] = backend
    g = parse_generator(gen)
    line = g.line()
    W = WeightField(1, parse_distribution(dist))
    best, res = float("inf"), None
    for _ in range(repeat):
        search._kernel.cache_clear()
        t0 = time.perf_counter()
        res = omega_distance(g, W, line(-n), line(n))
        best = min(best, time.perf_counter() - t0)
    return best, res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if search._ckernel is None:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")
    print(f"{'generator':<22}{'dist':<14}{'n':>5}{'settled':>10}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    for gen, dist, n in CASES:
        tp, rp = run("python", gen, dist, n, args.repeat)
        tc, rc = run("compiled", gen, dist, n, args.repeat)
        if rp != rc:
            raise SystemExit(f"backends disagree on {gen} {dist} n={n}")
        print(f"{gen:<22}{dist:<14}{n:>5}{rc.settled:>10}{tp:>11.3f}{tc:>12.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
