"""Command-line front end: ``fpp <command> [options]``.

Exit codes: 0 ok, 2 precondition/spec error, 3 guard fired or inexact result,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from pathlib import Path as FsPath

from . import __version__
from .config import SCHEMAS, VOLATILE, load_config_file, parse_config
from .errors import FppError, GuardError, PreconditionError, SpecError
from .experiments import (
    RECORD_FIELDS,
    boundedness_report,
    estimate_prop213_lower,
    estimate_prop213_upper,
    extract_limit,
    greedy_light_path,
    nearest_rank,
    ray_weights,
    run_trials,
)
from .graphs import ball, parse_generator
from .metric import omega_distance
from .morse import (
    LineSet,
    climb,
    contraction_estimate,
    fit_contracting_power,
    hash_seed,
    in_kappa_neighborhood,
    lemma33_inequality_check,
    lemma33_samples,
    middle_recurrence_test,
    morse2_test,
    patch_detours,
    phi_estimate,
    phi_samples,
    radius_contracting_fit,
    sample_detours,
    sample_pairs,
)
from .output import dumps, manifest, read_json, sha256_file, write_csv, write_json
from .sublinear import SublinearFunction, parse_sublinear
from .weights import WeightField, parse_distribution

EXIT_GUARD = 3


def _vlist(v):
    return ";".join(",".join(str(c) for c in x) for x in v) if v else ""


def _fmt(x):
    if x is None:
        return ""
    return repr(x) if isinstance(x, float) else str(x)


def _jobs(spec):
    return spec.get("jobs") or os.cpu_count() or 1


def _finish(op, spec, out, hashes):
    """Write manifest.json next to the outputs."""
    stable = {k: v for k, v in spec.items() if k not in VOLATILE}
    write_json(FsPath(out) / "manifest.json", manifest(op, stable, hashes))


# ---------------------------------------------------------------- graph / dist


def run_graph_ball(spec):
    g = parse_generator(spec["gen"])
    fg = ball(g, tuple(spec["center"]), spec["radius"])
    doc = fg.to_json()
    doc.update(schema=1, gen=g.spec, vertex_count=len(fg), edge_count=len(fg.edges))
    write_json(spec["out"], doc)
    return {}, 0


def run_dist(spec):
    g = parse_generator(spec["gen"])
    W = WeightField(spec["seed"], parse_distribution(spec["dist"]))
    res = omega_distance(g, W, tuple(spec["from"]), tuple(spec["to"]), spec["cap"])
    doc = res.to_json()
    doc["schema"] = 1
    sys.stdout.write(dumps(doc))
    return {}, 0 if res.exact else EXIT_GUARD


# ---------------------------------------------------------------- morse


def run_neighborhood(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    kappa = parse_sublinear(spec["kappa"])
    points = [tuple(p) for p in spec["points"]]
    if not points:
        rng = random.Random(spec["seed"])
        lo, hi = spec["positions"]
        points = [climb(g, line, rng.randint(lo, hi), rng.randint(0, spec["height"]), rng) for _ in range(spec["samples"])]
    rows, members, unknown = [], 0, 0
    for x in points:
        r = in_kappa_neighborhood(g, line, kappa, spec["n"], x, line.o, spec["cutoff"])
        members += r.member is True
        unknown += r.member is None
        rows.append([_vlist([x]), r.norm, _fmt(r.distance), repr(r.radius), "" if r.member is None else int(r.member)])
    out = FsPath(spec["out"])
    h = {"samples.csv": write_csv(out / "samples.csv", ["x", "norm", "distance", "radius", "member"], rows)}
    summary = {"schema": 1, "points": len(points), "members": members, "unknown": unknown, "kappa": spec["kappa"], "n": spec["n"]}
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("morse.neighborhood", spec, out, h)
    return h, 0


def run_contract(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    out = FsPath(spec["out"])
    summary = {"schema": 1}
    if spec["fit"]:
        fit = fit_contracting_power(
            g, line, spec["powers"], spec["scale"], spec["count"], spec["C1"], spec["threshold"], spec["seed"]
        )
        summary["fit"] = {
            "power": fit.power,
            "kappa_prime": fit.kappa.spec if fit.kappa else None,
            "table": {repr(p): list(v) for p, v in fit.table.items()},
            "threshold": fit.threshold,
        }
    kappa = parse_sublinear(spec["kappa"])
    pairs = sample_pairs(g, line, spec["count"], tuple(spec["positions"]), spec["height"], spec["C1"], spec["seed"])
    log = []
    stats = contraction_estimate(g, line, kappa, pairs, spec["C1"], line.o, log=log)
    rows = [[_vlist([x]), _vlist([y]), d, diam, repr(v)] for x, y, d, diam, v in log]
    h = {"samples.csv": write_csv(out / "samples.csv", ["x", "y", "d_x_Z", "diameter", "value"], rows)}
    summary["stats"] = stats.to_json()
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("morse.contract", spec, out, h)
    return h, 0


def run_morse2(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    kappa = parse_sublinear(spec["kappa"])
    grid = [tuple(x) for x in spec["grid"]]
    gauge = morse2_test(g, line, kappa, grid, spec["trials"], spec["separations"], spec["center"], spec["seed"])
    out = FsPath(spec["out"])
    rows = [[repr(q), repr(Q), s, t, repr(v)] for q, Q, s, t, v in gauge.samples]
    h = {"samples.csv": write_csv(out / "samples.csv", ["q", "Q", "separation", "trial", "m_hat"], rows)}
    doc = gauge.to_json()
    doc["schema"] = 1
    doc["stabilizing"] = {f"{q!r},{Q!r}": gauge.stabilizing((q, Q)) for q, Q in grid}
    h["summary.json"] = write_json(out / "summary.json", doc)
    _finish("morse.morse2", spec, out, h)
    return h, 0


def _kappa_prime(spec, g, line):
    if spec["kappa_prime"] != "fit":
        return parse_sublinear(spec["kappa_prime"]), None
    fit = fit_contracting_power(g, line)
    if fit.kappa is None:
        raise PreconditionError("no power in the family gives a stabilizing contraction constant")
    return fit.kappa, fit


def recurrence_paths(g, line, separations, trials, positions, C, seed):
    """(a, b, path) detours: random waypoint detours plus over-the-patch ones."""
    for D in separations:
        for t in range(trials):
            rng = random.Random(hash_seed(seed, D, t))
            a = rng.randint(*positions)
            b = a + D
            yield a, b, sample_detours(g, line, a, b, C, rng)
            if t == 0:
                for p in patch_detours(g, line, a, b):
                    yield a, b, p


def run_recurrence(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    kp, fit = _kappa_prime(spec, g, line)
    out = FsPath(spec["out"])
    per_sep = {}
    rows = []
    for D in spec["separations"]:
        log = []
        paths = recurrence_paths(g, line, [D], spec["trials"], tuple(spec["positions"]), spec["C"], spec["seed"])
        res = middle_recurrence_test(g, line, spec["C"], kp, paths, log=log)
        per_sep[D] = res
        rows += [[D, a, b, m, _fmt(v)] for a, b, m, v in log]
    h = {"samples.csv": write_csv(out / "samples.csv", ["separation", "a", "b", "length", "value"], rows)}
    seps = sorted(per_sep)
    c_lo, c_hi = per_sep[seps[0]].c, per_sep[seps[-1]].c
    ratio = c_hi / c_lo if c_lo > 0 else (0.0 if c_hi == 0 else float("inf"))
    summary = {
        "schema": 1,
        "kappa_prime": kp.spec,
        "fit_table": {repr(p): list(v) for p, v in fit.table.items()} if fit else None,
        "C": spec["C"],
        "c": {str(D): r.c for D, r in per_sep.items()},
        "accepted": {str(D): r.accepted for D, r in per_sep.items()},
        "rejected": {str(D): r.rejected for D, r in per_sep.items()},
        "ratio_top_bottom": ratio,
        "c_overall": max(r.c for r in per_sep.values()),
    }
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("morse.recurrence", spec, out, h)
    return h, 0


def run_phi(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    samples = {
        R: phi_samples(g, line, R, spec["count"], tuple(spec["positions"]), hash_seed(spec["seed"], R))
        for R in spec["radii"]
    }
    log = []
    table = phi_estimate(g, line, samples, spec["box"], log=log)
    out = FsPath(spec["out"])
    rows = [[R, s, t, _fmt(m), repr(v)] for R, s, t, m, v in log]
    h = {"samples.csv": write_csv(out / "samples.csv", ["R", "s", "t", "length", "ratio"], rows)}
    phis = [table[R].phi for R in sorted(table)]
    summary = {
        "schema": 1,
        "phi": {str(R): e.phi for R, e in sorted(table.items())},
        "samples": {str(R): e.samples for R, e in sorted(table.items())},
        "disconnected": {str(R): e.disconnected for R, e in sorted(table.items())},
        "absent": {str(R): e.reason for R, e in sorted(table.items()) if e.phi is None},
        "nondecreasing": all(a is not None and b is not None and a <= b for a, b in zip(phis, phis[1:])),
    }
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("morse.phi", spec, out, h)
    return h, 0


def run_lemma33(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    samples = lemma33_samples(g, line, spec["radii"], spec["count"], tuple(spec["positions"]), spec["seed"])
    if spec["kappa_prime"] == "fit":
        rng = random.Random(spec["seed"])
        lo, hi = spec["positions"]
        centers = [climb(g, line, rng.randint(lo, hi), rng.randint(1, 2 * max(spec["radii"])), rng) for _ in range(50)]
        kp = radius_contracting_fit(g, line, spec["radii"], centers)
        kp_doc = {"ts": list(kp.ts), "values": list(kp.values)}
    else:
        kp = parse_sublinear(spec["kappa_prime"])
        kp_doc = kp.spec
    rows, holds = [], 0
    for K, p in samples:
        r = lemma33_inequality_check(g, line, p, K, kp)
        holds += r.holds
        rows.append([K, _vlist([p.start]), _vlist([p.end]), p.m, repr(r.lhs), repr(r.rhs), repr(r.slack), int(r.holds)])
    out = FsPath(spec["out"])
    h = {"samples.csv": write_csv(out / "samples.csv", ["K", "s", "e", "length", "lhs", "rhs", "slack", "holds"], rows)}
    summary = {"schema": 1, "kappa_prime": kp_doc, "samples": len(samples), "holds": holds}
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("morse.lemma33", spec, out, h)
    return h, 0


# ---------------------------------------------------------------- experiments


def _write_trials(out, trials):
    rows = [t.record.row() for t in trials]
    h = {"records.csv": write_csv(out / "records.csv", RECORD_FIELDS, rows)}
    # wall time varies run to run: kept out of the manifest
    write_csv(out / "timing.csv", ["seed", "n", "wall_seconds"], [[t.record.seed, t.record.n, f"{t.wall:.6f}"] for t in trials])
    return h


def run_thm38(spec):
    g = parse_generator(spec["gen"])
    seeds = range(spec["seed_base"], spec["seed_base"] + spec["seeds"])
    trials = run_trials(g.spec, spec["dist"], seeds, spec["scales"], _jobs(spec), spec["cap"])
    out = FsPath(spec["out"])
    h = _write_trials(out, trials)
    inexact = sum(not t.record.exact for t in trials)
    report = boundedness_report([t.record for t in trials], spec["factor"])
    summary = {"schema": 1, "gen": g.spec, "dist": spec["dist"], "trials": len(trials), "inexact": inexact}
    summary["report"] = report.to_json()
    h["summary.json"] = write_json(out / "summary.json", summary)
    limit = {"schema": 1}
    if report.stabilizing:
        dist = parse_distribution(spec["dist"])
        kappa = SublinearFunction("pow", 1.0, 0.5)
        line = g.line()
        per_seed, steps, nested, verified = {}, 0, 0, 0
        for s in seeds:
            mine = [t for t in trials if t.record.seed == s and t.record.exact]
            W = WeightField(s, dist)
            lg = extract_limit(g, W, mine, spec["ladder"])
            steps += len(lg.nested)
            nested += sum(lg.nested)
            verified += lg.verified
            doc = lg.to_json()
            # exploratory only: how far the extracted trace strays from the line, in kappa units
            doc["exploratory_excess"] = max(
                (line.distance(v) / kappa(line.norm(v)) for v in lg.trace), default=None
            )
            per_seed[str(s)] = doc
        limit.update(
            per_seed=per_seed,
            nesting_rate=nested / steps if steps else 0.0,
            verified=verified,
            seeds=len(per_seed),
        )
    else:
        limit["skipped"] = "boundedness verdict is non-stabilizing"
    h["limit.json"] = write_json(out / "limit.json", limit)
    _finish("exp.thm38", spec, out, h)
    return h, EXIT_GUARD if inexact else 0


def run_prop213(spec):
    g = parse_generator(spec["gen"])
    line = g.line()
    dist = parse_distribution(spec["dist"])
    lower = parse_distribution(spec["lower_dist"])
    seeds = range(spec["seed_base"], spec["seed_base"] + spec["seeds"])
    up_rows, lo_rows = [], []
    r0s, cs = [], []
    for s in seeds:
        w = ray_weights(WeightField(s, dist), line, spec["length"])
        r0, i, j = estimate_prop213_upper(w, dist.mean)
        r0s.append(r0)
        up_rows.append([s, repr(r0), i, j])
        W = WeightField(s, lower)
        p = greedy_light_path(g, W, line.o, spec["greedy_length"])
        fit = estimate_prop213_lower(g, W, line.o, [p], spec["r1_budget"])
        cs.append(fit.c)
        lo_rows.append([s, repr(fit.c), repr(fit.r1), fit.samples])
    out = FsPath(spec["out"])
    h = {
        "upper.csv": write_csv(out / "upper.csv", ["seed", "r0", "i", "j"], up_rows),
        "lower.csv": write_csv(out / "lower.csv", ["seed", "c", "r1", "samples"], lo_rows),
    }
    summary = {
        "schema": 1,
        "upper": {"b": dist.mean, "max_r0": max(r0s), "q99_r0": nearest_rank(r0s, 0.99), "length": spec["length"]},
        "lower": {"min_c": min(cs), "median_c": nearest_rank(cs, 0.5), "r1_budget": spec["r1_budget"]},
    }
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("exp.prop213", spec, out, h)
    return h, 0


def run_contrast(spec):
    seeds = range(spec["seed_base"], spec["seed_base"] + spec["seeds"])
    trials = run_trials("lattice:2", spec["dist"], seeds, spec["scales"], _jobs(spec), spec["cap"])
    out = FsPath(spec["out"])
    h = _write_trials(out, trials)
    by_n = {}
    for t in trials:
        if t.record.exact:
            by_n.setdefault(t.record.n, []).append(t.record.d_graph)
    med = {n: nearest_rank(v, 0.5) for n, v in sorted(by_n.items())}
    lo, hi = min(med), max(med)
    summary = {
        "schema": 1,
        "median": {str(n): m for n, m in med.items()},
        "q95": {str(n): nearest_rank(v, 0.95) for n, v in sorted(by_n.items())},
        "ratio_top_bottom": med[hi] / med[lo] if med[lo] else float("inf"),
        "inexact": sum(not t.record.exact for t in trials),
    }
    h["summary.json"] = write_json(out / "summary.json", summary)
    _finish("exp.contrast-z2", spec, out, h)
    return h, EXIT_GUARD if summary["inexact"] else 0


RUNNERS = {
    "graph.ball": run_graph_ball,
    "dist": run_dist,
    "morse.neighborhood": run_neighborhood,
    "morse.contract": run_contract,
    "morse.morse2": run_morse2,
    "morse.recurrence": run_recurrence,
    "morse.phi": run_phi,
    "morse.lemma33": run_lemma33,
    "exp.thm38": run_thm38,
    "exp.prop213": run_prop213,
    "exp.contrast-z2": run_contrast,
}


def run(operation: str, spec: dict):
    return RUNNERS[operation](spec)


def verify(path) -> tuple[bool, dict]:
    """Re-run a manifest into a scratch directory and compare output hashes."""
    man = read_json(path)
    if man.get("schema") != 1 or "operation" not in man:
        raise SpecError(f"{path} is not a schema-1 manifest")
    op = man["operation"]
    with tempfile.TemporaryDirectory() as tmp:
        spec = parse_config(op, dict(man["spec"], out=tmp, **({"jobs": 1} if "jobs" in SCHEMAS[op] else {})))
        run(op, spec)
        got = {name: sha256_file(FsPath(tmp) / name) for name in man["outputs"]}
    diff = {n: {"expected": man["outputs"][n], "got": got[n]} for n in got if got[n] != man["outputs"][n]}
    return not diff, diff


# ---------------------------------------------------------------- argument parsing


def _add_options(p, operation):
    p.add_argument("--config", help="JSON file with option values (flags override it)")
    for key in SCHEMAS[operation]:
        flag = "--" + key.replace("_", "-")
        p.add_argument(flag, dest=key, default=argparse.SUPPRESS, metavar=key.upper())
    p.set_defaults(_op=operation)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpp", description="First passage percolation on lazily generated graphs.")
    ap.add_argument("--version", action="version", version=f"fpp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="graph generators").add_subparsers(dest="sub", required=True)
    _add_options(graph.add_parser("ball", help="materialize a ball as JSON"), "graph.ball")

    _add_options(sub.add_parser("dist", help="d_omega between two vertices"), "dist")

    morse = sub.add_parser("morse", help="geometry of the marked line").add_subparsers(dest="sub", required=True)
    for name in ("neighborhood", "contract", "morse2", "recurrence", "phi", "lemma33"):
        _add_options(morse.add_parser(name), f"morse.{name}")

    exp = sub.add_parser("exp", help="experiments").add_subparsers(dest="sub", required=True)
    for name in ("thm38", "prop213", "contrast-z2"):
        _add_options(exp.add_parser(name), f"exp.{name}")

    v = sub.add_parser("verify", help="re-run a manifest and compare output hashes")
    v.add_argument("manifest")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            ok, diff = verify(args.manifest)
            sys.stdout.write(dumps({"ok": ok, "mismatches": diff}))
            return 0 if ok else 1
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "sub", "config", "_op")}
        file_values = load_config_file(args.config) if args.config else {}
        spec = parse_config(args._op, file_values, flags)
        _, code = run(args._op, spec)
        return code
    except FppError as exc:
        print(f"fpp: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
