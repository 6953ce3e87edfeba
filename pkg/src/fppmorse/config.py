"""Run specifications: JSON config files merged with command-line flags.

Each operation has a fixed schema; unknown keys are rejected and every value
is validated (generator, distribution and kappa strings are parsed) before a
run starts. Flags override file values.
"""

from __future__ import annotations

import json

from .errors import SpecError
from .graphs import parse_generator, parse_vertex
from .sublinear import parse_sublinear
from .weights import parse_distribution

REQUIRED = object()


def _ints(v):
    if isinstance(v, str):
        v = [x for x in v.split(",") if x.strip()]
    try:
        return [int(x) for x in v]
    except (TypeError, ValueError):
        raise SpecError(f"expected a list of integers, got {v!r}") from None


def _floats(v):
    if isinstance(v, str):
        v = [x for x in v.split(",") if x.strip()]
    try:
        return [float(x) for x in v]
    except (TypeError, ValueError):
        raise SpecError(f"expected a list of numbers, got {v!r}") from None


def _grid(v):
    """``"1,0;2,2"`` or [[1, 0], [2, 2]] -> [[q, Q], ...]"""
    if isinstance(v, str):
        v = [p.split(",") for p in v.split(";") if p.strip()]
    try:
        out = [[float(q), float(Q)] for q, Q in v]
    except (TypeError, ValueError):
        raise SpecError(f"bad gauge grid {v!r}; expected 'q,Q;q,Q;...'") from None
    for q, Q in out:
        if q < 1 or Q < 0:
            raise SpecError(f"gauge grid entries need q >= 1 and Q >= 0, got ({q}, {Q})")
    return out


def _int(v):
    if isinstance(v, bool):
        raise SpecError(f"expected an integer, got {v!r}")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise SpecError(f"expected an integer, got {v!r}") from None


def _float(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        raise SpecError(f"expected a number, got {v!r}") from None


def _bool(v):
    if isinstance(v, bool):
        return v
    if str(v).lower() in ("1", "true", "yes"):
        return True
    if str(v).lower() in ("0", "false", "no"):
        return False
    raise SpecError(f"expected a boolean, got {v!r}")


def _gen(v):
    return parse_generator(str(v)).spec


def _dist(v):
    return parse_distribution(str(v)).spec


def _kappa(v):
    return parse_sublinear(str(v)).spec


def _kappa_or_fit(v):
    return "fit" if str(v) == "fit" else _kappa(v)


def _vertex(v):
    if isinstance(v, (list, tuple)):
        v = ",".join(str(x) for x in v)
    return list(parse_vertex(str(v)))


def _vertices(v):
    if isinstance(v, str):
        v = [p for p in v.split(";") if p.strip()]
    return [_vertex(x) for x in v]


def _str(v):
    return str(v)


def _opt(f):
    return lambda v: None if v is None else f(v)


STRIP = "strip:pow:1:0.5:32"

SCHEMAS = {
    "graph.ball": {
        "gen": (_gen, REQUIRED), "center": (_vertex, "0,0,0"), "radius": (_int, REQUIRED), "out": (_str, REQUIRED),
    },
    "dist": {
        "gen": (_gen, REQUIRED), "dist": (_dist, REQUIRED), "seed": (_int, 0),
        "from": (_vertex, REQUIRED), "to": (_vertex, REQUIRED), "cap": (_opt(_int), None),
    },
    "morse.neighborhood": {
        "gen": (_gen, STRIP), "kappa": (_kappa, "pow:1:0.5"), "n": (_float, 1.0), "points": (_vertices, []),
        "samples": (_int, 200), "positions": (_ints, "0,1024"), "height": (_int, 64), "seed": (_int, 0),
        "cutoff": (_int, 256), "out": (_str, REQUIRED),
    },
    "morse.contract": {
        "gen": (_gen, STRIP), "kappa": (_kappa, "pow:1:0.5"), "C1": (_float, 1.0), "count": (_int, 400),
        "positions": (_ints, "128,256"), "height": (_int, 256), "seed": (_int, 0), "fit": (_bool, False),
        "powers": (_floats, "0.25,0.5,0.75"), "scale": (_int, 256), "threshold": (_float, 1.1),
        "out": (_str, REQUIRED),
    },
    "morse.morse2": {
        "gen": (_gen, STRIP), "kappa": (_kappa, "pow:1:0.5"), "grid": (_grid, "1,0;1,2;2,0;2,2"),
        "trials": (_int, 20), "separations": (_ints, "16,32,64"), "center": (_int, 0), "seed": (_int, 0),
        "out": (_str, REQUIRED),
    },
    "morse.recurrence": {
        "gen": (_gen, STRIP), "kappa_prime": (_kappa_or_fit, "fit"), "C": (_float, 3.0),
        "separations": (_ints, "32,64,128"), "trials": (_int, 1000), "positions": (_ints, "1024,4096"),
        "seed": (_int, 0), "out": (_str, REQUIRED),
    },
    "morse.phi": {
        "gen": (_gen, STRIP), "radii": (_ints, "2,4,8,16"), "count": (_int, 100),
        "positions": (_ints, "1024,4096"), "box": (_opt(_int), None), "seed": (_int, 0), "out": (_str, REQUIRED),
    },
    "morse.lemma33": {
        "gen": (_gen, STRIP), "kappa_prime": (_kappa_or_fit, "fit"), "radii": (_ints, "1,2,4,8,16"),
        "count": (_int, 500), "positions": (_ints, "1024,4096"), "seed": (_int, 0), "out": (_str, REQUIRED),
    },
    "exp.thm38": {
        "gen": (_gen, STRIP), "dist": (_dist, "unif:0:1"), "scales": (_ints, "32,64,128,256"),
        "seeds": (_int, 100), "seed_base": (_int, 0), "factor": (_float, 1.5), "ladder": (_ints, "4,8,16,32"),
        "jobs": (_int, 0), "cap": (_opt(_int), None), "out": (_str, REQUIRED),
    },
    "exp.prop213": {
        "dist": (_dist, "exp:1.0"), "length": (_int, 2000), "seeds": (_int, 50), "seed_base": (_int, 0),
        "gen": (_gen, "tree:3"), "lower_dist": (_dist, "unif:0:1"), "greedy_length": (_int, 1000),
        "r1_budget": (_float, 1.0), "out": (_str, REQUIRED),
    },
    "exp.contrast-z2": {
        "dist": (_dist, "unif:0:1"), "scales": (_ints, "64,256"), "seeds": (_int, 200), "seed_base": (_int, 0),
        "jobs": (_int, 0), "cap": (_opt(_int), None), "out": (_str, REQUIRED),
    },
}

# keys that never change what gets written (kept out of manifests)
VOLATILE = {"jobs", "out"}


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError(f"config {path} must hold a JSON object")
    return data


def parse_config(operation: str, file_values: dict | None = None, flags: dict | None = None) -> dict:
    """Merge file values and flags (flags win), apply defaults, validate."""
    if operation not in SCHEMAS:
        raise SpecError(f"unknown operation {operation!r}")
    schema = SCHEMAS[operation]
    merged = {}
    for source in (file_values or {}, flags or {}):
        for k, v in source.items():
            key = k.replace("-", "_")
            if key not in schema:
                raise SpecError(f"unknown key {k!r} for {operation}; allowed: {', '.join(sorted(schema))}")
            merged[key] = v
    spec = {}
    for key, (conv, default) in schema.items():
        if key in merged:
            spec[key] = conv(merged[key])
        elif default is REQUIRED:
            raise SpecError(f"{operation}: missing required value {key!r}")
        else:
            spec[key] = conv(default) if default is not None else None
    return spec


def serialize(spec: dict) -> str:
    return json.dumps(spec, sort_keys=True)
