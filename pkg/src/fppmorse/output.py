"""Deterministic CSV/JSON emission and run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path as FsPath

from . import __version__
from .errors import OutputError

SCHEMA = 1


def _clean(obj):
    """JSON has no inf/nan: encode them as strings so output stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text: str) -> str:
    path = FsPath(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return hashlib.sha256(text.encode()).hexdigest()


def write_csv(path, header, rows) -> str:
    """Write a CSV with LF endings; returns its sha256."""
    return _write(path, csv_text(header, rows))


def write_json(path, obj) -> str:
    """Write sorted-key JSON with a trailing newline; returns its sha256."""
    return _write(path, dumps(obj))


def sha256_file(path) -> str:
    try:
        return hashlib.sha256(FsPath(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def manifest(operation: str, spec: dict, hashes: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "fppmorse",
        "version": __version__,
        "operation": operation,
        "spec": spec,
        "outputs": dict(sorted(hashes.items())),
    }


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc.strerror or exc}") from exc
