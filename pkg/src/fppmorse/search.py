"""Backend selection for the lazy Dijkstra search.

The compiled kernel handles the built-in generators with a hash weight field;
anything else (explicit graphs, table weights) runs the pure-Python search.
Set ``FPP_BACKEND=python`` to force the fallback everywhere.
"""

from __future__ import annotations

import os
from functools import lru_cache

from . import _pysearch
from .weights import WeightField

try:
    from . import _ckernel
except ImportError:  # no compiler at install time
    _ckernel = None


def backend_name() -> str:
    if _ckernel is None or os.environ.get("FPP_BACKEND", "").lower() == "python":
        return "python"
    return "compiled"


@lru_cache(maxsize=64)
def _kernel(g, W, extent):
    lefts, widths = g.table(extent) if g.kernel_kind == 2 else ((), ())
    param = getattr(g, "dim", None) or getattr(g, "k", 0)
    d = W.distribution
    return _ckernel.Kernel(g.kernel_kind, param, lefts, widths, g.extent if g.kernel_kind == 2 else 0,
                           W.seed64, d.code, d.a, d.b)


def kernel_for(g, W):
    """A compiled kernel for (g, W), or None when the pair is not supported."""
    if backend_name() != "compiled" or g.kernel_kind is None or not isinstance(W, WeightField):
        return None
    extent = g.extent if g.kernel_kind == 2 else 0
    return _kernel(g, W, extent)


def dijkstra(g, W, source, targets, cap, allowed=None):
    """Return (distance, path, settled_count, exact, target); see _pysearch."""
    targets = frozenset(targets)
    kern = kernel_for(g, W)
    if kern is None:
        return _pysearch.dijkstra(g, W, source, targets, cap, allowed)
    while True:
        try:
            return kern.dijkstra(source, targets, cap, allowed)
        except OverflowError:
            # a vertex does not fit 64-bit words (deep tree vertex)
            return _pysearch.dijkstra(g, W, source, targets, cap, allowed)
        except IndexError:
            # the search walked past the strip patch table: grow it and retry
            g.table(2 * g.extent)
            kern = kernel_for(g, W)
