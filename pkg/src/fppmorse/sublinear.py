"""Sublinear functions and their concave majorants."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError, SpecError

KINDS = ("const", "pow", "log")


@dataclass(frozen=True)
class SublinearFunction:
    """kappa: [0, inf) -> [1, inf).

    ``const``  kappa(t) = A            (A >= 1)
    ``pow``    kappa(t) = max(1, A t^p)  (0 < p < 1)
    ``log``    kappa(t) = max(1, A ln(e + t))
    """

    kind: str
    A: float = 1.0
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown sublinear kind {self.kind!r}; expected one of {KINDS}")
        if not (self.A > 0 and math.isfinite(self.A)):
            raise SpecError(f"sublinear scale A must be positive, got {self.A}")
        if self.kind == "const" and self.A < 1:
            raise SpecError("const kappa needs A >= 1")
        if self.kind == "pow" and not 0 < self.p < 1:
            raise SpecError(f"pow kappa needs 0 < p < 1, got {self.p}")

    def __call__(self, t: float) -> float:
        if t < 0:
            raise PreconditionError(f"kappa evaluated at negative t={t}")
        if self.kind == "const":
            return float(self.A)
        if self.kind == "pow":
            return max(1.0, self.A * t**self.p)
        return max(1.0, self.A * math.log(math.e + t))

    @property
    def spec(self) -> str:
        if self.kind == "pow":
            return f"pow:{_fmt(self.A)}:{_fmt(self.p)}"
        return f"{self.kind}:{_fmt(self.A)}"

    def horizon(self, eps: float) -> float:
        """A T with kappa(T)/T < eps (and for every larger T as well)."""
        if eps <= 0:
            raise PreconditionError("eps must be positive")
        if self.kind == "const":
            return 2.0 * self.A / eps
        if self.kind == "pow":
            # A T^(p-1) < eps; the max(1, .) branch needs T > 1/eps too.
            return 2.0 * max((self.A / eps) ** (1.0 / (1.0 - self.p)), 1.0 / eps)
        t = max(1.0, 1.0 / eps)
        while self(t) / t >= eps:
            t *= 2.0
        return t


def _fmt(x: float) -> str:
    return repr(float(x)).rstrip("0").rstrip(".") if float(x) != int(x) else str(int(x))


def parse_sublinear(text: str) -> SublinearFunction:
    """Parse ``const:A``, ``pow:A:p`` or ``log:A``."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "const" and len(parts) == 2:
            return SublinearFunction("const", float(parts[1]))
        if parts[0] == "pow" and len(parts) == 3:
            return SublinearFunction("pow", float(parts[1]), float(parts[2]))
        if parts[0] == "log" and len(parts) == 2:
            return SublinearFunction("log", float(parts[1]))
    except ValueError as exc:
        raise SpecError(f"bad sublinear spec {text!r}: {exc}") from None
    raise SpecError(f"bad sublinear spec {text!r}; grammar: const:A | pow:A:p | log:A")


@dataclass(frozen=True)
class ConcaveTable:
    """Piecewise-linear function on a grid (the output of :func:`concavize`).

    ``ratio_bound`` is max(envelope / input) over the input grid.
    """

    ts: tuple
    values: tuple
    ratio_bound: float = 1.0

    def __call__(self, t: float) -> float:
        ts, vs = self.ts, self.values
        if t <= ts[0]:
            return vs[0]
        if t >= ts[-1]:
            return vs[-1]
        i = bisect_right(ts, t) - 1
        t0, t1 = ts[i], ts[i + 1]
        lam = (t - t0) / (t1 - t0)
        return vs[i] + lam * (vs[i + 1] - vs[i])


def upper_hull(ts: Sequence[float], ys: Sequence[float]) -> list[int]:
    """Indices of the upper convex hull chain of points sorted by t (monotone chain)."""
    hull: list[int] = []
    for k in range(len(ts)):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j when it lies on or below the chord i -> k
            cross = (ts[j] - ts[i]) * (ys[k] - ys[i]) - (ys[j] - ys[i]) * (ts[k] - ts[i])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def concavize(samples: Sequence[tuple[float, float]]) -> ConcaveTable:
    """Least concave majorant of sampled (t, kappa(t)) points, evaluated on the same grid."""
    if not samples:
        raise PreconditionError("concavize needs a nonempty grid")
    ts = [float(t) for t, _ in samples]
    ys = [float(y) for _, y in samples]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise PreconditionError("sample grid must be strictly increasing in t")
    if min(ys) < 1:
        raise PreconditionError("sampled values must be >= 1")
    hull = upper_hull(ts, ys)
    env = []
    h = 0
    for k, t in enumerate(ts):
        while hull[h + 1 : h + 2] and ts[hull[h + 1]] <= t:
            h += 1
        i = hull[h]
        if ts[i] == t:
            env.append(ys[i])
            continue
        j = hull[h + 1]
        lam = (t - ts[i]) / (ts[j] - ts[i])
        # pin to the input where rounding would leave the envelope a hair below it
        env.append(max(ys[i] + lam * (ys[j] - ys[i]), ys[k]))
    ratio = max(e / y for e, y in zip(env, ys))
    return ConcaveTable(tuple(ts), tuple(env), ratio)
