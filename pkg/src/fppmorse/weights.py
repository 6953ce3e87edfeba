"""The random environment: i.i.d. positive edge weights as a pure hash of (seed, edge).

The mixer is the SplitMix64 finalizer chained over the seed and the six
64-bit words of the canonical edge::

    h = fmix(seed + GAMMA)
    for word in (u0, u1, u2, v0, v1, v2):
        h = fmix((h ^ word) + GAMMA)
    u = ((h >> 12) + 0.5) / 2**52          # strictly inside (0, 1), exact in binary64
    weight = quantile(u)

All arithmetic is modulo 2**64; words are the two's-complement images of the
signed coordinates. A coordinate outside the signed 64-bit range (deep tree
words) contributes its 64-bit limbs, least significant first, then its sign. The compiled kernel implements the same recipe and the
golden vectors in the test suite pin it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import PathError, PreconditionError, SpecError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
M1 = 0xBF58476D1CE4E5B9
M2 = 0x94D049BB133111EB

DIST_KINDS = ("const", "unif", "exp", "lognorm")


def fmix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * M1) & MASK64
    z = ((z ^ (z >> 27)) * M2) & MASK64
    return z ^ (z >> 31)


def edge_hash(seed: int, edge) -> int:
    h = fmix64((seed + GAMMA) & MASK64)
    (u, v) = edge
    for word in (*u, *v):
        for limb in _limbs(word):
            h = fmix64(((h ^ limb) + GAMMA) & MASK64)
    return h


def _limbs(word: int):
    if -(1 << 63) <= word < (1 << 63):
        return (word & MASK64,)
    mag = abs(word)
    out = []
    while mag:
        out.append(mag & MASK64)
        mag >>= 64
    out.append(1 if word < 0 else 0)
    return out


def hash_to_unit(h: int) -> float:
    # 52 bits keep k + 0.5 exact; with 53 the top value rounds to 1.0
    return ((h >> 12) + 0.5) / 4503599627370496.0


# Wichura AS241 (PPND16) coefficients, the same rational approximation the
# standard library uses for NormalDist.inv_cdf. Written out so the compiled
# kernel can repeat the operations in the same order.
def norm_ppf(p: float) -> float:
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r
                   + 4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r
                + 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) * q
        den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r
                   + 2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r
                + 4.2313330701600911252e+1) * r + 1.0)
        return num / den
    r = p if q <= 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r = r - 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r
                   + 1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r
                + 4.63033784615654529590e+0) * r + 1.42343711074968357734e+0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r
                   + 1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r
                + 2.05319162663775882187e+0) * r + 1.0)
    else:
        r = r - 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r
                   + 2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r
                + 5.46378491116411436990e+0) * r + 6.65790464350110377720e+0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r
                   + 7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
    x = num / den
    return -x if q < 0.0 else x


@dataclass(frozen=True)
class Distribution:
    """Edge-weight law nu with nu({0}) = 0 and finite mean.

    ``const``: a = c.  ``unif``: support (a, b), 0 <= a < b.
    ``exp``: a = rate.  ``lognorm``: a = mu, b = sigma.
    """

    kind: str
    a: float
    b: float = 0.0

    def __post_init__(self):
        k, a, b = self.kind, self.a, self.b
        if k not in DIST_KINDS:
            raise SpecError(f"unknown distribution {k!r}; expected one of {DIST_KINDS}")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise SpecError("distribution parameters must be finite")
        if k == "const" and a <= 0:
            raise SpecError(f"const weight must be > 0, got {a}")
        if k == "unif" and not 0 <= a < b:
            raise SpecError(f"unif:a:b needs 0 <= a < b, got a={a}, b={b} (empty or negative support)")
        if k == "exp" and a <= 0:
            raise SpecError(f"exp rate must be > 0, got {a}")
        if k == "lognorm" and b <= 0:
            raise SpecError(f"lognorm sigma must be > 0, got {b}")

    @property
    def code(self) -> int:
        return DIST_KINDS.index(self.kind)

    @property
    def spec(self) -> str:
        if self.kind in ("const", "exp"):
            return f"{self.kind}:{self.a!r}"
        return f"{self.kind}:{self.a!r}:{self.b!r}"

    @property
    def mean(self) -> float:
        if self.kind == "const":
            return self.a
        if self.kind == "unif":
            return 0.5 * (self.a + self.b)
        if self.kind == "exp":
            return 1.0 / self.a
        return math.exp(self.a + 0.5 * self.b * self.b)

    @property
    def infimum(self) -> float:
        """Essential infimum of the support."""
        return self.a if self.kind in ("const", "unif") else 0.0

    def quantile(self, u: float) -> float:
        if self.kind == "const":
            return self.a
        if self.kind == "unif":
            return self.a + (self.b - self.a) * u
        if self.kind == "exp":
            return -math.log1p(-u) / self.a
        return math.exp(self.a + self.b * norm_ppf(u))

    def cdf(self, x: float) -> float:
        if self.kind == "const":
            return 1.0 if x >= self.a else 0.0
        if self.kind == "unif":
            return min(1.0, max(0.0, (x - self.a) / (self.b - self.a)))
        if self.kind == "exp":
            return 0.0 if x <= 0 else -math.expm1(-self.a * x)
        if x <= 0:
            return 0.0
        return 0.5 * math.erfc(-(math.log(x) - self.a) / (self.b * math.sqrt(2.0)))


def parse_distribution(text: str) -> Distribution:
    """``const:c``, ``unif:a:b``, ``exp:rate`` or ``lognorm:mu:sigma``."""
    parts = text.strip().split(":")
    arity = {"const": 1, "unif": 2, "exp": 1, "lognorm": 2}
    if parts[0] not in arity or len(parts) != arity[parts[0]] + 1:
        raise SpecError(
            f"bad distribution spec {text!r}; grammar: const:c | unif:a:b | exp:rate | lognorm:mu:sigma"
        )
    try:
        args = [float(x) for x in parts[1:]]
    except ValueError:
        raise SpecError(f"bad distribution spec {text!r}: parameters must be numbers") from None
    return Distribution(parts[0], *args)


@dataclass(frozen=True)
class WeightField:
    """omega: E -> (0, inf), a pure function of (seed, canonical edge)."""

    seed: int
    distribution: Distribution

    def __post_init__(self):
        if not isinstance(self.seed, int):
            raise SpecError("seed must be an integer")

    @property
    def seed64(self) -> int:
        return self.seed & MASK64

    def uniform(self, edge) -> float:
        return hash_to_unit(edge_hash(self.seed64, edge))

    def weight(self, edge) -> float:
        if self.distribution.kind == "const":
            return self.distribution.a
        return self.distribution.quantile(self.uniform(edge))

    __call__ = weight


class TableWeights:
    """Hand-specified weights on canonical edges (small oracle graphs)."""

    def __init__(self, table: Mapping):
        self._table = {}
        for (u, v), w in table.items():
            if not w > 0:
                raise PreconditionError(f"edge weight must be positive, got {w}")
            e = (u, v) if u < v else (v, u)
            self._table[e] = float(w)

    def weight(self, edge) -> float:
        return self._table[edge]

    __call__ = weight


def omega_length(vertices, W) -> float:
    """Sum of edge weights along a vertex sequence; 0 for a single vertex."""
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        if a == b:
            raise PathError(f"repeated consecutive vertex {a!r}")
        total += W.weight((a, b) if a < b else (b, a))
    return total
