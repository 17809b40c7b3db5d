"""Outward-rounded interval arithmetic on machine doubles.

The contract everywhere in this package is containment: an RInterval
[lo, hi] produced by any operation contains every real number achievable
by that operation over the input intervals. The mechanism is one-ulp
outward inflation after each correctly-rounded IEEE-754 primitive
(add/sub/mul/div are correctly rounded by the hardware, so one ulp
covers the nearest-rounding error). Transcendentals go through libm,
which is not proven correctly rounded: log gets a 2-ulp pad in scalar
code and a 4-ulp pad in vectorized numpy code (SIMD math libraries may
be looser). The reference-precision test suite checks these pads against
an 80+ bit oracle on a large random sample.

Decimal constants from the literature must enter through from_decimal so
that no constant silently drifts in the unsafe direction when parsed to
binary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

import numpy as np

_INF = math.inf


def f_dn(v: float) -> float:
    return math.nextafter(v, -_INF)


def f_up(v: float) -> float:
    return math.nextafter(v, _INF)


def log_dn(v: float) -> float:
    return f_dn(f_dn(math.log(v)))


def log_up(v: float) -> float:
    return f_up(f_up(math.log(v)))


@dataclass(frozen=True, slots=True)
class RInterval:
    """Closed interval [lo, hi] guaranteed to contain the true value."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}]")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def exact(v) -> "RInterval":
        """Interval around a value that is exactly representable."""
        f = float(v)
        if isinstance(v, int) and abs(v) > 2**53:
            return RInterval(f_dn(f), f_up(f))
        return RInterval(f, f)

    @staticmethod
    def from_int(n: int) -> "RInterval":
        return RInterval.exact(n)

    @staticmethod
    def from_decimal(s: str) -> "RInterval":
        """Tightest double interval containing the exact decimal value."""
        frac = Fraction(Decimal(s))
        f = float(frac)
        ff = Fraction(f)
        if ff == frac:
            return RInterval(f, f)
        if ff < frac:
            return RInterval(f, f_up(f))
        return RInterval(f_dn(f), f)

    @staticmethod
    def hull(a: "RInterval", b: "RInterval") -> "RInterval":
        return RInterval(min(a.lo, b.lo), max(a.hi, b.hi))

    # -- queries -----------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def encloses(self, other: "RInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __repr__(self):
        return f"RInterval({self.lo!r}, {self.hi!r})"

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(v) -> "RInterval":
        if isinstance(v, RInterval):
            return v
        if isinstance(v, int):
            return RInterval.exact(v)
        if isinstance(v, float):
            return RInterval(v, v)
        raise TypeError(f"cannot mix RInterval with {type(v)!r}")

    def __add__(self, other):
        o = self._coerce(other)
        return RInterval(f_dn(self.lo + o.lo), f_up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return RInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RInterval(f_dn(min(prods)), f_up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError(f"divisor interval {o} straddles zero")
        quots = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return RInterval(f_dn(min(quots)), f_up(max(quots)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- elementary functions ----------------------------------------------

    def log(self) -> "RInterval":
        if self.lo <= 0.0:
            raise ValueError(f"log of interval reaching {self.lo} <= 0")
        return RInterval(log_dn(self.lo), log_up(self.hi))

    def loglog(self) -> "RInterval":
        if self.lo <= 1.0:
            raise ValueError(f"loglog needs lo > 1, got {self.lo}")
        return self.log().log()

    def powi(self, k: int) -> "RInterval":
        """Integer power for a nonnegative base interval."""
        if k < 0 or self.lo < 0.0:
            raise ValueError("powi needs k >= 0 and a nonnegative base")
        out = RInterval(1.0, 1.0)
        for _ in range(k):
            out = out * self
        return out


# helpers shared with the formula code
TWO = RInterval(2.0, 2.0)
ONE = RInterval(1.0, 1.0)

# Meissel-Mertens constant, enclosed from its published decimal expansion
# 0.26149721284764278375542683860869585905...
MERTENS_M = RInterval.hull(
    RInterval.from_decimal("0.2614972128476427837"),
    RInterval.from_decimal("0.2614972128476427838"),
)


# -- directed vectorized arithmetic ----------------------------------------
#
# Same containment contract as RInterval, but over numpy arrays, used on
# the hot paths (bounded-path formulas in the verifier, direct-summation
# oracles, moment tables). Each np_* returns an outward-directed endpoint
# array; callers must track which side they are computing.

_NP_INF = np.float64(np.inf)
_NP_NINF = np.float64(-np.inf)


def np_dn(a):
    return np.nextafter(a, _NP_NINF)


def np_up(a):
    return np.nextafter(a, _NP_INF)


def np_log_dn(a):
    out = np.log(a)
    for _ in range(4):
        out = np.nextafter(out, _NP_NINF)
    return out


def np_log_up(a):
    out = np.log(a)
    for _ in range(4):
        out = np.nextafter(out, _NP_INF)
    return out


def np_to_float_dn(a) -> np.ndarray:
    """Lower bounds for integer array values after float64 conversion."""
    return np_dn(a.astype(np.float64))


def np_to_float_up(a) -> np.ndarray:
    return np_up(a.astype(np.float64))


def dirsum(terms: np.ndarray, direction: int) -> float:
    """Directed total of an array of directed per-term endpoints.

    numpy's pairwise summation of n terms satisfies
    |computed - true| <= (ceil(log2 n) + 1) * eps * sum(|terms|); the
    slack below pushes the result past that error in the requested
    direction (-1 down, +1 up).
    """
    if terms.size == 0:
        return 0.0
    total = float(np.sum(terms))
    abssum = float(np.sum(np.abs(terms)))
    slack = (math.ceil(math.log2(terms.size)) + 2) * 2.0**-53 * abssum
    if direction < 0:
        return f_dn(total - slack)
    return f_up(total + slack)


def interval_sum(lo_terms: np.ndarray, hi_terms: np.ndarray) -> RInterval:
    return RInterval(dirsum(lo_terms, -1), dirsum(hi_terms, +1))
