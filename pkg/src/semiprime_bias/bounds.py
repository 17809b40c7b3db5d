"""Certified two-sided bounds for pi(x), pi(x;4,a), Li(x) and sum 1/p.

Each operation returns an outward-rounded enclosure of the counting
function together with the smallest x its inequality is proven for;
querying below that x raises ValidityRangeError instead of extrapolating.
One-sided bounds are separate functions (pi_lower is valid from 17 while
the two-sided pi_bounds needs 355991, etc.) so that intervals never carry
infinite endpoints.

Sources and validity thresholds:
  - pi:     x/log x <= pi(x) <= x/log x + x/log^2 x + 2.51 x/log^3 x
            (lower from 17, upper from 355991)
  - pi(x;4,a), a in {1,3}: x/(2 log x) < pi < x/(2 log x) + 5x/(4 log^2 x)
            from 800; for x >= 10^6 the tighter 0.473 / 0.627 pair holds
  - pi(x;4,3): lower from 19, upper for all positive x (for x < 3 the
            count is exactly 0 and we return that instead of the formula,
            which misbehaves as x -> 0)
  - Li:     x/log x + x/log^2 x < Li(x) < x/log x + (6/5) x/log^2 x
            (lower from 190, upper from 10^6)
  - Mertens: |sum 1/p - loglog x - M| <= 4/log(x+1) + 2/(x log x), x >= 3,
            plus the simple +-1 window
"""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidityRangeError
from .rounding import (
    MERTENS_M,
    RInterval,
    np_dn,
    np_log_dn,
    np_log_up,
    np_to_float_dn,
    np_to_float_up,
    np_up,
)
from .sieve import PrimeFlags
from .tables import CheckpointTable, extract_primes


class BoundSource(enum.Enum):
    PNT_DUSART_RS = "PNT_DUSART_RS"
    AP_CLASSIC = "AP_CLASSIC"
    AP_STRONG = "AP_STRONG"
    LI = "LI"
    MERTENS = "MERTENS"
    AP_3MOD4_ALLX = "AP_3MOD4_ALLX"


@dataclass(frozen=True)
class BoundResult:
    value: RInterval
    valid_from: float
    source: BoundSource


PI_LOWER_FROM = 17.0
PI_UPPER_FROM = 355991.0
AP_FROM = 800.0
AP_STRONG_FROM = 1e6
AP_3MOD4_LOWER_FROM = 19.0
LI_LOWER_FROM = 190.0
LI_UPPER_FROM = 1e6
MERTENS_FROM = 3.0

_C251 = RInterval.from_decimal("2.51")
_C125 = RInterval.from_decimal("1.25")
_C25 = RInterval.from_decimal("2.5")
_C473 = RInterval.from_decimal("0.473")
_C627 = RInterval.from_decimal("0.627")
_C65 = RInterval.from_decimal("1.2")
_HALF = RInterval.exact(0.5)


def _point(x) -> RInterval:
    if isinstance(x, int):
        return RInterval.from_int(x)
    return RInterval.exact(float(x))


def _require(x, threshold: float, source: str):
    if x < threshold:
        raise ValidityRangeError(
            f"x = {x} below validity threshold {threshold} of {source}"
        )


def pi_lower(x) -> float:
    """One-sided: pi(x) >= x/log x for x >= 17 (rounded down)."""
    _require(x, PI_LOWER_FROM, "Dusart/Rosser-Schoenfeld lower bound")
    X = _point(x)
    return (X / X.log()).lo


def pi_upper(x) -> float:
    """One-sided Dusart/Rosser-Schoenfeld upper bound, x >= 355991."""
    _require(x, PI_UPPER_FROM, "Dusart/Rosser-Schoenfeld upper bound")
    X = _point(x)
    L = X.log()
    return (X / L + X / L.powi(2) + _C251 * X / L.powi(3)).hi


def pi_bounds(x) -> BoundResult:
    """Two-sided pi(x) enclosure; needs x >= 355991."""
    _require(x, PI_UPPER_FROM, "Dusart/Rosser-Schoenfeld two-sided bound")
    return BoundResult(
        value=RInterval(pi_lower(x), pi_upper(x)),
        valid_from=PI_UPPER_FROM,
        source=BoundSource.PNT_DUSART_RS,
    )


def pi_upper_ap_composed(x) -> float:
    """pi(x) < x/log x + 5x/(2 log^2 x) + 1 for x >= 800, by summing the
    arithmetic-progression upper bound over both odd classes plus the
    prime 2. Fills the gap below the Dusart threshold on bounded paths."""
    _require(x, AP_FROM, "composed AP upper bound for pi")
    X = _point(x)
    L = X.log()
    return (X / L + _C25 * X / L.powi(2) + 1).hi


def pi_ap_bounds(x, a: int) -> BoundResult:
    """Two-sided pi(x;4,a) enclosure for a in {1,3}, x >= 800."""
    if a not in (1, 3):
        raise ValueError(f"residue a = {a} must be 1 or 3")
    _require(x, AP_FROM, "Bennett-Martin-O'Bryant-Rechnitzer AP bounds")
    X = _point(x)
    L = X.log()
    main = _HALF * X / L
    if x >= AP_STRONG_FROM:
        lo = (main + _C473 * X / L.powi(2)).lo
        hi = (main + _C627 * X / L.powi(2)).hi
        return BoundResult(RInterval(lo, hi), AP_STRONG_FROM, BoundSource.AP_STRONG)
    lo = main.lo
    hi = (main + _C125 * X / L.powi(2)).hi
    return BoundResult(RInterval(lo, hi), AP_FROM, BoundSource.AP_CLASSIC)


def pi_3mod4_bounds(x) -> BoundResult:
    """pi(x;4,3) enclosure: upper for all x > 0, lower from 19.

    Below 3 the class is empty and the exact [0, 0] is returned (the
    formula upper degenerates as x -> 0 and is not needed there). Between
    3 and 19 only the upper side carries information; the lower endpoint
    is the trivial 0.
    """
    if x <= 0:
        raise ValidityRangeError(f"pi(x;4,3) bound needs x > 0, got {x}")
    if x < 3:
        return BoundResult(RInterval(0.0, 0.0), 0.0, BoundSource.AP_3MOD4_ALLX)
    if x >= AP_STRONG_FROM:
        return pi_ap_bounds(x, 3)
    X = _point(x)
    L = X.log()
    hi = (_HALF * X / L + _C125 * X / L.powi(2)).hi
    lo = (_HALF * X / L).lo if x >= AP_3MOD4_LOWER_FROM else 0.0
    return BoundResult(RInterval(lo, hi), 0.0, BoundSource.AP_3MOD4_ALLX)


def li_lower(x) -> float:
    """Li(x) > x/log x + x/log^2 x for x >= 190 (rounded down)."""
    _require(x, LI_LOWER_FROM, "logarithmic integral lower bound")
    X = _point(x)
    L = X.log()
    return (X / L + X / L.powi(2)).lo


def li_bounds(x) -> BoundResult:
    """Two-sided Li(x) enclosure; needs x >= 10^6."""
    _require(x, LI_UPPER_FROM, "logarithmic integral upper bound")
    X = _point(x)
    L = X.log()
    hi = (X / L + _C65 * X / L.powi(2)).hi
    return BoundResult(RInterval(li_lower(x), hi), LI_UPPER_FROM, BoundSource.LI)


def mertens_bounds(x, simple: bool = False) -> BoundResult:
    """Enclosure of sum_{p <= x} 1/p for x >= 3.

    Default: loglog x + M with error 4/log(x+1) + 2/(x log x). With
    simple=True, the +-1 window around loglog x (proven for all x >= 3;
    the tabulated small range is re-verified by direct summation in the
    test suite).
    """
    _require(x, MERTENS_FROM, "Mertens bound")
    X = _point(x)
    LL = X.loglog()
    if simple:
        return BoundResult(
            RInterval(LL.lo - 1.0, LL.hi + 1.0), MERTENS_FROM, BoundSource.MERTENS
        )
    err = RInterval.exact(4) / (X + 1).log() + RInterval.exact(2) / (X * X.log())
    lo = (LL + MERTENS_M - err).lo
    hi = (LL + MERTENS_M + err).hi
    return BoundResult(RInterval(lo, hi), MERTENS_FROM, BoundSource.MERTENS)


# -- vectorized one-sided forms (verifier hot path) --------------------------


def vec_pi_upper(t: np.ndarray) -> np.ndarray:
    """Rounded-up pi(t) upper bounds for an int64 array, t >= 800.

    Uses Dusart/Rosser-Schoenfeld from 355991 and the composed AP bound
    below that.
    """
    t = np.asarray(t, dtype=np.int64)
    if t.size and int(t.min()) < AP_FROM:
        raise ConfigurationError(
            f"pi upper bound requested at t = {int(t.min())} < 800; "
            "raise max_prime so bounded queries stay in proven range"
        )
    tf = np_to_float_up(t)
    l_dn = np_log_dn(np_to_float_dn(t))
    inv = np_up(tf / l_dn)
    term2 = np_up(inv / l_dn)
    out = np.where(
        t >= PI_UPPER_FROM,
        np_up(inv + np_up(term2 + np_up(np_up(_C251.hi * term2) / l_dn))),
        np_up(inv + np_up(np_up(_C25.hi * term2) + 1.0)),
    )
    return out


def vec_pi3_lower(t: np.ndarray) -> np.ndarray:
    """Rounded-down pi(t;4,3) lower bounds for an int64 array, t >= 800."""
    t = np.asarray(t, dtype=np.int64)
    if t.size and int(t.min()) < AP_FROM:
        raise ConfigurationError(
            f"pi(t;4,3) lower bound requested at t = {int(t.min())} < 800; "
            "raise max_prime so bounded queries stay in proven range"
        )
    tf = np_to_float_dn(t)
    l_up = np_log_up(np_to_float_up(t))
    main = np_dn(np_dn(0.5 * tf) / l_up)
    strong = np_dn(main + np_dn(np_dn(_C473.lo * tf) / np_up(l_up * l_up)))
    return np.where(t >= AP_STRONG_FROM, strong, main)


# -- small-range scan of the 3-mod-4 bounds ----------------------------------


@dataclass
class ScanReport:
    lower_range: tuple
    upper_range: tuple
    checked: int
    violations: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps({
            "range": {"lower": list(self.lower_range),
                      "upper": list(self.upper_range)},
            "checked": self.checked,
            "violations": [
                {"x": int(v["x"]), "lhs": repr(v["lhs"]), "rhs": repr(v["rhs"])}
                for v in self.violations
            ],
            "elapsed_ms": self.elapsed_ms,
        })


def scan_3mod4_bounds(
    flags: PrimeFlags,
    tables: CheckpointTable,
    *,
    hi: int = 10**6,
    lower_lo: int = 19,
    upper_lo: int = 1,
    lower_coeff: str = "0.5",
) -> ScanReport:
    """Check x/(2 log x) < pi(x;4,3) on integers [lower_lo, hi] and the
    5x/(4 log^2 x) upper bound on [upper_lo, hi].

    The monotonicity precondition for extending the integer scan to real
    x (the comparison functions are monotone on each (a, a+1) once
    log x > 1) is asserted over the scan range. Violations are report
    content, not exceptions; lower_coeff exists so mutation tests can
    verify the scan actually detects a broken bound.
    """
    if flags.limit < hi:
        raise ConfigurationError(f"scan to {hi} needs flags.limit >= {hi}")
    t0 = time.perf_counter()

    p3 = extract_primes(flags, 3, hi)
    p3 = p3[(p3 & 3) == 3]
    ind = np.zeros(hi + 1, dtype=np.int64)
    ind[p3] = 1
    pi3 = np.cumsum(ind)

    xs = np.arange(2, hi + 1, dtype=np.int64)
    xf = xs.astype(np.float64)
    l_dn = np_log_dn(xf)
    l_up = np_log_up(xf)
    assert float(l_dn[xs >= 3].min()) > 1.0  # monotone-extension precondition

    coeff = RInterval.from_decimal(lower_coeff)
    counts = pi3[2:]

    violations = []
    lo_mask = xs >= max(lower_lo, 2)
    lhs_up = np_up(np_up(coeff.hi * xf) / l_dn)
    bad = np.flatnonzero(lo_mask & ~(lhs_up < counts))
    for j in bad:
        violations.append({"x": int(xs[j]), "lhs": float(lhs_up[j]),
                           "rhs": int(counts[j])})

    up_mask = xs >= max(upper_lo, 2)
    rhs_dn = np_dn(
        np_dn(np_dn(0.5 * xf) / l_up)
        + np_dn(np_dn(np_dn(1.25 * xf) / l_up) / l_up)
    )
    bad = np.flatnonzero(up_mask & ~(counts <= rhs_dn))
    for j in bad:
        violations.append({"x": int(xs[j]), "lhs": int(counts[j]),
                           "rhs": float(rhs_dn[j])})
    # x = 1: the class is empty and the bound tends to +inf; nothing to check

    violations.sort(key=lambda v: v["x"])
    return ScanReport(
        lower_range=(lower_lo, hi),
        upper_range=(upper_lo, hi),
        checked=int(xs.size),
        violations=violations,
        elapsed_ms=1e3 * (time.perf_counter() - t0),
    )
