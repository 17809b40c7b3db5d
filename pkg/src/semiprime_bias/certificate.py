"""Analytic certificate: the collected lower bound and its ingredients.

The quantity being certified is
    W(x) = #\\{pq <= x : p == q == 3 (mod 4)\\} - (1/4) #\\{pq <= x : p, q odd\\}
counted with the full double sum over p <= sqrt(x), 2 < q <= x/p. The
collected closed form bounds W(x) from below for x >= 10^12; this module
evaluates that form in outward-rounded arithmetic, re-derives its
small-prime ingredients from the sieve (character moment tables, the
fixed constants, the class-count difference 147), brackets the character
series sum_p chi(p)/p, and certifies positivity of the collected form on
[x_min, x_cap] by a per-term monotone envelope on an adaptive geometric
grid, with an asymptotic dominance certificate past the cap.

All literature constants enter as exact decimal literals via
RInterval.from_decimal.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidityRangeError
from .rounding import (
    RInterval,
    f_dn,
    f_up,
    interval_sum,
    np_dn,
    np_log_dn,
    np_log_up,
    np_up,
)
from .sieve import PrimeFlags
from .tables import CheckpointTable, batch_counts, extract_primes, iter_prime_chunks

MOMENT_BOUND = 10**6
MOMENT_ORDER = 7  # powers of log p tracked: 0 .. 7

# class counts below 10^6, re-derived from the sieve and asserted before
# any certificate that depends on them
ODD_PRIMES_BELOW_1E6 = 78497
PI3_AT_1E6 = 39322
PI1_AT_1E6 = 39175
CLASS_DIFF_1E6 = 147

_C027x2 = RInterval.from_decimal("0.054")  # two-sided Li-centered AP bound, doubled
_C154 = RInterval.from_decimal("0.627") - RInterval.from_decimal("0.473")


def chi_minus4(n: int) -> int:
    """The nontrivial character mod 4: +1 on 1 (mod 4), -1 on 3 (mod 4)."""
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


@dataclass(frozen=True)
class CharSumTable:
    """Power-of-log moments of 1/p over p < bound, split by residue class.

    class1[i] encloses sum_{p < bound, p == 1 (4)} (log p)^i / p and
    class3[i] the 3 (mod 4) analogue; moments[i] = class1[i] - class3[i]
    is the chi-weighted sum.
    """

    bound: int
    class1: tuple
    class3: tuple
    moments: tuple


def _class_power_sums(primes: np.ndarray, imax: int) -> list[RInterval]:
    """Enclosures of sum (log p)^i / p for i = 0..imax over the array."""
    pf = primes.astype(np.float64)  # exact: p < 2^53
    l_dn = np_log_dn(pf)
    l_up = np_log_up(pf)
    pw_dn = np.ones_like(pf)
    pw_up = np.ones_like(pf)
    out = []
    for _ in range(imax + 1):
        out.append(interval_sum(np_dn(pw_dn / pf), np_up(pw_up / pf)))
        pw_dn = np_dn(pw_dn * l_dn)
        pw_up = np_up(pw_up * l_up)
    return out


def compute_char_moments(flags: PrimeFlags) -> CharSumTable:
    """Moment tables over 2 < p < 10^6, outward-rounded."""
    if flags.limit < MOMENT_BOUND:
        raise ConfigurationError(
            f"character moments need flags.limit >= {MOMENT_BOUND}"
        )
    odd = extract_primes(flags, 3, MOMENT_BOUND - 1)
    if odd.size != ODD_PRIMES_BELOW_1E6:
        raise ConfigurationError(
            f"sieve reports {odd.size} odd primes below 10^6, "
            f"expected {ODD_PRIMES_BELOW_1E6}; aborting certificate"
        )
    c1 = _class_power_sums(odd[(odd & 3) == 1], MOMENT_ORDER)
    c3 = _class_power_sums(odd[(odd & 3) == 3], MOMENT_ORDER)
    return CharSumTable(
        bound=MOMENT_BOUND,
        class1=tuple(c1),
        class3=tuple(c3),
        moments=tuple(a - b for a, b in zip(c1, c3)),
    )


def martin_coefficients(table: CharSumTable) -> list[RInterval]:
    """The six displayed coefficients of the polynomial-trick bound.

    Position i (coefficient of (log x)^-i) is the chi-weighted moment
    m[i] for i = 1..5; position 6 carries the asymmetric tail
    2*class1[6] - class3[6] coming from the extra s^l term that only the
    chi = +1 class receives.
    """
    out = [table.moments[i] for i in range(1, 6)]
    out.append(2 * table.class1[6] - table.class3[6])
    return out


def lchi_bracket(flags: PrimeFlags, tables: CheckpointTable,
                 x0: int | None = None) -> RInterval:
    """Enclosure of L = sum_{p > 2} chi(p)/p.

    Partial sum to x0 plus a tail bracket by partial summation: the tail
    equals -A(x0)/x0 + integral of A(t)/t^2 with A(t) the class-count
    difference, and |A(t)| <= 0.054 t/log^2 t for t >= 10^6 gives
    |integral| <= 0.054/log x0. A(x0) itself is exact from the tables.
    """
    if x0 is None:
        x0 = flags.limit
    if x0 < MOMENT_BOUND or x0 > flags.limit:
        raise ConfigurationError(
            f"lchi bracket needs 10^6 <= x0 <= flags.limit, got {x0}"
        )
    lo_parts, hi_parts = [], []
    for chunk in iter_prime_chunks(flags, 3, x0):
        pf = chunk.astype(np.float64)
        sign = np.where((chunk & 3) == 1, 1.0, -1.0)
        terms = sign / pf
        part = interval_sum(np_dn(terms), np_up(terms))
        lo_parts.append(part.lo)
        hi_parts.append(part.hi)
    partial = interval_sum(np.array(lo_parts), np.array(hi_parts))
    call, c3 = batch_counts(tables, np.array([x0]))
    a0 = int(call[0]) - 1 - 2 * int(c3[0])  # pi1(x0) - pi3(x0)
    endpoint = RInterval.from_int(-a0) / RInterval.from_int(x0)
    integral = _C027x2 / RInterval.from_int(x0).log()
    return partial + endpoint + RInterval(-integral.hi, integral.hi)


# -- closed-form component bounds (upper bounds of the component sums) -------

SUM_P_VALID_FROM = 1e12
SUM_INV3_VALID_FROM = 1e10


def _xiv(x) -> RInterval:
    return RInterval.from_int(x) if isinstance(x, int) else RInterval.exact(float(x))


def _require_from(x, threshold, what):
    if x < threshold:
        raise ValidityRangeError(
            f"{what} proven only for x >= {threshold}, got {x}"
        )


def bound_sum_p_over_logp(x) -> RInterval:
    """Upper bound for sum_{p <= sqrt x, p == 3 (4)} p / log p."""
    _require_from(x, SUM_P_VALID_FROM, "p/log p component bound")
    X = _xiv(x)
    L = X.log()
    return (X / L.powi(2)
            + RInterval.from_decimal("3.755") * X / L.powi(3)
            - RInterval.from_decimal("2.4683e7"))


def bound_sum_p_over_log2p(x) -> RInterval:
    """Upper bound for sum_{p <= sqrt x, p == 3 (4)} p / log^2 p."""
    _require_from(x, SUM_P_VALID_FROM, "p/log^2 p component bound")
    X = _xiv(x)
    L = X.log()
    return (RInterval.from_decimal("2.3e6")
            + 2 * X / L.powi(3)
            + RInterval.from_decimal("10.248") * X / L.powi(4))


def bound_sum_p_combined(x) -> RInterval:
    """Upper bound for sum_{p <= sqrt x, p == 3 (4)} of
    p/(2 log p) + 0.627 p/log^2 p, as a single display form."""
    _require_from(x, SUM_P_VALID_FROM, "combined p-sum component bound")
    X = _xiv(x)
    L = X.log()
    return (X / (2 * L.powi(2))
            + RInterval.from_decimal("3.1315") * X / L.powi(3)
            + RInterval.from_decimal("6.43") * X / L.powi(4)
            - RInterval.from_decimal("1.08e7"))


def bound_sum_inv_p_log2(x) -> RInterval:
    """Upper bound for sum_{3 <= p <= sqrt x} 1/(p log^2(x/p))."""
    _require_from(x, SUM_P_VALID_FROM, "1/(p log^2(x/p)) component bound")
    X = _xiv(x)
    L = X.log()
    ll3 = (X / 3).loglog()
    return (ll3 / L.powi(2)
            + RInterval.from_decimal("0.81") / L.powi(2)
            + RInterval.from_decimal("8.1") * ll3 / L.powi(3)
            + RInterval.from_decimal("51.89") / L.powi(3))


def bound_sum_inv_p_log3(x) -> RInterval:
    """Upper bound for sum_{3 <= p <= sqrt x} 1/(p log^3(x/p))."""
    _require_from(x, SUM_INV3_VALID_FROM, "1/(p log^3(x/p)) component bound")
    X = _xiv(x)
    L = X.log()
    ll3 = (X / 3).loglog()
    return (ll3 / L.powi(3)
            + RInterval.from_decimal("12.15") * ll3 / L.powi(4)
            + RInterval.from_decimal("2.34") / L.powi(3)
            + RInterval.from_decimal("125.12") / L.powi(4)
            + RInterval.from_decimal("36.33") / L.powi(5)
            - RInterval.from_decimal("14.67") / L.powi(6))


def class_diff_at_1e6(tables: CheckpointTable) -> int:
    """pi(10^6;4,3) - pi(10^6;4,1), recomputed from the tables."""
    call, c3 = batch_counts(tables, np.array([MOMENT_BOUND]))
    diff = 2 * int(c3[0]) - (int(call[0]) - 1)
    if diff != CLASS_DIFF_1E6:
        raise ConfigurationError(
            f"class count difference at 10^6 is {diff}, expected "
            f"{CLASS_DIFF_1E6}; aborting certificate"
        )
    return diff


def bound_char_logp_sum(x, moments: CharSumTable,
                        tables: CheckpointTable) -> RInterval:
    """Upper bound for sum_{3 <= p <= sqrt x} chi(p) log p / (p log(x/p)).

    Assembled from its derivation rather than the final rounded display:
    the polynomial-trick part below 10^6 uses the moment tables, and the
    partial-summation part above 10^6 keeps log(x/10^6) unsimplified and
    derives its count constant from the tables (147 = 39322 - 39175).
    The display form (available as char_logp_sum_display) rounds every
    piece upward and so dominates this value.
    """
    _require_from(x, SUM_P_VALID_FROM, "character log-weight component bound")
    diff = class_diff_at_1e6(tables)
    X = _xiv(x)
    L = X.log()
    martin = martin_coefficients(moments)
    small = sum(
        (martin[i] / L.powi(i + 1) for i in range(6)),
        RInterval(0.0, 0.0),
    )
    l6 = RInterval.from_int(MOMENT_BOUND).log()
    ll6c = l6.log()
    lx6 = (X / MOMENT_BOUND).log()
    ll6 = lx6.log()
    large = (
        4 * _C154 / L.powi(2)
        + RInterval.from_int(diff) * l6 / (MOMENT_BOUND * lx6)
        + _C154 * ((ll6 - ll6c) / L
                   - 2 * (ll6 - ll6c) / L.powi(2)
                   - 1 / (L * l6)
                   + 2 / (lx6 * L))
    )
    return small + large


def char_logp_sum_display(x) -> RInterval:
    """The final displayed form of the same upper bound (rounded literals)."""
    _require_from(x, SUM_P_VALID_FROM, "character log-weight display bound")
    X = _xiv(x)
    L = X.log()
    ll6 = (X / MOMENT_BOUND).loglog()
    return (RInterval.from_decimal("0.154") * ll6 / L
            - RInterval.from_decimal("0.308") * ll6 / L.powi(2)
            - RInterval.from_decimal("0.955") / L
            + RInterval.from_decimal("0.583") / L.powi(2)
            - RInterval.from_decimal("6.5") / L.powi(3)
            - RInterval.from_decimal("40.9") / L.powi(4)
            - RInterval.from_decimal("322") / L.powi(5)
            + RInterval.from_decimal("573393") / L.powi(6))


# the displayed polynomial-trick constants; the source truncates toward
# zero, so magnitudes never overstate the computed values
MARTIN_DISPLAY = ("-0.545", "-1.458", "-6.5", "-40.9", "-322", "573393")
MARTIN_RELTOL = 0.005


def martin_display_audit(table: CharSumTable) -> list[dict]:
    """Compare the derived coefficients against the displayed constants.

    Checks 0.5% relative agreement plus direction: the five negative
    constants must dominate the computed enclosure from above (they sit
    in an upper bound), and the positive tail constant must not exceed
    it (its display truncates surplus that the polynomial trick already
    over-provides).
    """
    out = []
    computed = martin_coefficients(table)
    for i, (c, disp_s) in enumerate(zip(computed, MARTIN_DISPLAY), start=1):
        disp = float(disp_s)
        rel = abs(c.mid - disp) / abs(disp)
        if disp < 0:
            direction_ok = c.hi <= disp
        else:
            direction_ok = disp <= c.lo
        out.append({
            "position": i,
            "displayed": disp,
            "computed_lo": c.lo,
            "computed_hi": c.hi,
            "rel_error": rel,
            "ok": bool(rel <= MARTIN_RELTOL and direction_ok),
        })
    return out


# -- audit of the fixed small-prime constants ---------------------------------


@dataclass
class AuditEntry:
    name: str
    computed: RInterval
    published_value: float
    relation: str  # "le": computed must stay <= the published constant
    ok: bool

    def as_dict(self):
        return {
            "name": self.name,
            "computed_lo": repr(self.computed.lo),
            "computed_hi": repr(self.computed.hi),
            "published_value": repr(self.published_value),
            "relation": self.relation,
            "ok": self.ok,
        }


@dataclass
class AuditReport:
    entries: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json(self) -> str:
        return json.dumps({
            "ok": self.ok,
            "elapsed_ms": self.elapsed_ms,
            "entries": [e.as_dict() for e in self.entries],
        })


def _li_from_2(x: float) -> RInterval:
    """Li(x) = integral from 2, via mpmath at 40 digits with a generous
    relative pad (only used to audit published roundings, never in the
    certified formula chain)."""
    import mpmath

    with mpmath.workdps(40):
        v = mpmath.li(x) - mpmath.li(2)
    f = float(v)
    pad = abs(f) * 1e-12
    return RInterval(f_dn(f - pad), f_up(f + pad))


def small_constants_audit(flags: PrimeFlags,
                          tables: CheckpointTable) -> AuditReport:
    """Recompute the fixed constants of the main derivation from the sieve
    and confirm each published rounding over-covers the exact value in the
    direction its sign role requires."""
    if flags.limit < MOMENT_BOUND:
        raise ConfigurationError("constants audit needs flags.limit >= 10^6")
    t0 = time.perf_counter()
    p3 = extract_primes(flags, 3, MOMENT_BOUND - 1)
    p3 = p3[(p3 & 3) == 3].astype(np.float64)
    l_dn, l_up = np_log_dn(p3), np_log_up(p3)
    s1 = interval_sum(np_dn(p3 / l_up), np_up(p3 / l_dn))
    s2 = interval_sum(np_dn(p3 / np_up(l_up * l_up)),
                      np_up(p3 / np_dn(l_dn * l_dn)))

    call, c3 = batch_counts(tables, np.array([MOMENT_BOUND]))
    pi3 = int(c3[0])
    pi1 = int(call[0]) - 1 - pi3
    n_odd = int(call[0]) - 1

    log10 = RInterval.from_int(10).log()
    l6 = RInterval.from_int(MOMENT_BOUND).log()
    c473 = RInterval.from_decimal("0.473")
    x12 = RInterval.from_int(10**12)

    c1 = s1 - pi3 * RInterval.from_int(MOMENT_BOUND) / (6 * log10)
    c2 = s2 - pi3 * RInterval.from_int(MOMENT_BOUND) / (36 * log10.powi(2))
    c3_ = c2 + x12 / (4 * l6.powi(3)) + c473 * x12 / (2 * l6.powi(4))
    c4 = c1 + x12 / (144 * log10.powi(2)) + c473 * _li_from_2(1e12) * \
        RInterval.exact(2.0) / 3 - c473 * (
            x12 / (3 * l6) + x12 / (6 * l6.powi(2)) - x12 / (3 * l6.powi(3)))
    c5 = (RInterval.from_decimal("0.5") * RInterval.from_decimal("-2.4683e7")
          + RInterval.from_decimal("0.627") * RInterval.from_decimal("2.3e6"))

    entries = [
        AuditEntry("odd_primes_below_1e6",
                   RInterval.from_int(n_odd), ODD_PRIMES_BELOW_1E6, "eq",
                   n_odd == ODD_PRIMES_BELOW_1E6),
        AuditEntry("pi3_at_1e6", RInterval.from_int(pi3), PI3_AT_1E6, "eq",
                   pi3 == PI3_AT_1E6),
        AuditEntry("pi1_at_1e6", RInterval.from_int(pi1), PI1_AT_1E6, "eq",
                   pi1 == PI1_AT_1E6),
        AuditEntry("class_diff_147", RInterval.from_int(pi3 - pi1),
                   CLASS_DIFF_1E6, "eq", pi3 - pi1 == CLASS_DIFF_1E6),
        AuditEntry("0.623_sum_p_log2p",
                   RInterval.from_decimal("0.623") * s2, 6.667e7, "le",
                   (RInterval.from_decimal("0.623") * s2).hi <= 6.667e7),
        AuditEntry("sum_p_logp_minus_endpoint", c1, -1.428e9, "le",
                   c1.hi <= -1.428e9),
        AuditEntry("sum_p_log2p_minus_endpoint", c2, -9.9e7, "le",
                   c2.hi <= -9.9e7),
        AuditEntry("p_log2p_collected", c3_, 2.3e6, "le", c3_.hi <= 2.3e6),
        AuditEntry("p_logp_collected", c4, -2.4683e7, "le",
                   c4.hi <= -2.4683e7),
        AuditEntry("combined_constant", c5, -1.08e7, "le", c5.hi <= -1.08e7),
        AuditEntry("collected_w_constant",
                   RInterval.from_decimal("-6.667e7")
                   + RInterval.from_decimal("1.08e7"),
                   -5.587e7, "eq",
                   (RInterval.from_decimal("-6.667e7")
                    + RInterval.from_decimal("1.08e7")).contains(-5.587e7)),
    ]
    return AuditReport(entries=entries,
                       elapsed_ms=1e3 * (time.perf_counter() - t0))


# -- the collected lower bound ------------------------------------------------

W_VALID_FROM = 1e12

# (name, decimal coefficient, power of log x, loglog divisor or None);
# every term is multiplied by x, and the trailing constant stands alone
W_TERM_SPECS = (
    ("x_over_log", "0.0835", 1, None),
    ("x_over_log2", "-0.54075", 2, None),
    ("x_over_log3", "-17.8721", 3, None),
    ("x_over_log4", "-83.3178", 4, None),
    ("x_over_log5", "-12.5721", 5, None),
    ("x_over_log6", "89.7054", 6, None),
    ("x_over_log7", "-143348.25", 7, None),
    ("ll1e6_over_log2", "-0.0385", 2, 10**6),
    ("ll1e6_over_log3", "0.077", 3, 10**6),
    ("ll3_over_log2", "-0.25", 2, 3),
    ("ll3_over_log3", "-2.6525", 3, 3),
    ("ll3_over_log4", "-7.62412", 4, 3),
)
W_CONSTANT = RInterval.from_decimal("-5.587e7")


@dataclass(frozen=True)
class WBoundTerms:
    coeffs: dict
    constant: RInterval


W_TERMS = WBoundTerms(
    coeffs={name: (RInterval.from_decimal(c), k, s)
            for name, c, k, s in W_TERM_SPECS},
    constant=W_CONSTANT,
)


def w_terms(x) -> dict:
    """Each collected-bound term as its own enclosure (plus 'const')."""
    _require_from(x, W_VALID_FROM, "collected W lower bound")
    X = _xiv(x)
    L = X.log()
    out = {}
    for name, (coeff, k, s) in W_TERMS.coeffs.items():
        val = coeff * X / L.powi(k)
        if s is not None:
            val = val * (X / s).loglog()
        out[name] = val
    out["const"] = W_TERMS.constant
    return out


def w_lower_bound(x) -> RInterval:
    """Outward-rounded value of the collected lower bound for W(x)."""
    terms = w_terms(x)
    return sum(terms.values(), RInterval(0.0, 0.0))


# -- positivity certificate ----------------------------------------------------


@dataclass
class CertResult:
    certified: bool
    x_min: float
    x_cap: float
    grid_points: int
    subintervals: int
    max_depth: int
    failed_at: tuple | None
    asymptotic: dict
    elapsed_ms: float = 0.0

    def to_json(self) -> str:
        asym = {k: (repr(v) if isinstance(v, float) else v)
                for k, v in self.asymptotic.items()}
        return json.dumps({
            "certified": self.certified,
            "x_min": repr(self.x_min),
            "x_cap": repr(self.x_cap),
            "grid_points": self.grid_points,
            "subintervals": self.subintervals,
            "max_depth": self.max_depth,
            "failed_at": None if self.failed_at is None
            else [repr(self.failed_at[0]), repr(self.failed_at[1])],
            "asymptotic": asym,
        })


def _envelope_lo(a: float, b: float, terms_a: dict, terms_b: dict) -> float:
    """Lower bound of the collected form on [a, b].

    Every term c*x/log^k x (and its loglog variants) is monotone
    increasing in absolute value once log x > k, which holds everywhere
    from 10^12 on; positive-coefficient terms therefore attain their
    minimum at a and negative ones at b.
    """
    total = RInterval(0.0, 0.0)
    for name, (coeff, k, s) in W_TERMS.coeffs.items():
        pick = terms_a if coeff.lo > 0 else terms_b
        total = total + pick[name]
    total = total + W_TERMS.constant
    return total.lo


def asymptotic_dominance(x_cap: float) -> dict:
    """Certificate that the leading 0.0835 x/log x term dominates for all
    x >= x_cap: with L = log x, loglog(x/s) <= log L, so W(x) >=
    (x/L) * margin(L) - 5.587e7 with margin(L) = 0.0835 - sum of
    |c| * (log L or 1) / L^(k-1); every margin summand decreases in L, so
    a positive margin at log(x_cap), together with (x/L) * margin
    exceeding the constant there, certifies all larger x."""
    Lcap = RInterval.exact(x_cap).log()
    margin = RInterval.from_decimal("0.0835")
    logL = Lcap.log()
    for name, (coeff, k, s) in W_TERMS.coeffs.items():
        if name == "x_over_log":
            continue
        mag_hi = max(abs(coeff.lo), abs(coeff.hi))
        term = RInterval(mag_hi, mag_hi) / Lcap.powi(k - 1)
        if s is not None:
            term = term * logL
        margin = margin - term
    floor_at_cap = (RInterval.exact(x_cap) / Lcap) * RInterval(margin.lo, margin.lo)
    const_ok = margin.lo > 0 and floor_at_cap.lo > abs(W_TERMS.constant.lo)
    # decreasing-summand side condition: log L grows slower than any power
    decreasing_ok = Lcap.lo > math.e  # log L / L^m decreasing once L > e^(1/m)
    return {
        "certified": bool(margin.lo > 0 and const_ok and decreasing_ok),
        "log_x_cap": Lcap.lo,
        "margin_at_cap": margin.lo,
    }


def certify_tail(x_min: float = 1.1e13, x_cap: float = 1e100,
                 *, grid_points: int = 200, max_depth: int = 60) -> CertResult:
    """Certify w_lower_bound(x) > 0 for all x in [x_min, x_cap].

    Geometric base grid; any subinterval whose monotone envelope fails is
    bisected geometrically until it certifies or collapses below relative
    width 1e-12, which is reported as the failing subinterval. A failed
    certificate is report content, not an exception.
    """
    if x_min < W_VALID_FROM:
        raise ValidityRangeError(
            f"certificate domain starts at {W_VALID_FROM}, got x_min = {x_min}"
        )
    if not x_cap > x_min:
        raise ConfigurationError("x_cap must exceed x_min")
    t0 = time.perf_counter()
    grid = np.geomspace(x_min, x_cap, grid_points)
    grid[0], grid[-1] = x_min, x_cap

    term_cache: dict[float, dict] = {}

    def terms_at(v: float) -> dict:
        if v not in term_cache:
            term_cache[v] = w_terms(v)
        return term_cache[v]

    # the envelope argument needs every term monotone on the whole range
    assert math.log(x_min) > 7 + 1e-9
    assert x_min / 3 > math.e and x_min / 10**6 > math.e

    subintervals = 0
    max_depth_seen = 0
    failed_at = None
    stack = [(float(grid[i]), float(grid[i + 1]), 0)
             for i in range(len(grid) - 2, -1, -1)]
    while stack:
        a, b, depth = stack.pop()
        subintervals += 1
        max_depth_seen = max(max_depth_seen, depth)
        if _envelope_lo(a, b, terms_at(a), terms_at(b)) > 0.0:
            continue
        if b <= a * (1 + 1e-12) or depth >= max_depth:
            failed_at = (a, b)
            break
        mid = a * math.sqrt(b / a)
        if not (a < mid < b):
            failed_at = (a, b)
            break
        stack.append((mid, b, depth + 1))
        stack.append((a, mid, depth + 1))

    asym = asymptotic_dominance(x_cap)
    return CertResult(
        certified=failed_at is None,
        x_min=x_min,
        x_cap=x_cap,
        grid_points=grid_points,
        subintervals=subintervals,
        max_depth=max_depth_seen,
        failed_at=failed_at,
        asymptotic=asym,
        elapsed_ms=1e3 * (time.perf_counter() - t0),
    )
