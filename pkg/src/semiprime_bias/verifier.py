"""Skip-ahead verification that 3-mod-4 semiprimes stay above a quarter.

For each visited odd x the engine certifies
    numerator_lb   <= #\\{pq <= x : p == q == 3 (mod 4), p <= q\\}
    denominator_ub >= #\\{pq <= x : p, q odd, p <= q\\}
with 4 * numerator_lb > denominator_ub, then advances to
x + 2 * (4*numerator_lb - denominator_ub - 1). The skip is sound because
every skipped odd integer can add at most one new odd semiprime to the
denominator and cannot remove any from the numerator, so the worst case
over k skipped odd points still satisfies 4*n > d + k.

Inner counts for a factor p are exact table lookups while
floor(x/p) <= max_prime; above that the numerator falls back to the
proven lower bound for pi(t;4,3) (floored) and the denominator to the
proven upper bound for pi(t) (ceiled), so every emitted record is an
integer certificate whatever mix of paths produced it.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import vec_pi3_lower, vec_pi_upper
from .errors import ConfigurationError
from .sieve import PrimeFlags
from .tables import CheckpointTable, SmallPrimeList, batch_counts

GOAL_CAP = 10**18
ORACLE_BUDGET = 10**8


@dataclass(frozen=True)
class BiasCounts:
    x: int
    numerator_lb: int
    denominator_ub: int
    exact: bool


def count_at(x: int, flags: PrimeFlags, tables: CheckpointTable,
             splist: SmallPrimeList) -> BiasCounts:
    """Certified numerator/denominator bounds at odd x >= 9."""
    if x < 9:
        raise ConfigurationError(f"count_at needs x >= 9, got {x}")
    r = math.isqrt(x)
    if r > flags.limit or r > splist.bound:
        raise ConfigurationError(
            f"sqrt({x}) = {r} exceeds the sieve/list range; raise max_prime"
        )
    k = int(np.searchsorted(splist.primes, r, side="right"))
    ps = splist.primes[1:k]  # odd primes <= sqrt(x)
    if ps.size == 0:
        return BiasCounts(x=x, numerator_lb=0, denominator_ub=0, exact=True)

    t = x // ps
    idx = np.arange(1, k, dtype=np.int64)          # primes strictly below p
    idx3 = (splist.cum_3mod4[1:k] - splist.is_3mod4[1:k]).astype(np.int64)
    is3 = splist.is_3mod4[1:k]
    in_range = t <= flags.limit

    denominator = 0
    numerator = 0

    te = t[in_range]
    if te.size:
        call, c3 = batch_counts(tables, te)
        denominator += int(np.sum(call - idx[in_range]))
        m3 = is3[in_range]
        numerator += int(np.sum(c3[m3] - idx3[in_range][m3]))

    tb = t[~in_range]
    if tb.size:
        ub = np.ceil(vec_pi_upper(tb)).astype(np.int64)
        denominator += int(np.sum(ub - idx[~in_range]))
        m3 = is3[~in_range]
        if np.any(m3):
            lb = np.floor(vec_pi3_lower(tb[m3])).astype(np.int64)
            # each term counts q in [p, x/p] with the prime p itself
            # admissible, so the true inner count is at least 1
            terms = np.maximum(lb - idx3[~in_range][m3], 1)
            numerator += int(np.sum(terms))

    return BiasCounts(
        x=x,
        numerator_lb=numerator,
        denominator_ub=denominator,
        exact=bool(tb.size == 0),
    )


def skip_ahead(counts: BiasCounts) -> int:
    """Sound advance (in integers) after a verified state; always >= 2."""
    surplus = 4 * counts.numerator_lb - counts.denominator_ub
    if surplus <= 0:
        raise ValueError(
            f"skip_ahead called on unverified counts at x = {counts.x}"
        )
    k = surplus - 1
    return 2 * k if k >= 1 else 2


@dataclass
class VerificationReport:
    start: int
    goal: int
    status: str                    # VERIFIED | FAILED_AT | ABORTED
    failed_at: int | None
    steps: int
    records: list = field(default_factory=list)  # (x, n_lb, d_ub, skip, exact)
    elapsed_s: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status == "VERIFIED"

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "goal": self.goal,
            "status": self.status,
            "failed_at": self.failed_at,
            "steps": self.steps,
            "elapsed_s": round(self.elapsed_s, 3),
            "config": self.config,
            "records": [
                {"x": x, "numerator_lb": n, "denominator_ub": d,
                 "skip": s, "exact": e}
                for (x, n, d, s, e) in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["x", "numerator_lb", "denominator_ub", "skip", "exact"])
        for (x, n, d, s, e) in self.records:
            writer.writerow([x, n, d, s, int(e)])
        return buf.getvalue()


def verify_range(start: int, goal: int, flags: PrimeFlags,
                 tables: CheckpointTable, splist: SmallPrimeList,
                 *, stride: int = 1, progress_every: int = 0,
                 count_fn=None) -> VerificationReport:
    """Walk x from start to goal with skip-ahead; stop on any failure.

    Records are kept every `stride` steps (the first step, the last step
    and a failing step are always kept). count_fn exists so tests can
    inject a broken counting rule and watch the walk detect it.
    """
    if goal > GOAL_CAP:
        raise ConfigurationError(f"goal {goal} beyond the {GOAL_CAP} ceiling")
    root = math.isqrt(goal)
    if flags.limit < root:
        raise ConfigurationError(
            f"max_prime {flags.limit} < sqrt(goal) = {root}; raise max_prime"
        )
    if splist.bound < root:
        raise ConfigurationError(
            f"small prime bound {splist.bound} < sqrt(goal) = {root}"
        )
    count_fn = count_fn or count_at

    x = max(start, 9)
    if x % 2 == 0:
        x += 1
    t0 = time.perf_counter()
    report = VerificationReport(
        start=x, goal=goal, status="ABORTED", failed_at=None, steps=0,
        config={"max_prime": flags.limit, "small_prime_bound": splist.bound,
                "spacing": tables.spacing, "stride": stride},
    )
    step = 0
    while x <= goal:
        c = count_fn(x, flags, tables, splist)
        if 4 * c.numerator_lb <= c.denominator_ub:
            report.records.append(
                (x, c.numerator_lb, c.denominator_ub, 0, c.exact))
            report.status = "FAILED_AT"
            report.failed_at = x
            report.steps = step + 1
            report.elapsed_s = time.perf_counter() - t0
            return report
        skip = skip_ahead(c)
        if step % stride == 0 or x + skip > goal:
            report.records.append(
                (x, c.numerator_lb, c.denominator_ub, skip, c.exact))
        if progress_every and step % progress_every == 0:
            print(f"verify: x = {x} ({step} steps)", file=sys.stderr)
        x += skip
        step += 1
    report.status = "VERIFIED"
    report.steps = step
    report.elapsed_s = time.perf_counter() - t0
    return report


# -- independent brute-force oracle -------------------------------------------

_oracle_primes: np.ndarray | None = None


def _oracle_prime_array(n: int) -> np.ndarray:
    """Plain dense sieve, kept independent of the wheel/bitset path."""
    global _oracle_primes
    if _oracle_primes is None or int(_oracle_primes[-1]) < n:
        size = max(n, 1000)
        s = np.ones(size + 1, dtype=bool)
        s[:2] = False
        for p in range(2, math.isqrt(size) + 1):
            if s[p]:
                s[p * p :: p] = False
        _oracle_primes = np.flatnonzero(s).astype(np.int64)
    return _oracle_primes


def brute_force_counts(x: int, primes: np.ndarray | None = None):
    """Exact (numerator, denominator) by direct enumeration of p <= q,
    pq <= x over sieved primes. Oracle only; no analytic bounds."""
    if x > ORACLE_BUDGET:
        raise ConfigurationError(f"oracle budget is {ORACLE_BUDGET}, got {x}")
    if x < 9:
        return 0, 0
    if primes is None:
        primes = _oracle_prime_array(max(x // 3, 3))
    r = math.isqrt(x)
    k = int(np.searchsorted(primes, r, side="right"))
    ps = primes[1:k]
    if ps.size == 0:
        return 0, 0
    t = x // ps
    lo = np.searchsorted(primes, ps, side="left")
    hi = np.searchsorted(primes, t, side="right")
    denominator = int(np.sum(hi - lo))
    m3 = (ps & 3) == 3
    p3 = primes[(primes & 3) == 3]
    lo3 = np.searchsorted(p3, ps[m3], side="left")
    hi3 = np.searchsorted(p3, t[m3], side="right")
    numerator = int(np.sum(hi3 - lo3))
    return numerator, denominator
