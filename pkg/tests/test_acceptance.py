"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line with its runtime. Run with `pytest tests/test_acceptance.py -v -s`.

The full-scale run (criterion 4) sieves to 10^9 and walks to 1.1e13;
it is cheap enough here (seconds) to run unconditionally.
"""

import math
import resource
import time

import numpy as np
import pytest

import semiprime_bias as spb
from semiprime_bias import certificate as cert
from semiprime_bias.rounding import interval_sum, np_dn, np_log_dn, np_log_up, np_up
from semiprime_bias.tables import extract_primes


def _report(num, ok, elapsed, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"\ncriterion {num:2d}: {status} ({elapsed:.2f}s) {detail}")
    assert ok, f"criterion {num} failed: {detail}"


@pytest.fixture(scope="module")
def flags_1e9(wheel):
    return spb.sieve_primes(10**9, wheel)


@pytest.fixture(scope="module")
def tables_1e9(flags_1e9):
    return spb.build_checkpoints(flags_1e9)


def test_criterion_1_class_counts(wheel):
    t0 = time.perf_counter()
    flags = spb.sieve_primes(10**6, wheel)
    tab = spb.build_checkpoints(flags)
    total = spb.count_primes_upto(tab, flags, 10**6)
    pi3 = spb.count_primes_3mod4_upto(tab, flags, 10**6)
    odd = total - 1
    pi1 = odd - pi3
    elapsed = time.perf_counter() - t0
    ok = (odd, pi3, pi1) == (78497, 39322, 39175) and elapsed < 5.0
    _report(1, ok, elapsed,
            f"odd={odd} pi3={pi3} pi1={pi1} (runtime cap 5s)")


def test_criterion_2_oracle_equivalence(flags_1e7, tables_1e7, splist_1e7,
                                        oracle_primes, wheel):
    t0 = time.perf_counter()
    ok = True
    detail = ""
    for x in range(9, 10**5 + 1, 2):
        n, d = spb.brute_force_counts(x, oracle_primes)
        c = spb.count_at(x, flags_1e7, tables_1e7, splist_1e7)
        if not c.exact or (c.numerator_lb, c.denominator_ub) != (n, d):
            ok, detail = False, f"mismatch at x={x}"
            break
    rng = np.random.default_rng(2024)
    xs = (2 * rng.integers(5, 5 * 10**6, 1000) + 1) if ok else []
    for x in np.asarray(xs).tolist():
        n, d = spb.brute_force_counts(x, oracle_primes)
        c = spb.count_at(x, flags_1e7, tables_1e7, splist_1e7)
        if (c.numerator_lb, c.denominator_ub) != (n, d):
            ok, detail = False, f"mismatch at random x={x}"
            break
    if ok:
        low = spb.sieve_primes(10**4, wheel)
        lt = spb.build_checkpoints(low)
        ls = spb.build_small_prime_list(low, 10**4)
        for x in np.asarray(xs).tolist():
            n, d = spb.brute_force_counts(x, oracle_primes)
            c = spb.count_at(x, low, lt, ls)
            if not (c.numerator_lb <= n and c.denominator_ub >= d):
                ok, detail = False, f"bounded path fails sandwich at x={x}"
                break
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300.0
    _report(2, ok, elapsed, detail or "exact equality + bounded sandwich "
            "(runtime cap 300s)")


def test_criterion_3_desk_scale(flags_1e7, tables_1e7, splist_1e7):
    t0 = time.perf_counter()
    rep = spb.verify_range(9, 10**10, flags_1e7, tables_1e7, splist_1e7)
    elapsed = time.perf_counter() - t0
    margins = all(4 * n > d for (_, n, d, _, _) in rep.records)
    ok = rep.verified and margins and elapsed < 600.0
    _report(3, ok, elapsed,
            f"status={rep.status} steps={rep.steps} (runtime cap 600s)")


def test_criterion_4_full_scale(flags_1e9, tables_1e9):
    t0 = time.perf_counter()
    splist = spb.build_small_prime_list(flags_1e9, 10**7)
    rep = spb.verify_range(9, 11 * 10**12, flags_1e9, tables_1e9, splist)
    elapsed = time.perf_counter() - t0
    rss_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1e6
    margins = all(4 * n > d for (_, n, d, _, _) in rep.records)
    ok = rep.verified and margins and rss_gb < 8.0 and elapsed < 4 * 3600
    _report(4, ok, elapsed,
            f"status={rep.status} steps={rep.steps} rss={rss_gb:.2f}GB "
            "(caps: 4h, 8GB)")


def test_criterion_5_small_range_scan(flags_1e6, tables_1e6):
    t0 = time.perf_counter()
    rep = spb.scan_3mod4_bounds(flags_1e6, tables_1e6)
    elapsed = time.perf_counter() - t0
    ok = rep.ok and elapsed < 60.0
    _report(5, ok, elapsed,
            f"checked={rep.checked} violations={len(rep.violations)} "
            "(runtime cap 60s)")


def test_criterion_6_component_over_coverage(flags_1e7, moments_1e7,
                                             tables_1e7):
    t0 = time.perf_counter()
    ok = True
    detail = ""
    for x in (10**12, 10**13, 10**14):
        rt = math.isqrt(x)
        p = extract_primes(flags_1e7, 3, rt)
        pf = p.astype(np.float64)
        p3 = p[(p & 3) == 3].astype(np.float64)
        l3dn, l3up = np_log_dn(p3), np_log_up(p3)
        lx_dn = np_log_dn(np_dn(np.float64(x) / np_up(pf)))
        lx_up = np_log_up(np_up(np.float64(x) / np_dn(pf)))
        lpdn, lpup = np_log_dn(pf), np_log_up(pf)
        is1 = (p & 3) == 1
        t_dn = np_dn(lpdn / np_up(pf * lx_up))
        t_up = np_up(lpup / np_dn(pf * lx_dn))
        direct = {
            "p_logp": interval_sum(np_dn(p3 / l3up), np_up(p3 / l3dn)).hi,
            "p_log2p": interval_sum(np_dn(p3 / np_up(l3up * l3up)),
                                    np_up(p3 / np_dn(l3dn * l3dn))).hi,
            "inv2": interval_sum(
                np_dn(1.0 / np_up(pf * np_up(lx_up * lx_up))),
                np_up(1.0 / np_dn(pf * np_dn(lx_dn * lx_dn)))).hi,
            "inv3": interval_sum(
                np_dn(1.0 / np_up(np_up(pf * np_up(lx_up * lx_up)) * lx_up)),
                np_up(1.0 / np_dn(np_dn(pf * np_dn(lx_dn * lx_dn)) * lx_dn))).hi,
            "chi": (interval_sum(t_dn[is1], t_up[is1])
                    - interval_sum(t_dn[~is1], t_up[~is1])).hi,
        }
        checks = {
            "p_logp": cert.bound_sum_p_over_logp(x).lo,
            "p_log2p": cert.bound_sum_p_over_log2p(x).lo,
            "inv2": cert.bound_sum_inv_p_log2(x).lo,
            "inv3": cert.bound_sum_inv_p_log3(x).lo,
            "chi": cert.bound_char_logp_sum(x, moments_1e7, tables_1e7).lo,
        }
        for name, bound_lo in checks.items():
            if not bound_lo >= direct[name]:
                ok, detail = False, f"{name} under-covers at x={x:g}"
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 120.0
    _report(6, ok, elapsed, detail or "all component bounds over-cover "
            "(runtime cap 120s)")


def test_criterion_7_martin_coefficients(moments_1e7):
    t0 = time.perf_counter()
    rows = cert.martin_display_audit(moments_1e7)
    ok = all(row["ok"] for row in rows)
    worst = max(row["rel_error"] for row in rows)
    _report(7, ok, time.perf_counter() - t0,
            f"six displayed constants, worst rel err {worst:.2e} "
            "(tolerance 0.5%)")


def test_criterion_8_lchi_bracket(flags_1e9, tables_1e9):
    t0 = time.perf_counter()
    bracket = spb.lchi_bracket(flags_1e9, tables_1e9, 10**9)
    coarse = spb.lchi_bracket(flags_1e9, tables_1e9, 10**6)
    ok = (bracket.contains(-0.334) and bracket.width < 0.01
          and coarse.encloses(bracket))
    _report(8, ok, time.perf_counter() - t0,
            f"bracket=[{bracket.lo:.6f},{bracket.hi:.6f}] "
            f"width={bracket.width:.5f} (< 0.01), nested in the 1e6 bracket")


def test_criterion_9_tail_certificate():
    t0 = time.perf_counter()
    w = spb.w_lower_bound(11 * 10**12)
    res_a = spb.certify_tail(1.1e13, 1e100, grid_points=200)
    res_b = spb.certify_tail(1.1e13, 1e100, grid_points=400)
    ok = (w.lo > 0 and res_a.certified and res_b.certified
          and res_a.asymptotic["certified"])
    _report(9, ok, time.perf_counter() - t0,
            f"w_lb(1.1e13).lo={w.lo:.4g} certified at two grid densities")


def test_criterion_10_skip_soundness(flags_1e7, tables_1e7, splist_1e7,
                                     oracle_primes):
    from test_verifier import _window_semiprimes

    t0 = time.perf_counter()
    rng = np.random.default_rng(9999)
    xs = 2 * rng.integers(5, 5 * 10**6, 1000) + 1
    ok = True
    detail = ""
    for x in xs.tolist():
        c = spb.count_at(x, flags_1e7, tables_1e7, splist_1e7)
        skip = spb.skip_ahead(c)
        n0, d0 = spb.brute_force_counts(x, oracle_primes)
        new3, newall = _window_semiprimes(x, skip, oracle_primes)
        ys = np.arange(x + 2, x + skip + 1, 2)
        n = n0 + np.searchsorted(new3, ys, side="right")
        d = d0 + np.searchsorted(newall, ys, side="right")
        if not np.all(4 * n > d):
            ok, detail = False, f"unsound skip at x={x}"
            break
    _report(10, ok, time.perf_counter() - t0,
            detail or "1000 sampled windows, zero violations")
