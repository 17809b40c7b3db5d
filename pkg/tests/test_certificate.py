import math
from fractions import Fraction

import numpy as np
import pytest

import semiprime_bias as spb
from semiprime_bias import certificate as cert
from semiprime_bias.errors import ConfigurationError, ValidityRangeError
from semiprime_bias.rounding import interval_sum, np_dn, np_log_dn, np_log_up, np_up
from semiprime_bias.tables import extract_primes


def test_chi_character():
    assert cert.chi_minus4(2) == 0
    assert cert.chi_minus4(5) == 1
    assert cert.chi_minus4(3) == cert.chi_minus4(7) == -1


def test_moment_hand_value_below_10():
    """chi(3)/3 + chi(5)/5 + chi(7)/7 = -29/105, by hand."""
    c1 = cert._class_power_sums(np.array([5], dtype=np.int64), 0)
    c3 = cert._class_power_sums(np.array([3, 7], dtype=np.int64), 0)
    m0 = c1[0] - c3[0]
    assert m0.contains(float(Fraction(-29, 105)))
    assert m0.width < 1e-14


def test_moments_identity_and_sign(moments_1e7):
    for i in range(8):
        diff = moments_1e7.class1[i] - moments_1e7.class3[i]
        assert diff.lo <= moments_1e7.moments[i].mid <= diff.hi
    assert moments_1e7.moments[0].hi < 0  # partial sum toward L is negative


def test_moments_require_1e6(wheel):
    small = spb.sieve_primes(10**5, wheel)
    with pytest.raises(ConfigurationError):
        spb.compute_char_moments(small)


def test_martin_coefficients_match_display(moments_1e7):
    rows = cert.martin_display_audit(moments_1e7)
    assert all(row["ok"] for row in rows)
    first = spb.martin_coefficients(moments_1e7)[0]
    assert first.width < 0.001
    assert first.hi <= -0.545  # displayed constant rounds toward zero


def test_lchi_bracket_nesting_chain(flags_1e7, tables_1e7):
    brackets = [spb.lchi_bracket(flags_1e7, tables_1e7, x0)
                for x0 in (10**6, 3 * 10**6, 10**7)]
    for outer, inner in zip(brackets, brackets[1:]):
        assert outer.encloses(inner)
    for b in brackets:
        assert b.contains(-0.334)
    assert brackets[0].contains(-0.3349791)  # the partial sum itself


def test_lchi_bracket_guards(flags_1e7, tables_1e7):
    with pytest.raises(ConfigurationError):
        spb.lchi_bracket(flags_1e7, tables_1e7, 10**5)
    with pytest.raises(ConfigurationError):
        spb.lchi_bracket(flags_1e7, tables_1e7, 10**8)


def _direct_sums_at(flags, x):
    """Brute-force values of the four component sums over p <= sqrt(x)."""
    rt = math.isqrt(x)
    p = extract_primes(flags, 3, rt)
    pf = p.astype(np.float64)
    p3 = p[(p & 3) == 3].astype(np.float64)
    l3dn, l3up = np_log_dn(p3), np_log_up(p3)
    lx_dn = np_log_dn(np_dn(np.float64(x) / np_up(pf)))
    lx_up = np_log_up(np_up(np.float64(x) / np_dn(pf)))
    lpdn, lpup = np_log_dn(pf), np_log_up(pf)
    sums = {
        "p_logp": interval_sum(np_dn(p3 / l3up), np_up(p3 / l3dn)),
        "p_log2p": interval_sum(np_dn(p3 / np_up(l3up * l3up)),
                                np_up(p3 / np_dn(l3dn * l3dn))),
        "inv2": interval_sum(
            np_dn(1.0 / np_up(pf * np_up(lx_up * lx_up))),
            np_up(1.0 / np_dn(pf * np_dn(lx_dn * lx_dn)))),
        "inv3": interval_sum(
            np_dn(1.0 / np_up(np_up(pf * np_up(lx_up * lx_up)) * lx_up)),
            np_up(1.0 / np_dn(np_dn(pf * np_dn(lx_dn * lx_dn)) * lx_dn))),
    }
    t_dn = np_dn(lpdn / np_up(pf * lx_up))
    t_up = np_up(lpup / np_dn(pf * lx_dn))
    is1 = (p & 3) == 1
    s3 = interval_sum(t_dn[~is1], t_up[~is1])
    sums["chi"] = interval_sum(t_dn[is1], t_up[is1]) - s3
    combined = interval_sum(
        np_dn(np_dn(0.5 * p3 / l3up)
              + np_dn(np_dn(0.627 * p3) / np_up(l3up * l3up))),
        np_up(np_up(0.5 * p3 / l3dn)
              + np_up(np_up(0.627 * p3) / np_dn(l3dn * l3dn))))
    sums["combined"] = combined
    return sums


def test_component_bounds_over_cover_at_1e12(flags_1e7, moments_1e7, tables_1e7):
    x = 10**12
    direct = _direct_sums_at(flags_1e7, x)
    assert cert.bound_sum_p_over_logp(x).lo >= direct["p_logp"].hi
    assert cert.bound_sum_p_over_log2p(x).lo >= direct["p_log2p"].hi
    assert cert.bound_sum_p_combined(x).lo >= direct["combined"].hi
    assert cert.bound_sum_inv_p_log2(x).lo >= direct["inv2"].hi
    assert cert.bound_sum_inv_p_log3(x).lo >= direct["inv3"].hi
    assert cert.bound_char_logp_sum(x, moments_1e7, tables_1e7).lo \
        >= direct["chi"].hi


def test_component_bounds_validity_ranges():
    with pytest.raises(ValidityRangeError):
        cert.bound_sum_p_over_logp(10**11)
    with pytest.raises(ValidityRangeError):
        cert.bound_sum_inv_p_log2(10**11)
    with pytest.raises(ValidityRangeError):
        cert.bound_sum_inv_p_log3(10**9)
    # the log3 bound is proven from 1e10 already
    assert cert.bound_sum_inv_p_log3(10**10).hi > 0


def test_inv_log3_positive_coefficient_terms_positive():
    x = 10**12
    L = spb.RInterval.from_int(x).log()
    ll3 = (spb.RInterval.from_int(x) / 3).loglog()
    for term in (ll3 / L.powi(3),
                 spb.RInterval.from_decimal("12.15") * ll3 / L.powi(4),
                 spb.RInterval.from_decimal("2.34") / L.powi(3),
                 spb.RInterval.from_decimal("125.12") / L.powi(4),
                 spb.RInterval.from_decimal("36.33") / L.powi(5)):
        assert term.lo > 0


def test_display_form_dominates_assembly(moments_1e7, tables_1e7):
    for x in (10**12, 10**13, 10**14):
        assembled = cert.bound_char_logp_sum(x, moments_1e7, tables_1e7)
        display = cert.char_logp_sum_display(x)
        assert display.lo >= assembled.hi


def test_class_diff_derived_from_tables(tables_1e7):
    assert cert.class_diff_at_1e6(tables_1e7) == 147


def test_small_constants_audit_all_safe(flags_1e7, tables_1e7):
    report = spb.small_constants_audit(flags_1e7, tables_1e7)
    assert report.ok
    names = {e.name for e in report.entries}
    assert "0.623_sum_p_log2p" in names
    assert "collected_w_constant" in names
    import json
    payload = json.loads(report.to_json())
    assert payload["ok"] is True


def test_w_lower_bound_positivity():
    w = spb.w_lower_bound(11 * 10**12)
    assert w.lo > 0
    spb.w_lower_bound(10**12)  # evaluates; no positivity claim below the threshold
    assert spb.w_lower_bound(10**20).lo > 0
    with pytest.raises(ValidityRangeError):
        spb.w_lower_bound(10**11)


def test_w_dominance_decomposition():
    for x in (10**12, 11 * 10**12, 10**16):
        terms = cert.w_terms(x)
        total = spb.w_lower_bound(x)
        lo_sum = math.fsum(t.lo for t in terms.values())
        hi_sum = math.fsum(t.hi for t in terms.values())
        assert total.lo <= lo_sum and hi_sum <= total.hi + abs(total.hi) * 1e-12


def test_certify_tail_defaults():
    res = spb.certify_tail()
    assert res.certified
    assert res.asymptotic["certified"]
    assert res.failed_at is None


def test_certify_tail_subrange():
    res = spb.certify_tail(2e13, 1e14)
    assert res.certified


def test_certify_tail_grid_refinement_invariance():
    a = spb.certify_tail(1.1e13, 1e100, grid_points=200)
    b = spb.certify_tail(1.1e13, 1e100, grid_points=400)
    assert a.certified == b.certified is True


def test_certify_tail_reports_failure_below_threshold():
    res = spb.certify_tail(1e12, 1e14, grid_points=50)
    assert not res.certified
    assert res.failed_at is not None
    assert res.failed_at[0] < 1.1e13


def test_certify_tail_guards():
    with pytest.raises(ValidityRangeError):
        spb.certify_tail(1e11, 1e14)
    with pytest.raises(ConfigurationError):
        spb.certify_tail(1e13, 1e12)


def test_cert_result_serializes_decimal_strings():
    import json
    res = spb.certify_tail(2e13, 1e15, grid_points=50)
    payload = json.loads(res.to_json())
    assert isinstance(payload["x_min"], str)
    assert payload["certified"] is True
