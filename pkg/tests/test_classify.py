import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxcurve.algebra import Poly, peval, poly_mod_reduce, ppow, ptrim
from maxcurve.classify import (ClassificationError, NormalFormError, check_star_star, classify_rational_points,
                               congruence_star, lemma32_castelnuovo, lemma32_report, lemma33_report,
                               normalize_linearized, theorem31_pipeline, type_sequences, w2_formula)
from maxcurve.curve import artin_schreier, hermitian, suzuki
from maxcurve.gf import make_field

AS_CASES = [(3, 2), (3, 4), (5, 2), (5, 3), (5, 6), (7, 2), (7, 4), (7, 8), (9, 2), (9, 5), (9, 10)]


def test_star_star_examples():
    r = check_star_star(artin_schreier(5, 3))
    assert (r["n"], r["m_candidates"], r["holds"]) == (2, [3], True)
    r = check_star_star(hermitian(3))
    assert (r["n"], r["m_candidates"], r["holds"]) == (1, [4], True)
    r = check_star_star(suzuki(0, 4))
    assert r["n"] == 3 and not r["holds"]
    assert r["large_q_branch"]["n_equals_q_minus_g"] and r["large_q_branch"]["m1_n_ge_q_plus_2"]


@pytest.mark.parametrize("q,m", AS_CASES)
def test_type_counts(q, m):
    tc = classify_rational_points(artin_schreier(q, m))
    assert tc.T2 == q + 1 and tc.T1 == m * (q * q - q)
    assert tc.w2 == w2_formula(tc.n, m) == tc.w2_formula
    assert all(v["holds"] for v in tc.identities.values())


def test_type_examples():
    tc = classify_rational_points(artin_schreier(5, 3))
    assert (tc.T1, tc.T2, tc.w2) == (60, 6, 2)
    assert tc.extra["degR"] == 72 == tc.T1 + tc.w2 * tc.T2
    tc = classify_rational_points(artin_schreier(3, 2))
    assert (tc.T1, tc.T2, tc.T1 + tc.T2) == (12, 4, 16)
    tc = classify_rational_points(artin_schreier(9, 5))
    assert (tc.T1, tc.T2, tc.T1 + tc.T2) == (360, 10, 370)


def test_no_extra_weierstrass_points_over_quadratic_extension():
    tc = classify_rational_points(artin_schreier(5, 3), scan_degree=2)
    assert tc.identities["no_nonrational_dw_points"]["holds"]


def test_type_sequences():
    assert type_sequences(5, 3) == ((0, 1, 2, 6), (0, 1, 3, 6))
    assert type_sequences(9, 5) == ((0, 1, 2, 10), (0, 1, 5, 10))
    assert w2_formula(2, 3) == 2 and w2_formula(2, 5) == 4 and w2_formula(2, 2) == 1


def test_classification_rejects_other_families():
    with pytest.raises(ValueError):
        classify_rational_points(suzuki(0, 4))


def test_order_mismatch_is_a_structured_error(monkeypatch):
    import maxcurve.classify as cl
    monkeypatch.setattr(cl, "type_sequences", lambda q, m: ((0, 1, 2, 7), (0, 1, 3, 6)))
    with pytest.raises(ClassificationError) as info:
        cl.classify_rational_points(artin_schreier(5, 3))
    assert info.value.diff["expected"] == (0, 1, 2, 7)


def _congruence_oracle(F, f, n, q):
    """f^n = f^{nq} mod (y^Q - y) iff the values agree on every element of F_Q."""
    return all(F.pow(peval(F, f, a), n) == F.pow(peval(F, f, a), n * q) for a in range(F.order))


def test_congruence_examples():
    F = make_field(5, 2)
    assert congruence_star([0, 1, 0, 0, 0, 1], 2, 5, F)
    # y^5 + y + 1 still takes values Tr(a) + 1 in F_5, so the congruence holds
    assert congruence_star([1, 1, 0, 0, 0, 1], 2, 5, F)
    assert not congruence_star([0, F.generator, 0, 0, 0, 1], 2, 5, F)
    for q in (2, 3, 4, 5):
        assert not congruence_star([0, 1], 1, q)
    f = Poly(F, {(1,): 1, (5,): 1}, nvars=1)
    assert congruence_star(f, 2, 5, F)


@settings(max_examples=60)
@given(st.sampled_from([(2, 2), (3, 2), (5, 2)]), st.data())
def test_congruence_matches_pointwise_oracle(pk, data):
    F = make_field(*pk)
    q = F.p
    f = data.draw(st.lists(st.integers(0, F.order - 1), min_size=1, max_size=F.order + 2))
    n = data.draw(st.integers(1, q + 1))
    got = congruence_star(f, n, q, F)
    assert got == _congruence_oracle(F, f, n, q)
    Q = F.order
    lhs = poly_mod_reduce(F, ppow(F, f, n), Q)
    rhs = poly_mod_reduce(F, ppow(F, f, n * q), Q)
    assert got == (lhs == rhs)


def test_normal_form_standard_curve():
    for q, m in [(3, 2), (5, 3), (5, 2), (7, 4)]:
        w = normalize_linearized(1, 1, m, q)
        assert w.r == 0 and w.eps == 1 and w.x_scale == 1 and w.identity_verified


def test_normal_form_prescribed_line():
    F = make_field(5, 2)
    xi = F.generator
    a = F.exp(3)  # f = xi^3 (y^5 + y) has image xi^3 F_5
    w = normalize_linearized(a, a, 3, 5)
    assert w.r == 1 and w.identity_verified
    assert w.x_scale == F.exp(-1) and w.xi == xi


def test_normal_form_errors():
    with pytest.raises(NormalFormError, match="separable"):
        normalize_linearized(0, 1, 3, 5)
    with pytest.raises(NormalFormError, match="divide"):
        normalize_linearized(1, 1, 4, 5)
    with pytest.raises(NormalFormError):
        normalize_linearized(1, 2, 3, 5)


@pytest.mark.parametrize("q,m", [(3, 2), (5, 3), (5, 2)])
def test_normal_form_identity_for_every_valid_input(q, m):
    """Whenever a witness is produced the substitution identity holds symbolically."""
    F = make_field(*{3: (3, 2), 5: (5, 2)}[q])
    ok = 0
    for a1 in range(1, F.order):
        for aq in range(1, F.order):
            try:
                w = normalize_linearized(a1, aq, m, q)
            except NormalFormError:
                continue
            ok += 1
            assert w.identity_verified
            # trace condition: Tr(eps a) = xi^(-rm) f(a) for all a
            scale = F.exp(-w.r * m)
            for x in range(F.order):
                tr = F.add(F.mul(w.eps, x), F.pow(F.mul(w.eps, x), q))
                fx = F.add(F.mul(a1, x), F.mul(aq, F.pow(x, q)))
                assert tr == F.mul(scale, fx)
    assert ok > 0


def test_castelnuovo_branches():
    r = lemma32_castelnuovo(5)
    rows = {row["r"]: row for row in r["rows"]}
    assert rows[8]["bound"] == 6 and not rows[8]["holds"]
    assert rows[9]["bound"] == 4 and not rows[9]["holds"]
    assert rows[7]["bound"] == 8 and rows[7]["holds"]
    for q in (5, 7, 9, 11, 13):
        r = lemma32_castelnuovo(q)
        assert r["r_equals_7_only"]
        b = r["r8_branch"]
        assert b["contradiction"] and b["matches_direct"]


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_lemma_reports(q):
    l32 = lemma32_report(q)
    for h in ("H1", "H2"):
        assert l32[h]["symmetric"] and l32[h]["genus_ok"] and l32[h]["ell_ok"]
    assert {l32["H1"]["m1"], l32["H2"]["m1"]} == {q - 1, (q + 1) // 2}
    l33 = lemma33_report(q)
    assert l33["survivors"] == sorted({2, (q + 1) // 2, q - 1})
    assert l33["S_sizes_equal_g"] and l33["semigroup_j"] == [2]


def test_pipeline_q3_degenerate():
    r = theorem31_pipeline(3)
    assert r["branch"].startswith("degenerate") and r["all_hold"] and r["genus"] == 1


def test_pipeline_q5():
    r = theorem31_pipeline(5)
    assert r["all_hold"] and r["count"] == 66 and r["genus"] == 4
    assert r["star_star"]["m1"] == 3 and r["star_star"]["n"] == 2
    assert r["checks"]["degR_minus_count"]["computed"] == 6


def test_pipeline_q7():
    r = theorem31_pipeline(7)
    assert r["all_hold"] and r["genus"] == 9 and r["count"] == 49 + 1 + 2 * 9 * 7 == 176
    assert r["checks"]["degR_minus_count"]["computed"] == 8 * 4 // 2


@pytest.mark.parametrize("q", [11, 13])
def test_pipeline_combinatorics_only(q):
    r = theorem31_pipeline(q, point_checks=False)
    assert r["all_hold"] and "count" not in r


def test_pipeline_rejects_even_q():
    with pytest.raises(ValueError):
        theorem31_pipeline(4)
