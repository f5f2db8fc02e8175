"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly with ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from contextlib import contextmanager

import numpy as np

from maxcurve.algebra import Poly, binom_mod_p, hasse_derivative
from maxcurve.classify import classify_rational_points, congruence_star, normalize_linearized, NormalFormError
from maxcurve.curve import artin_schreier, count_points, hermitian, ree, ree_genus_report, suzuki
from maxcurve.gf import make_field, prime_power
from maxcurve.linsys import corollary12_report, example16_report, sv_divisors
from maxcurve.semigroup import is_symmetric, lemma32_semigroups, lemma33_S
from maxcurve.zeta import (base_change_power_sums, castelnuovo, curve_lpoly, lpoly_from_counts,
                           maximal_lpoly)

@contextmanager
def _terminal(request):
    capman = request.config.pluginmanager.getplugin("capturemanager") if request else None
    if capman:
        with capman.global_and_fixture_disabled():
            yield
    else:
        yield


def _report(request, n: int, title: str, checks: dict, t0: float, limit: float):
    elapsed = time.perf_counter() - t0
    checks = dict(checks)
    checks[f"runtime < {limit:g}s"] = elapsed < limit
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    tail = f"failed: {', '.join(failed)}" if failed else f"{len(checks)} checks"
    with _terminal(request):
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({tail}; {elapsed:.1f}s)")
        sys.stdout.flush()
    assert ok, failed


def test_criterion_1_example16(request):
    t0 = time.perf_counter()
    r = example16_report()
    rational = {(tuple(c["orders"]), c["vR"]): c["points"] for c in r["classes"] if c["residue_degree"] == 1}
    checks = {
        "#X(F_81) = 118": r["count"] == 118,
        "l(10 P0) = 9": r["ell_10P0"] == 9,
        "generic orders 0..7,9": r["generic_orders"] == [0, 1, 2, 3, 4, 5, 6, 7, 9],
        "two rational types": rational == {((0, 1, 2, 3, 4, 5, 6, 7, 10), 1): 112,
                                           ((0, 1, 2, 3, 4, 5, 6, 8, 10), 2): 6},
        "deg R = 164 by formula": r["degR"] == 164,
        "deg R = 112 + 12 + 40 pointwise": r["degR_pointwise"] == 112 * 1 + 6 * 2 + 40 * 1 == 164,
        "40 non-rational D-W points": r["nonrational_dw_points"] == 40,
        "their orders 0..6,8,9": r["nonrational_dw_orders"] == [(0, 1, 2, 3, 4, 5, 6, 8, 9)],
        "they are the sigma-Fr fixed points": r["dw_equals_sigma_fr_fixed"] and r["sigma_fr_fixed_points"] == 40,
    }
    _report(request, 1, "x^2 + y^5 = 1 over F_81", checks, t0, 60)


HERMITIAN_Q = [2, 3, 4, 5]
AS_CASES = [(3, 2), (5, 2), (5, 3), (7, 2), (7, 4), (9, 5)]


def test_criterion_2_maximal_counts(request):
    t0 = time.perf_counter()
    checks = {}
    for q in HERMITIAN_Q:
        checks[f"hermitian q={q}"] = count_points(hermitian(q)) == q ** 3 + 1 == q * q + 1 + q * (q - 1) * q
    for q, m in AS_CASES:
        checks[f"y^{q}+y=x^{m}"] = count_points(artin_schreier(q, m)) == q * q + 1 + (q - 1) * (m - 1) * q
    _report(request, 2, "maximality counts", checks, t0, 10)


def test_criterion_3_lpolys(request):
    t0 = time.perf_counter()
    checks = {}
    curves = [hermitian(q) for q in HERMITIAN_Q] + [artin_schreier(q, m) for q, m in AS_CASES]
    for c in curves:
        if c.genus > 4:
            continue
        L = curve_lpoly(c)
        checks[f"{c.family} q={c.q} m={c.params['m']} g={c.genus}"] = L.coeffs == maximal_lpoly(c.q, c.genus).coeffs
    checks["largest field 5^8 reached"] = any(k.startswith("artin_schreier q=5 m=3") for k in checks)
    _report(request, 3, "L(t) = (1 + q t)^(2g) from N_1..N_g", checks, t0, 300)


def test_criterion_4_suzuki_ree(request):
    t0 = time.perf_counter()
    s0 = suzuki(0)
    N1 = count_points(s0, 1)
    L = lpoly_from_counts([N1], 2, 1)
    s1 = suzuki(1)
    ree_rep = ree_genus_report(ree(0))
    checks = {
        "N(F_2) = 5": N1 == 5,
        "L = 1 + 2t + 2t^2": L.coeffs == (1, 2, 2),
        "a1^4 + a2^4 = -8": base_change_power_sums(L, 4) == -8,
        "power sums give 25 over F_16": L.count(4) == 25 and L.base_change(4).coeffs == maximal_lpoly(4, 1).coeffs,
        "enumeration over F_16 gives 25": count_points(s0, 4) == 25,
        "s=1: genus 14": s1.genus == 14,
        "s=1: 5889 points over F_4096": count_points(s1, 4) == 4096 + 1 + 2 * 14 * 64 == 5889,
        "Ree s=0 count reported": ree_rep["count"] == 1540,
        "Ree implied genus reported and flagged": ree_rep["implied_genus"] == 15 and ree_rep["status"] == "model-incomplete",
    }
    _report(request, 4, "Suzuki and Ree", checks, t0, 120)


def test_criterion_5_semigroup_lemmas(request):
    t0 = time.perf_counter()
    checks = {}
    for q in (5, 7, 9, 11, 13):
        g = (q - 1) ** 2 // 4
        H1, H2 = lemma32_semigroups(q)
        checks[f"q={q} H1,H2 symmetric with g gaps"] = all(is_symmetric(H) and H.genus == g for H in (H1, H2))
        checks[f"q={q} nine non-gaps <= 2q+2"] = H1.count_upto(2 * q + 2) == 9 == H2.count_upto(2 * q + 2)
        js = sorted({2, (q + 1) // 2, q - 1})
        checks[f"q={q} #S(j) = g"] = all(lemma33_S(q, j).size == g for j in js)
        checks[f"q={q} H(j) semigroup iff j=2"] = [j for j in js if lemma33_S(q, j).is_semigroup] == [2]
    _report(request, 5, "semigroup combinatorics", checks, t0, 1)


def test_criterion_6_type_identities(request):
    t0 = time.perf_counter()
    checks = {}
    for q, m in [(3, 2), (5, 3), (9, 5)]:
        c = artin_schreier(q, m)
        tc = classify_rational_points(c)
        g = c.genus
        checks[f"({q},{m}) T2 = q+1"] = tc.T2 == q + 1
        checks[f"({q},{m}) T1 = m(q^2-q)"] = tc.T1 == m * (q * q - q)
        checks[f"({q},{m}) deg R = T1 + w2 T2"] = tc.extra["degR"] == tc.T1 + tc.w2 * tc.T2
        checks[f"({q},{m}) Riemann-Hurwitz"] = 2 * g - 2 == -2 * m + (m - 1) * tc.T2
        rep, data = sv_divisors(c, q + 1, search_degree=2, with_nu=False)
        nonrat = int((data[2].orders != np.array(rep.eps)).any(axis=1).sum())
        checks[f"({q},{m}) D-W set = rational set"] = rep.complete and nonrat == 0
    _report(request, 6, "Type 1 / Type 2 identities", checks, t0, 120)


def test_criterion_7_corollary12(request):
    t0 = time.perf_counter()
    checks = {}
    for name, c in [("y^5+y=x^3", artin_schreier(5, 3)), ("hermitian q=3", hermitian(3))]:
        r = corollary12_report(c)
        degs = {p["degree"] for p in r["points"]}
        checks[f"{name}: {r['sampled']} points true"] = r["holds"] and r["sampled"] >= 20
        checks[f"{name}: degrees within 1..3"] = degs <= {1, 2, 3}
    _report(request, 7, "qP + Fr(P) ~ (q+1)P0 verifier", checks, t0, 60)


def _field_axioms(F) -> bool:
    xs = F.all_elements()
    A = F.vadd(xs[:, None], xs[None, :])
    M = F.vmul(xs[:, None], xs[None, :])
    return bool((A == A.T).all() and (M == M.T).all()
                and (A[A] == A[xs[:, None, None], A[None, :, :]]).all()
                and (M[M] == M[xs[:, None, None], M[None, :, :]]).all()
                and (M[xs[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()
                and ((A == 0).sum(1) == 1).all() and ((M[1:, 1:] == 1).sum(1) == 1).all())


def test_criterion_8_property_suites(request):
    t0 = time.perf_counter()
    checks = {}
    orders = []
    for n in range(2, 257):
        try:
            orders.append(prime_power(n))
        except Exception:
            pass
    checks[f"field axioms on {len(orders)} fields <= 256"] = all(_field_axioms(make_field(p, k)) for p, k in orders)

    rng = np.random.default_rng(20260901)
    ok = True
    for _ in range(1000):
        p, k = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)][rng.integers(0, 6)]
        F = make_field(p, k)
        f = Poly(F, {(e,): int(c) for e, c in enumerate(rng.integers(0, F.order, size=rng.integers(1, 12)))}, nvars=1)
        i, j = (int(v) for v in rng.integers(0, 7, size=2))
        ok &= hasse_derivative(hasse_derivative(f, j), i) == hasse_derivative(f, i + j) * binom_mod_p(i + j, i, p)
    checks["Hasse composition, 1000 cases"] = ok

    eps_ok = True
    for c in [artin_schreier(5, 3), hermitian(3), artin_schreier(7, 4)]:
        rep, data = sv_divisors(c, search_degree=2 if c.q <= 5 else 1, with_nu=False)
        for pdata in data.values():
            eps_ok &= bool((pdata.orders >= np.array(rep.eps)).all())
    checks["eps_i <= j_i(P) at every computed point"] = eps_ok

    checks["Castelnuovo q=5, n=2: g <= 4"] = castelnuovo(5, 2)["two_g_bound"] // 2 == 4
    checks["Castelnuovo q=3, n=2: g <= 1"] = castelnuovo(3, 2)["two_g_bound"] // 2 == 1

    F25 = make_field(5, 2)
    checks["congruence true on y^5+y"] = congruence_star([0, 1, 0, 0, 0, 1], 2, 5, F25)
    checks["congruence false on y"] = not congruence_star([0, 1], 1, 5, F25)
    checks["congruence false on y^5+xi y"] = not congruence_star([0, F25.generator, 0, 0, 0, 1], 2, 5, F25)

    witnesses = 0
    ident = True
    for a1 in range(1, 25):
        for aq in range(1, 25):
            try:
                w = normalize_linearized(a1, aq, 3, 5)
            except NormalFormError:
                continue
            witnesses += 1
            ident &= w.identity_verified
    checks[f"normal form identity on {witnesses} inputs"] = ident and witnesses > 0
    _report(request, 8, "property suites", checks, t0, 300)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn(None)
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
