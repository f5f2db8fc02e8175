from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxcurve.algebra import (Poly, PrecisionError, Series, binom_mod_p, hasse_derivative, padd, pdivmod,
                              peval, pgcd, phasse, pivot_columns, pivot_orders, pmul, poly_mod_reduce,
                              ppow, ptrim, series_det_valuation)
from maxcurve.gf import make_field

FIELDS = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)]


def upoly(F, coeffs):
    return Poly(F, {(e,): c for e, c in enumerate(coeffs)}, nvars=1)


def test_hasse_examples():
    F3, F2 = make_field(3, 1), make_field(2, 1)
    assert hasse_derivative(upoly(F3, [0] * 5 + [1]), 2) == upoly(F3, [0, 0, 0, 1])
    assert hasse_derivative(upoly(F2, [0, 0, 1]), 1).is_zero()
    f = Poly(F3, {(2, 1): 1, (0, 3): 2})
    assert hasse_derivative(f, 0) == f


@settings(max_examples=1000)
@given(st.sampled_from(FIELDS), st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=12),
       st.integers(0, 6), st.integers(0, 6))
def test_hasse_composition(pk, raw, i, j):
    F = make_field(*pk)
    f = upoly(F, [r % F.order for r in raw])
    lhs = hasse_derivative(hasse_derivative(f, j), i)
    rhs = hasse_derivative(f, i + j) * binom_mod_p(i + j, i, F.p)
    assert lhs == rhs


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([2, 3, 5, 7, 11]))
def test_lucas_binomial(n, k, p):
    expected = comb(n, k) % p if k <= n else 0
    assert binom_mod_p(n, k, p) == expected


def test_dense_and_sparse_hasse_agree():
    F = make_field(5, 2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.integers(0, 25, size=10).tolist()
        i = int(rng.integers(0, 8))
        sparse = hasse_derivative(upoly(F, a), i)
        assert ptrim(phasse(F, a, i)) == ptrim([sparse.terms.get((e,), 0) for e in range(10)])


@given(st.sampled_from(FIELDS + [(5, 2)]), st.data())
def test_divmod_and_gcd(pk, data):
    F = make_field(*pk)
    el = st.integers(0, F.order - 1)
    a = data.draw(st.lists(el, min_size=1, max_size=8))
    b = ptrim(data.draw(st.lists(el, min_size=1, max_size=5)))
    if not b:
        return
    q, r = pdivmod(F, a, b)
    assert ptrim(padd(F, pmul(F, q, b), r)) == ptrim(a)
    assert len(ptrim(r)) < len(b)
    g = pgcd(F, a, b)
    if ptrim(a):
        assert not ptrim(pdivmod(F, a, g)[1])
    assert not ptrim(pdivmod(F, b, g)[1])


@given(st.sampled_from([(2, 2), (3, 2), (5, 1)]), st.data())
def test_mod_reduce_matches_values(pk, data):
    """Remainder mod y^Q - y is the unique function with the same values on F_Q."""
    F = make_field(*pk)
    Q = F.order
    f = data.draw(st.lists(st.integers(0, Q - 1), min_size=1, max_size=3 * Q))
    r = poly_mod_reduce(F, f, Q)
    assert len(r) <= Q
    assert all(peval(F, f, a) == peval(F, r, a) for a in range(Q))
    modulus = [0, F.neg(1)] + [0] * (Q - 2) + [1]
    assert ptrim(pdivmod(F, f, modulus)[1]) == r


def test_ppow_with_modulus():
    F = make_field(3, 2)
    m = [0, F.neg(1)] + [0] * 7 + [1]
    f = [1, 2, 0, 5]
    assert ptrim(ppow(F, f, 20, m)) == poly_mod_reduce(F, ppow(F, f, 20), 9)


def _series_from_poly(F, coeffs, N):
    arr = np.zeros(N, dtype=np.int64)
    arr[:min(N, len(coeffs))] = coeffs[:N]
    return Series(F, arr)


@given(st.sampled_from([(2, 3), (3, 2), (5, 1)]), st.data())
def test_series_product_matches_polynomial_product(pk, data):
    F = make_field(*pk)
    el = st.integers(0, F.order - 1)
    a = data.draw(st.lists(el, min_size=1, max_size=10))
    b = data.draw(st.lists(el, min_size=1, max_size=10))
    N = data.draw(st.integers(1, 12))
    prod = pmul(F, a, b)
    got = (_series_from_poly(F, a, N) * _series_from_poly(F, b, N)).coeffs
    want = np.zeros(N, dtype=np.int64)
    want[:min(N, len(prod))] = prod[:N]
    assert (got == want).all()


def test_series_inverse_and_valuation():
    F = make_field(5, 2)
    s = Series(F, np.array([3, 1, 7, 0, 2, 9], dtype=np.int64))
    one = (s * s.inverse()).coeffs
    assert one[0] == 1 and not one[1:].any()
    t = Series.variable(F, 6)
    assert (t * t).shift(1).valuations() == 3
    with pytest.raises(PrecisionError):
        Series(F, np.array([0, 1])).inverse()


def test_pivot_order_examples():
    F = make_field(5, 1)
    N = 5
    t = Series.variable(F, N)
    one = Series.constant(F, 1, N)
    assert tuple(pivot_orders([one, t, t * t])) == (0, 1, 2)
    assert tuple(pivot_orders([one, t, t * (one + t)])) == (0, 1, 2)
    with pytest.raises(PrecisionError):
        pivot_orders([one, t], max_order=8)


@given(st.sampled_from([(2, 2), (3, 1), (5, 2)]), st.integers(0, 2 ** 32 - 1))
def test_pivots_invariant_under_row_mixing(pk, seed):
    F = make_field(*pk)
    rng = np.random.default_rng(seed)
    R, N = 4, 10
    M = rng.integers(0, F.order, size=(R, N))
    M[:, :int(rng.integers(0, 4))] = 0
    while True:
        G = rng.integers(0, F.order, size=(R, R))
        if len(pivot_orders(G, field=F)) == R:
            break
    mixed = np.zeros_like(M)
    for i in range(R):
        for j in range(R):
            mixed[i] = F.vadd(mixed[i], F.vmul(G[i, j], M[j]))
    assert tuple(pivot_orders(M, field=F)) == tuple(pivot_orders(mixed, field=F))


def test_pivot_columns_batched_matches_single():
    F = make_field(3, 2)
    rng = np.random.default_rng(7)
    M = rng.integers(0, 9, size=(6, 3, 8))
    M[2] = 0
    piv = pivot_columns(F, M)
    for b in range(6):
        single = pivot_orders(M[b], field=F)
        assert tuple(v for v in piv[b] if v >= 0) == tuple(single)
    assert (piv[2] == -1).all()


def test_series_det_valuation_diagonal():
    F = make_field(5, 1)
    mat = np.zeros((3, 3, 8), dtype=np.int64)
    mat[0, 0, 0] = 1
    mat[1, 1, 2] = 3
    mat[2, 2, 1] = 4
    mat[0, 2, 0] = 2
    assert series_det_valuation(F, mat) == 3
    with pytest.raises(PrecisionError):
        series_det_valuation(F, np.zeros((2, 2, 4), dtype=np.int64))


def test_poly_evaluate_and_partials():
    F = make_field(5, 2)
    f = Poly(F, {(0, 5): 1, (0, 1): 1, (3, 0): F.neg(1)})
    assert f.partial(1) == Poly(F, {(0, 0): 1})
    assert f.degree() == 5 and f.degree(0) == 3
    xs = np.arange(25)
    ys = np.arange(25)[::-1].copy()
    vals = f.vevaluate([xs, ys])
    assert vals.tolist() == [f.evaluate((int(a), int(b))) for a, b in zip(xs, ys)]
