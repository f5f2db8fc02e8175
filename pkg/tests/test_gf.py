import numpy as np
import pytest
from hypothesis import given, strategies as st

from maxcurve.gf import (FieldError, embedding, is_irreducible_mod_p, make_field, norm, prime_power,
                         primitive_element, subfield_indices, trace)

def _small_fields():
    out = []
    for n in range(2, 257):
        try:
            p, k = prime_power(n)
        except Exception:
            continue
        out.append((p, k))
    return out


SMALL = _small_fields()


def _ref_mul(F, a, b):
    """Schoolbook product of digit vectors reduced by the modulus."""
    p, k, mod = F.p, F.k, F.modulus
    da = [(a // p ** i) % p for i in range(k)]
    db = [(b // p ** i) % p for i in range(k)]
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(2 * k - 2, k - 1, -1):
        c = prod[top]
        if c:
            for i in range(k + 1):
                prod[top - k + i] = (prod[top - k + i] - c * mod[i]) % p
    return sum(prod[i] * p ** i for i in range(k))


def test_small_field_list_complete():
    assert len(SMALL) == 54 + 16  # primes and proper prime powers up to 256
    assert (2, 8) in SMALL and (3, 5) in SMALL


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms_exhaustive(p, k):
    F = make_field(p, k)
    n = F.order
    xs = F.all_elements()
    A = F.vadd(xs[:, None], xs[None, :])
    M = F.vmul(xs[:, None], xs[None, :])
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[A] == A[xs[:, None, None], A[None, :, :]]).all()
    assert (M[M] == M[xs[:, None, None], M[None, :, :]]).all()
    assert (M[xs[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()
    assert (A[0] == xs).all() and (M[1] == xs).all()
    assert ((A == 0).sum(axis=1) == 1).all()
    assert ((M[1:, 1:] == 1).sum(axis=1) == 1).all()
    assert (F.vpow(xs, n) == xs).all()
    assert (F.vinv(xs[1:]) == np.array([F.inv(int(a)) for a in xs[1:]])).all()


@pytest.mark.parametrize("p,k", [(2, 4), (3, 3), (5, 2), (7, 2), (2, 8)])
def test_multiplication_matches_schoolbook(p, k):
    F = make_field(p, k)
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, F.order, size=(300, 2)).tolist():
        assert F.mul(a, b) == _ref_mul(F, a, b)


def test_make_field_examples():
    F81 = make_field(3, 4)
    assert len(F81.modulus) == 5 and F81.modulus[-1] == 1
    assert is_irreducible_mod_p(list(F81.modulus), 3)
    assert make_field(3, 4) is F81
    assert make_field(2, 1).modulus == (0, 1)
    F25 = make_field(5, 2)
    xs = F25.all_elements()
    assert (F25.vpow(xs, 25) == xs).all()


def test_modulus_is_smallest_irreducible():
    for p, k in [(2, 3), (3, 2), (5, 2), (2, 4)]:
        F = make_field(p, k)
        idx = lambda f: sum(c * p ** i for i, c in enumerate(f[:-1]))
        best = idx(F.modulus)
        for cand in range(best):
            f = [(cand // p ** i) % p for i in range(k)] + [1]
            assert not is_irreducible_mod_p(f, p)


def test_make_field_errors():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(2, 30)
    with pytest.raises(FieldError):
        make_field(3, 0)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("MAXCURVE_FIELD_BUDGET", "100")
    with pytest.raises(FieldError):
        make_field(5, 3)
    assert make_field(5, 2).order == 25


def test_trace_examples():
    F25, F5 = make_field(5, 2), make_field(5, 1)
    assert trace(F25.element(1), F5).index == 2
    assert trace(F25.element(0), F5).index == 0
    images = [trace(F25.element(a), F5).index for a in range(25)]
    assert sorted(set(images)) == list(range(5))
    assert all(images.count(v) == 5 for v in range(5))


@pytest.mark.parametrize("p,k,sub", [(2, 4, 4), (3, 4, 9), (5, 2, 5), (2, 6, 8), (3, 2, 3)])
def test_trace_onto_with_equal_fibres(p, k, sub):
    F = make_field(p, k)
    tr = F.vtrace(F.all_elements(), sub)
    sub_idx = subfield_indices(F, sub)
    vals, counts = np.unique(tr, return_counts=True)
    assert sorted(vals.tolist()) == sorted(sub_idx.tolist())
    assert (counts == F.order // sub).all()


def test_norm_lands_in_subfield():
    F, S = make_field(3, 4), make_field(3, 2)
    for a in range(1, 81, 7):
        n = norm(F.element(a), S)
        assert n.field is S and n.index != 0


def test_primitive_examples():
    assert primitive_element(make_field(2, 1)).index == 1
    assert primitive_element(make_field(5, 1)).index == 2
    F9 = make_field(3, 2)
    xi = F9.generator
    assert [F9.pow(xi, e) == 1 for e in range(1, 9)].index(True) == 7
    assert F9.pow(xi, 4) == F9.neg(1)


@pytest.mark.parametrize("p,k", [(2, 6), (3, 4), (5, 3), (7, 2)])
def test_frobenius_fixed_field_sizes(p, k):
    F = make_field(p, k)
    xs = F.all_elements()
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, F.order, size=(2, 200))
    for e in range(1, k + 1):
        fr = lambda v: F.vpow(v, p ** e)
        assert (fr(F.vadd(a, b)) == F.vadd(fr(a), fr(b))).all()
        assert (fr(F.vmul(a, b)) == F.vmul(fr(a), fr(b))).all()
        from math import gcd
        assert int((fr(xs) == xs).sum()) == p ** gcd(e, k)


@pytest.mark.parametrize("src,tgt", [((5, 2), (5, 4)), ((3, 2), (3, 6)), ((2, 2), (2, 8)), ((2, 3), (2, 6))])
def test_embedding_is_homomorphism(src, tgt):
    S, T = make_field(*src), make_field(*tgt)
    phi = embedding(S, T)
    xs = S.all_elements()
    img = np.array([phi(int(a)) for a in xs])
    assert len(set(img.tolist())) == S.order
    assert (T.vpow(img, S.order) == img).all()
    a, b = np.meshgrid(xs, xs)
    assert (img[S.vadd(a, b)] == T.vadd(img[a], img[b])).all()
    assert (img[S.vmul(a, b)] == T.vmul(img[a], img[b])).all()
    for c in range(S.p):
        assert phi(c) == c


@given(st.sampled_from([(2, 4), (3, 3), (5, 2), (7, 2)]), st.data())
def test_inverse_and_division(pk, data):
    F = make_field(*pk)
    a = data.draw(st.integers(1, F.order - 1))
    b = data.draw(st.integers(0, F.order - 1))
    assert F.mul(a, F.inv(a)) == 1
    assert F.mul(F.div(b, a), a) == b
    assert F.pow(a, F.order - 1) == 1
