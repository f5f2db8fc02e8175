"""Riemann-Roch spaces ``L(dP0)``, local expansions, order sequences and the
Stohr-Voloch divisors ``R`` and ``S`` for curves with one place at infinity.

Conventions: ``x`` and ``y`` have pole orders ``A`` and ``B`` at the infinite
place ``P0`` (coprime).  ``L(dP0)`` has the monomial basis ``x^i y^j`` with
``iA + jB <= d`` and ``i < B``.  At an affine point the local parameter is
``x - x(P)`` unless ``df/dy`` vanishes there, in which case it is ``y - y(P)``;
at ``P0`` it is ``x^u y^v`` with ``uA + vB = -1``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .algebra import (Poly, PrecisionError, Series, binom_mod_p, coefficient_map,
                      pivot_columns, series_det_valuation)
from .curve import (CurveError, CurveModel, PlacePoint, affine_points, coordinate_degree,
                    involution)
from .funcfield import FunctionField, implicit_series, rank_profile
from .gf import Field, make_field
from .semigroup import from_generators

PRECISION_MARGIN = 8
MAX_RETRIES = 4
SAMPLE_SEED = 20260901
SAMPLES_PER_DEGREE = 7


class LinsysError(ValueError):
    pass


class GenericOrderMismatch(AssertionError):
    """The symbolic and the sampled generic order sequences differ."""


@dataclass(frozen=True)
class MonomialBasis:
    d: int
    exps: tuple[tuple[int, int], ...]
    pole_x: int
    pole_y: int

    @property
    def dimension(self) -> int:
        return len(self.exps)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(i * self.pole_x + j * self.pole_y for i, j in self.exps)

    def to_dict(self) -> dict:
        return {"d": self.d, "dimension": self.dimension, "monomials": [list(e) for e in self.exps],
                "pole_orders": [self.pole_x, self.pole_y]}


@dataclass(frozen=True)
class OrderData:
    orders: tuple[int, ...]
    role: str  # "pointwise", "generic-eps" or "frobenius-nu"
    point: PlacePoint | None = None
    removal_index: int | None = None

    def to_dict(self) -> dict:
        d = {"orders": list(self.orders), "role": self.role}
        if self.point is not None:
            d["point"] = self.point.to_dict()
        if self.removal_index is not None:
            d["I"] = self.removal_index
        return d


def _pole_orders(c: CurveModel) -> tuple[int, int]:
    if c.family == "ree":
        raise LinsysError("the Ree model is count-only; no Riemann-Roch data")
    P = c.single_place
    A, B = P.pole_x, P.pole_y
    if A < 1 or B < 1 or gcd(A, B) != 1:
        raise LinsysError(f"pole orders ({A}, {B}) are not coprime: monomial basis unavailable")
    eq = c.equation
    if eq.terms.get((B, 0), 0) == 0 or eq.terms.get((0, A), 0) == 0:
        raise LinsysError("equation lacks the x^B / y^A terms required for the monomial basis")
    for (i, j) in eq.terms:
        if (i, j) not in ((B, 0), (0, A)) and i * A + j * B >= A * B:
            raise LinsysError("equation is not of C_ab shape for the recorded pole orders")
    return A, B


def riemann_roch_basis(c: CurveModel, d: int) -> MonomialBasis:
    if d < 0:
        raise LinsysError("d must be nonnegative")
    A, B = _pole_orders(c)
    exps = sorted(((i, j) for i in range(B) for j in range(d // B + 1) if i * A + j * B <= d),
                  key=lambda e: (e[0] * A + e[1] * B, e))
    basis = MonomialBasis(d, tuple(exps), A, B)
    expected = from_generators((A, B)).count_upto(d)
    if basis.dimension != expected:
        raise AssertionError(f"basis size {basis.dimension} != semigroup count {expected}")  # pragma: no cover
    return basis


# -- local expansions -----------------------------------------------------------

def _series_eval(f: Poly, X: Series, Y: Series, F: Field) -> Series:
    conv = coefficient_map(f.field, F)
    dx, dy = f.degree(0), f.degree(1)
    XP = [None] * (dx + 1)
    YP = [None] * (dy + 1)
    one = Series.constant(F, 1, min(X.N, Y.N), X.coeffs.shape[:-1])
    XP[0] = YP[0] = one
    for i in range(1, dx + 1):
        XP[i] = XP[i - 1] * X
    for j in range(1, dy + 1):
        YP[j] = YP[j - 1] * Y
    acc = None
    for (i, j), cf in sorted(f.terms.items()):
        term = (XP[i] * YP[j]) * conv(cf)
        acc = term if acc is None else acc + term
    return acc


def _newton_solve(f: Poly, fd: Poly, X: Series, Y: Series, F: Field, solve_y: bool) -> Series:
    """Refine the dependent coordinate so that ``f(X, Y) = 0`` to full precision."""
    N = X.N if solve_y else Y.N
    steps = max(1, (N - 1).bit_length()) + 1
    for _ in range(steps):
        val = _series_eval(f, X, Y, F)
        if not val.coeffs.any():
            break
        der = _series_eval(fd, X, Y, F)
        corr = val * der.inverse()
        if solve_y:
            Y = Series(F, F.vsub(Y.coeffs, corr.coeffs[..., :N]))
        else:
            X = Series(F, F.vsub(X.coeffs, corr.coeffs[..., :N]))
    if _series_eval(f, X, Y, F).coeffs.any():
        raise PrecisionError("implicit expansion did not converge")  # pragma: no cover
    return Y if solve_y else X


def affine_expansions(c: CurveModel, F: Field, pts: np.ndarray, N: int) -> tuple[Series, Series, np.ndarray]:
    """Series of ``x`` and ``y`` at each affine point (batched).

    Returns ``(X, Y, uses_x)`` where ``uses_x[b]`` says whether ``x - x(P)`` is
    the local parameter at point ``b``.
    """
    f = c.equation
    fx, fy = f.partial(0), f.partial(1)
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 2)
    a, b = pts[:, 0], pts[:, 1]
    gy = fy.vevaluate([a, b], F)
    gx = fx.vevaluate([a, b], F)
    if np.any((gy == 0) & (gx == 0)):
        raise CurveError("singular point: both partial derivatives vanish")
    uses_x = gy != 0
    X = np.zeros((len(pts), N), dtype=np.int64)
    Y = np.zeros((len(pts), N), dtype=np.int64)
    for mask, solve_y in ((uses_x, True), (~uses_x, False)):
        idx = np.nonzero(mask)[0]
        if not len(idx):
            continue
        if solve_y:
            Xs = Series.variable(F, N, a[idx], (len(idx),))
            Ys = Series.constant(F, b[idx], N, (len(idx),))
            Ys = _newton_solve(f, fy, Xs, Ys, F, True)
        else:
            Ys = Series.variable(F, N, b[idx], (len(idx),))
            Xs = Series.constant(F, a[idx], N, (len(idx),))
            Xs = _newton_solve(f, fx, Xs, Ys, F, False)
        X[idx] = Xs.coeffs
        Y[idx] = Ys.coeffs
    return Series(F, X), Series(F, Y), uses_x


def _bezout_minus_one(A: int, B: int) -> tuple[int, int]:
    """``(u, v)`` with ``uA + vB = -1`` and ``|u|`` minimal."""
    for u in sorted(range(-B, B + 1), key=abs):
        if (-1 - u * A) % B == 0:
            return u, (-1 - u * A) // B
    raise LinsysError("pole orders are not coprime")  # pragma: no cover


def infinity_expansions(c: CurveModel, F: Field, N: int) -> tuple[Series, Series, int]:
    """Laurent series of ``x`` and ``y`` at ``P0`` in the parameter ``x^u y^v``.

    Writing ``x = t^-A W^v`` and ``y = t^-B W^-u``, the unit ``W`` solves
    ``sum c_ij t^(AB - iA - jB) W^(iv - ju) = 0`` with ``W(0) = -alpha/beta``.
    """
    A, B = _pole_orders(c)
    u, v = _bezout_minus_one(A, B)
    f = c.equation
    conv = coefficient_map(f.field, F)
    alpha = conv(f.terms[(B, 0)])
    beta = conv(f.terms[(0, A)])
    w0 = F.neg(F.div(alpha, beta))
    W = Series.constant(F, np.array([w0]), N, (1,))
    terms = [(A * B - i * A - j * B, i * v - j * u, conv(cf)) for (i, j), cf in f.terms.items()]
    p = F.p
    for _ in range(max(1, (N - 1).bit_length()) + 2):
        Winv = W.inverse()
        val = None
        der = None
        for s, e, cf in terms:
            We = W ** e if e >= 0 else Winv ** (-e)
            tv = (We * cf).shift(s).truncate(N)
            tv = Series(F, tv.regular(N))
            val = tv if val is None else val + tv
            k = e % p
            if k:
                dv = Series(F, ((We * Winv) * F.mul(cf, F.from_int(k))).shift(s).regular(N))
                der = dv if der is None else der + dv
        if not val.coeffs.any():
            break
        W = Series(F, F.vsub(W.coeffs, (val * der.inverse()).coeffs[..., :N]))
    X = (W ** v if v >= 0 else W.inverse() ** (-v)).shift(-A)
    Y = (W ** (-u) if u <= 0 else W.inverse() ** u).shift(-B)
    return X, Y, A * B


def basis_rows(c: CurveModel, basis: MonomialBasis, F: Field, pts: np.ndarray | None, N: int,
               infinite: bool = False) -> np.ndarray:
    """Coefficient arrays ``(batch, dim, N)`` of the basis at the given points.

    At ``P0`` the basis is multiplied by ``t^d`` so every row is regular.
    """
    if infinite:
        X, Y, _ = infinity_expansions(c, F, N)
    else:
        X, Y, _ = affine_expansions(c, F, pts, N)
    maxi = max(i for i, _ in basis.exps)
    maxj = max(j for _, j in basis.exps)
    XP = [Series.constant(F, 1, N, X.coeffs.shape[:-1])]
    YP = [Series.constant(F, 1, N, Y.coeffs.shape[:-1])]
    for _ in range(maxi):
        XP.append(XP[-1] * X)
    for _ in range(maxj):
        YP.append(YP[-1] * Y)
    rows = []
    for i, j in basis.exps:
        s = XP[i] * YP[j]
        if infinite:
            s = s.shift(basis.d)
        rows.append(s.regular(N))
    return np.stack(rows, axis=-2)


def _pivots_with_retry(c, basis, F, pts, infinite=False, N=None):
    N = basis.d + PRECISION_MARGIN if N is None else N
    for _ in range(MAX_RETRIES):
        M = basis_rows(c, basis, F, pts, N, infinite)
        piv = pivot_columns(F, M)
        if np.all(piv[:, -1] >= 0):
            return piv, M
        N *= 2
    raise PrecisionError("orders not certified after precision retries")


def orders_batch(c: CurveModel, basis: MonomialBasis, F: Field, pts: np.ndarray,
                 threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Order sequences at a batch of affine points; returns ``(pivots, rows)``."""
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 2)
    if not len(pts):
        R = basis.dimension
        return np.zeros((0, R), dtype=np.int64), np.zeros((0, R, basis.d + PRECISION_MARGIN), dtype=np.int64)
    if threads > 1 and len(pts) > threads:
        chunks = np.array_split(np.arange(len(pts)), threads)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(lambda ix: _pivots_with_retry(c, basis, F, pts[ix]), chunks))
        N = max(r[1].shape[-1] for r in res)
        rows = np.concatenate([np.pad(r[1], ((0, 0), (0, 0), (0, N - r[1].shape[-1]))) for r in res])
        return np.concatenate([r[0] for r in res]), rows
    return _pivots_with_retry(c, basis, F, pts)


def expand_at(c: CurveModel, monomial: tuple[int, int], P: PlacePoint, precision: int) -> Series:
    """Series of ``x^i y^j`` at ``P`` in the local parameter (Laurent at ``P0``)."""
    if precision < 1:
        raise LinsysError("precision must be positive")
    i, j = monomial
    if P.is_infinite:
        F = c.field
        X, Y, _ = infinity_expansions(c, F, precision)
    else:
        F = P.field
        X, Y, _ = affine_expansions(c, F, np.array([P.coords]), precision)
    out = Series.constant(F, 1, precision, X.coeffs.shape[:-1])
    for _ in range(i):
        out = out * X
    for _ in range(j):
        out = out * Y
    return Series(F, out.coeffs[0], out.val)


def orders_at(c: CurveModel, d: int, P: PlacePoint) -> OrderData:
    basis = riemann_roch_basis(c, d)
    if P.is_infinite:
        piv, _ = _pivots_with_retry(c, basis, c.field, None, infinite=True)
    else:
        piv, _ = orders_batch(c, basis, P.field, np.array([P.coords]))
    return OrderData(tuple(int(v) for v in piv[0]), "pointwise", P)


# -- generic orders -------------------------------------------------------------

def _separating_choice(c: CurveModel) -> tuple[int, Field, list[np.ndarray]]:
    """Pick the variable ``u`` of smaller algebraic degree for which ``G`` is separable in ``w``.

    Returns ``(u_index, field, G)`` with ``G`` monic in ``w`` (list of u-polynomials).
    """
    f = c.equation
    F = make_field(c.p, 1) if f.coefficients_in_prime_field() else c.field
    if F is not c.field:
        f = Poly(F, dict(f.terms))
    options = []
    for u_idx in (0, 1):
        w_idx = 1 - u_idx
        n = f.degree(w_idx)
        lead_terms = {e: cf for e, cf in f.terms.items() if e[w_idx] == n}
        if len(lead_terms) != 1 or next(iter(lead_terms))[u_idx] != 0:
            continue
        separable = any(e[w_idx] % c.p for e in f.terms if e[w_idx] > 0)
        if separable:
            options.append((n, u_idx))
    if not options:
        raise LinsysError("neither coordinate is a separating variable with monic equation")
    n, u_idx = min(options)
    w_idx = 1 - u_idx
    lc = next(cf for e, cf in f.terms.items() if e[w_idx] == n)
    il = F.inv(lc)
    G = [np.zeros(0, dtype=np.int64) for _ in range(n + 1)]
    du = f.degree(u_idx)
    coeffs = [[0] * (du + 1) for _ in range(n + 1)]
    for e, cf in f.terms.items():
        coeffs[e[w_idx]][e[u_idx]] = F.mul(cf, il)
    from .funcfield import UPoly
    G = [UPoly.trim(np.array(cl, dtype=np.int64)) for cl in coeffs]
    return u_idx, F, G


def symbolic_generic_orders(c: CurveModel, basis: MonomialBasis) -> tuple[tuple[int, ...], dict]:
    """Rank profile of the Hasse-Wronskian rows over the function field."""
    u_idx, F, G = _separating_choice(c)
    K = FunctionField(F, G)
    N = basis.d + 1
    W = implicit_series(K, N)
    U = [K.from_poly(np.array([0, 1], dtype=np.int64)), K.one] + [K.zero] * (N - 2)
    U = U[:N]
    maxu = max(e[u_idx] for e in basis.exps)
    maxw = max(e[1 - u_idx] for e in basis.exps)
    unit = [K.one] + [K.zero] * (N - 1)
    UP, WP = [unit], [unit]
    for _ in range(maxu):
        UP.append(K.s_mul(UP[-1], U, N))
    for _ in range(maxw):
        WP.append(K.s_mul(WP[-1], W, N))
    rows = [K.s_mul(UP[e[u_idx]], WP[e[1 - u_idx]], N) for e in basis.exps]
    piv = rank_profile(K, rows)
    if len(piv) != basis.dimension:
        raise LinsysError("Wronskian rank deficient: the separating variable is inseparable")  # pragma: no cover
    info = {"separating_variable": "xy"[u_idx], "algebraic_degree": K.n, "field": F.describe()}
    return tuple(piv), info


def _exact_degree_points(c: CurveModel, degree: int) -> tuple[Field, np.ndarray]:
    F, pts = affine_points(c, degree)
    if len(pts) and degree > 1:
        pts = pts[coordinate_degree(F, c.base_order, pts) == degree]
    return F, pts


def sample_points(c: CurveModel, degree: int, count: int, rng: np.random.Generator) -> tuple[Field, np.ndarray]:
    """Up to ``count`` affine points of exact degree ``degree``, chosen with ``rng``."""
    F, pts = _exact_degree_points(c, degree)
    if len(pts) > count:
        pts = pts[np.sort(rng.choice(len(pts), size=count, replace=False))]
    return F, pts


def sampled_generic_orders(c: CurveModel, basis: MonomialBasis, degrees=(1, 2, 3),
                           total: int = 3 * SAMPLES_PER_DEGREE, seed: int = SAMPLE_SEED) -> tuple[tuple[int, ...], dict]:
    """Componentwise minimum of the orders at ``total`` points spread over ``degrees``."""
    rng = np.random.default_rng(seed)
    pools = {dg: _exact_degree_points(c, dg) for dg in degrees}
    quota = {dg: 0 for dg in degrees}
    # round-robin allocation so that a degree without points does not shrink the sample
    while sum(quota.values()) < total:
        grew = False
        for dg in degrees:
            if quota[dg] < len(pools[dg][1]) and sum(quota.values()) < total:
                quota[dg] += 1
                grew = True
        if not grew:
            break
    best = None
    for dg in degrees:
        F, pts = pools[dg]
        if not quota[dg]:
            continue
        pick = np.sort(rng.choice(len(pts), size=quota[dg], replace=False))
        piv, _ = orders_batch(c, basis, F, pts[pick])
        m = piv.min(axis=0)
        best = m if best is None else np.minimum(best, m)
    if best is None:
        raise LinsysError("no sample points found")
    return tuple(int(v) for v in best), {"sampled_points": sum(quota.values()), "per_degree": quota}


def generic_orders(c: CurveModel, d: int, degrees=(1, 2, 3)) -> OrderData:
    """Generic order sequence; the symbolic and sampled computations must agree."""
    basis = riemann_roch_basis(c, d)
    sym, _ = symbolic_generic_orders(c, basis)
    smp, info = sampled_generic_orders(c, basis, degrees)
    if sym != smp:
        raise GenericOrderMismatch(f"symbolic {sym} != sampled {smp}")
    if info["sampled_points"] < 20:
        raise LinsysError(f"only {info['sampled_points']} sample points available (need 20)")
    return OrderData(sym, "generic-eps")


# -- Stohr-Voloch divisors --------------------------------------------------------

def _det_mod_p(M: list[list[int]], p: int) -> int:
    M = [[v % p for v in r] for r in M]
    n = len(M)
    det = 1
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c]), None)
        if r is None:
            return 0
        if r != c:
            M[c], M[r] = M[r], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], p - 2, p)
        for r2 in range(c + 1, n):
            f = M[r2][c] * inv % p
            if f:
                M[r2] = [(a - f * b) % p for a, b in zip(M[r2], M[c])]
    return det % p


def wronskian_valuation(F: Field, rows: np.ndarray, orders, eps) -> int:
    """``v_P(R)`` from the basis expansions ``rows`` (dim, N) at a point with the given orders.

    If ``det(binom(j_k, eps_i)) != 0 mod p`` the leading term of the Wronskian
    is visible from the orders alone and ``v_P(R) = sum(j_i - eps_i)``.
    Otherwise the determinant of the Hasse-derivative matrix is expanded.
    """
    orders = list(orders)
    eps = list(eps)
    if _det_mod_p([[binom_mod_p(j, e, F.p) for j in orders] for e in eps], F.p):
        return sum(orders) - sum(eps)
    R, N = rows.shape
    mat = np.zeros((R, R, N), dtype=np.int64)
    for i, e in enumerate(eps):
        factors = np.array([binom_mod_p(n, e, F.p) for n in range(e, N)], dtype=np.int64)
        for k in range(R):
            mat[i, k, :N - e] = F.vmul(rows[k, e:], factors)
    return series_det_valuation(F, mat)


def _wronskian_with_retry(c, basis, F, pt, orders, eps, infinite=False):
    N = basis.d + PRECISION_MARGIN
    for _ in range(MAX_RETRIES):
        rows = basis_rows(c, basis, F, None if infinite else np.array([pt]), N, infinite)[0]
        try:
            return wronskian_valuation(F, rows, orders, eps)
        except PrecisionError:
            N *= 2
    raise PrecisionError("Wronskian valuation not certified")


def degree_R(eps, g: int, d: int) -> int:
    return sum(eps) * (2 * g - 2) + len(eps) * d


def degree_S(nu, g: int, d: int, q: int) -> int:
    r = len(nu)  # nu_0 .. nu_{r-1}
    return sum(nu[1:]) * (2 * g - 2) + (q * q + r) * d


def _frobenius_removal_candidates(eps, n: int, rational_orders) -> list[int]:
    r = len(eps) - 1
    out = []
    for I in range(1, r + 1):
        if I > n:
            continue  # nu_n = eps_{n+1}
        if n >= 2 and I < 2:
            continue  # nu_1 = eps_1
        nu = eps[:I] + eps[I + 1:]
        ok = all(nu[i] <= js[i + 1] - js[1] for js in rational_orders for i in range(1, r))
        if ok:
            out.append(I)
    return out


def frobenius_rank_drop(c: CurveModel, basis: MonomialBasis, eps, F: Field, pts: np.ndarray) -> list[int]:
    """Pointwise smallest ``I`` with the Frobenius row in the span of the first ``I+1`` Wronskian rows."""
    N = max(eps) + 1
    M = basis_rows(c, basis, F, pts, max(N, basis.d + 1))
    # values of the basis at Fr(P): Frobenius applied to the values at P
    fr_vals = F.vpow(M[:, :, 0], c.base_order)
    out = []
    for b in range(len(pts)):
        found = None
        for I in range(len(eps)):
            V = np.stack([M[b, :, e] for e in eps[:I + 1]])
            r1 = int((pivot_columns(F, V.T[None])[0] >= 0).sum())
            r2 = int((pivot_columns(F, np.concatenate([V, fr_vals[b][None]]).T[None])[0] >= 0).sum())
            if r1 == r2:
                found = I
                break
        out.append(found)
    return out


@dataclass
class SVDivisorReport:
    d: int
    eps: tuple[int, ...]
    degR_formula: int
    degR_pointwise: int
    complete: bool
    classes: list = dc_field(default_factory=list)
    nu: tuple[int, ...] | None = None
    removal_index: int | None = None
    degS: int | None = None
    extra: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"d": self.d, "eps": list(self.eps), "degR": self.degR_formula,
             "degR_pointwise": self.degR_pointwise, "complete": self.complete,
             "classes": self.classes}
        if self.nu is not None:
            d.update({"nu": list(self.nu), "I": self.removal_index, "degS": self.degS})
        d.update(self.extra)
        return d


@dataclass
class PointData:
    """Orders and ``v_P(R)`` at every point (one representative per place)."""

    field: Field
    pts: np.ndarray
    orders: np.ndarray
    vR: np.ndarray
    degree: int


def _point_data(c, basis, eps, degree, threads=1) -> PointData:
    F, pts = affine_points(c, degree)
    if degree > 1 and len(pts):
        deg = coordinate_degree(F, c.base_order, pts)
        pts = pts[deg == degree]
    piv, rows = orders_batch(c, basis, F, pts, threads)
    eps_arr = np.array(eps)
    vR = np.zeros(len(pts), dtype=np.int64)
    for b in np.nonzero((piv != eps_arr).any(axis=1))[0]:
        try:
            vR[b] = wronskian_valuation(F, rows[b], piv[b], eps)
        except PrecisionError:
            vR[b] = _wronskian_with_retry(c, basis, F, pts[b], piv[b], eps)
    return PointData(F, pts, piv, vR, degree)


def _infinity_data(c, basis, eps) -> tuple[tuple[int, ...], int]:
    piv, rows = _pivots_with_retry(c, basis, c.field, None, infinite=True)
    o = tuple(int(v) for v in piv[0])
    if o == tuple(eps):
        return o, 0
    try:
        return o, wronskian_valuation(c.field, rows[0], o, eps)
    except PrecisionError:
        return o, _wronskian_with_retry(c, basis, c.field, None, o, eps, infinite=True)


def sv_divisors(c: CurveModel, d: int | None = None, search_degree: int = 2, threads: int = 1,
                eps: tuple[int, ...] | None = None, with_nu: bool = True) -> tuple[SVDivisorReport, dict]:
    """Degree of ``R`` by formula and as a pointwise sum, plus ``nu`` and ``deg S``.

    Returns the report and the raw per-degree point data.
    """
    ext, q = c.maximal_target()
    d = q + 1 if d is None else d
    basis = riemann_roch_basis(c, d)
    if eps is None:
        eps = generic_orders(c, d).orders
    g = c.genus
    degR = degree_R(eps, g, d)
    inf_orders, inf_v = _infinity_data(c, basis, eps)
    data = {}
    total = inf_v
    for dg in range(1, search_degree + 1):
        data[dg] = _point_data(c, basis, eps, dg, threads)
        total += int(data[dg].vR.sum())
    report = SVDivisorReport(d, tuple(eps), degR, total, total == degR,
                             _order_classes(inf_orders, inf_v, data))
    if with_nu and ext == 1 and d == q + 1:
        n = basis.dimension - 2
        rational = [inf_orders] + [tuple(o) for o in data[1].orders.tolist()] if 1 in data else [inf_orders]
        cands = _frobenius_removal_candidates(list(eps), n, sorted(set(rational)))
        rng = np.random.default_rng(SAMPLE_SEED)
        F2, pts2 = sample_points(c, 2, SAMPLES_PER_DEGREE, rng)
        drops = frobenius_rank_drop(c, basis, list(eps), F2, pts2) if len(pts2) else []
        generic_drop = max((v for v in drops if v is not None), default=None)
        I = cands[0] if len(cands) == 1 else generic_drop
        report.extra["I_candidates"] = cands
        report.extra["I_rank_drop"] = generic_drop
        report.extra["I_consistent"] = generic_drop is None or generic_drop in cands
        if I is not None:
            nu = tuple(eps[:I]) + tuple(eps[I + 1:])
            report.nu, report.removal_index = nu, I
            report.degS = degree_S(nu, g, d, q)
    return report, data


def _order_classes(inf_orders, inf_v, data) -> list[dict]:
    """Group points by (orders, v_P(R), residue degree); ``points`` counts geometric points."""
    rows = [(tuple(inf_orders), inf_v, 1, True)]
    for dg, pdata in sorted(data.items()):
        for o, v in zip(pdata.orders.tolist(), pdata.vR.tolist()):
            rows.append((tuple(o), int(v), dg, False))
    out: dict = {}
    for o, v, dg, inf in rows:
        a = out.setdefault((o, v, dg), {"orders": list(o), "vR": v, "residue_degree": dg, "points": 0,
                                        "includes_infinity": False})
        a["points"] += 1
        a["includes_infinity"] |= inf
    for a in out.values():
        a["places"] = a["points"] // a["residue_degree"]
    return sorted(out.values(), key=lambda a: (a["residue_degree"], a["orders"], a["vR"]))


# -- the linear equivalence qP + Fr(P) ~ (q+1)P0 ----------------------------------

def verify_frobenius_equivalence(c: CurveModel, P: PlacePoint) -> dict:
    """Search ``L((q+1)P0)`` for a function vanishing to order ``q`` at ``P`` and at ``Fr(P)``."""
    ext, q = c.maximal_target()
    if ext != 1:
        raise LinsysError("the base field must be F_{q^2} for this check")
    basis = riemann_roch_basis(c, q + 1)
    R = basis.dimension
    if P.is_infinite:
        return {"holds": True, "frobenius_fixed": True, "reason": "q+1 is a non-gap at P0",
                "dimension": R}
    F = P.field
    pt = np.array([P.coords])
    fr = tuple(F.pow(v, c.base_order) for v in P.coords)
    fixed = fr == tuple(P.coords)
    N = q + 1 + PRECISION_MARGIN
    rows = basis_rows(c, basis, F, pt, N)[0]  # (R, N)
    if fixed:
        C = rows[:, :q + 1].T
    else:
        fr_rows = basis_rows(c, basis, F, np.array([fr]), 1)[0]
        C = np.concatenate([rows[:, :q].T, fr_rows[:, :1].T])
    rank = int((pivot_columns(F, C[None])[0] >= 0).sum())
    return {"holds": rank < R, "frobenius_fixed": bool(fixed), "conditions": int(C.shape[0]),
            "dimension": R, "rank": rank, "solution_space": R - rank}


def corollary12_report(c: CurveModel, degrees=(1, 2, 3), total: int = 21,
                       seed: int = SAMPLE_SEED) -> dict:
    """Run :func:`verify_frobenius_equivalence` on ``total`` points spread over ``degrees``."""
    rng = np.random.default_rng(seed)
    pools = {dg: _exact_degree_points(c, dg) for dg in degrees}
    quota = {dg: 0 for dg in degrees}
    while sum(quota.values()) < total:
        grew = False
        for dg in degrees:
            if quota[dg] < len(pools[dg][1]) and sum(quota.values()) < total:
                quota[dg] += 1
                grew = True
        if not grew:
            break
    results = []
    for dg in degrees:
        F, pts = pools[dg]
        if not quota[dg]:
            continue
        for row in pts[np.sort(rng.choice(len(pts), size=quota[dg], replace=False))]:
            P = PlacePoint(c.p, F.k, tuple(int(v) for v in row), degree=dg)
            r = verify_frobenius_equivalence(c, P)
            r.update({"degree": dg, "point": list(P.coords)})
            results.append(r)
    return {"sampled": len(results), "per_degree": quota,
            "holds": all(r["holds"] for r in results) and len(results) >= 20, "points": results}


# -- the hyperelliptic example ------------------------------------------------------

def example16_report(threads: int = 1) -> dict:
    """Everything about ``x^2 + y^5 = 1`` over F_81 with ``D = |10 P0|``."""
    from .curve import count_points, hyperelliptic_example
    c = hyperelliptic_example()
    d = 10
    basis = riemann_roch_basis(c, d)
    gen = generic_orders(c, d)
    rep, data = sv_divisors(c, d, 2, threads, eps=gen.orders)
    rational = data[1]
    nonrat = data[2]
    exc2 = (nonrat.orders != np.array(gen.orders)).any(axis=1)
    F2 = nonrat.field
    # fixed points of sigma o Fr among the points of degree two
    xs, ys = nonrat.pts[:, 0], nonrat.pts[:, 1]
    fixed = (F2.vneg(F2.vpow(xs, 81)) == xs) & (F2.vpow(ys, 81) == ys)
    pt_inv_ok = True
    if len(nonrat.pts):
        P = PlacePoint(3, F2.k, tuple(int(v) for v in nonrat.pts[0]))
        pt_inv_ok = involution(c, involution(c, P)) == P
    types = {}
    for cl in rep.classes:
        types.setdefault(cl["residue_degree"], []).append(
            {"orders": cl["orders"], "vR": cl["vR"], "points": cl["points"]})
    return {
        "count": count_points(c, 1),
        "ell_10P0": basis.dimension,
        "generic_orders": list(gen.orders),
        "degR": rep.degR_formula,
        "degR_pointwise": rep.degR_pointwise,
        "complete": rep.complete,
        "classes": rep.classes,
        "rational_points": len(rational.pts) + 1,
        "nonrational_dw_points": int(exc2.sum()),
        "nonrational_dw_orders": sorted({tuple(o) for o in nonrat.orders[exc2].tolist()}),
        "sigma_fr_fixed_points": int(fixed.sum()),
        "dw_equals_sigma_fr_fixed": bool(np.array_equal(exc2, fixed)),
        "involution_squared_identity": bool(pt_inv_ok),
        "nu": list(rep.nu) if rep.nu else None,
        "I": rep.removal_index,
        "degS": rep.degS,
        "anchor": "P0 is the place at infinity",
    }
