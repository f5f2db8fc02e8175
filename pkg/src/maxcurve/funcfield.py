"""Arithmetic in a function field ``K = F(u)[w] / G(u, w)`` with ``G`` monic in ``w``.

Used for the symbolic Hasse-Wronskian: the implicit function ``w(u + t)`` is
expanded in ``K[[t]]`` and the rank profile of the coefficient matrix is found
by exact elimination over ``K``.  Univariate polynomials in ``u`` are numpy
index arrays, constant term first.
"""

from __future__ import annotations

import numpy as np

from .algebra import binom_mod_p
from .gf import Field

_EMPTY = np.zeros(0, dtype=np.int64)


class UPoly:
    """Dense polynomial helpers over a finite field."""

    def __init__(self, F: Field):
        self.F = F
        self.prime = F.k == 1

    @staticmethod
    def trim(a: np.ndarray) -> np.ndarray:
        nz = np.flatnonzero(a)
        return a[:nz[-1] + 1] if len(nz) else _EMPTY

    def const(self, c: int) -> np.ndarray:
        return np.array([c], dtype=np.int64) if c else _EMPTY

    def add(self, a, b):
        if not len(a):
            return b
        if not len(b):
            return a
        n = max(len(a), len(b))
        aa = np.zeros(n, dtype=np.int64)
        bb = np.zeros(n, dtype=np.int64)
        aa[:len(a)] = a
        bb[:len(b)] = b
        return self.trim(self.F.vadd(aa, bb))

    def neg(self, a):
        return self.F.vneg(a) if len(a) else a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c: int):
        if not c or not len(a):
            return _EMPTY
        return self.F.vmul(a, c)

    def mul(self, a, b):
        if not len(a) or not len(b):
            return _EMPTY
        F = self.F
        if self.prime:
            return self.trim(np.convolve(a, b) % F.p)
        if len(a) > len(b):
            a, b = b, a
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(a.tolist()):
            if c:
                out[i:i + len(b)] = F.vadd(out[i:i + len(b)], F.vmul(b, c))
        return self.trim(out)

    def divmod(self, a, b):
        F = self.F
        if not len(b):
            raise ZeroDivisionError("polynomial division by zero")
        if len(a) < len(b):
            return _EMPTY, a
        r = a.copy()
        db = len(b) - 1
        ib = F.inv(int(b[-1]))
        qt = np.zeros(len(a) - db, dtype=np.int64)
        for i in range(len(a) - 1, db - 1, -1):
            c = int(r[i])
            if c:
                f = F.mul(c, ib)
                qt[i - db] = f
                r[i - db:i + 1] = F.vsub(r[i - db:i + 1], F.vmul(b, f))
        return self.trim(qt), self.trim(r[:db])

    def exact_div(self, a, b):
        qt, r = self.divmod(a, b)
        if len(r):
            raise ArithmeticError("inexact polynomial division")
        return qt

    def monic(self, a):
        if not len(a):
            return a
        return self.scale(a, self.F.inv(int(a[-1])))

    def gcd(self, a, b):
        while len(b):
            a, b = b, self.divmod(a, b)[1]
        return self.monic(a)

    def hasse(self, a, k: int):
        """k-th Hasse derivative."""
        if k >= len(a):
            return _EMPTY
        p = self.F.p
        f = np.array([binom_mod_p(n, k, p) for n in range(k, len(a))], dtype=np.int64)
        return self.trim(self.F.vmul(a[k:], f))

    def shift_expand(self, a, N: int) -> list[np.ndarray]:
        """Coefficients of ``a(u + t)`` in ``t``: ``[D^k a for k < N]``."""
        return [self.hasse(a, k) for k in range(N)]


class FunctionField:
    """``F(u)[w] / G`` with ``G = w^n + sum_{e<n} g_e(u) w^e``.

    Elements are pairs ``(nums, den)``: ``nums`` a tuple of ``n`` polynomials in
    ``u`` (coefficients of ``w^0 .. w^{n-1}``) and ``den`` a monic polynomial.
    The representation is kept reduced (gcd of all parts is 1), so zero-testing
    is exact.
    """

    def __init__(self, F: Field, G: list[np.ndarray]):
        self.F = F
        self.R = UPoly(F)
        if len(G) < 2 or not (len(G[-1]) == 1 and G[-1][0] == 1):
            raise ValueError("G must be monic of positive degree in w")
        self.n = len(G) - 1
        self.G = [self.R.trim(np.asarray(g, dtype=np.int64)) for g in G]
        self.one = self.from_poly(self.R.const(1))
        self.zero = ((_EMPTY,) * self.n, self.R.const(1))

    # construction

    def from_poly(self, a, wdeg: int = 0):
        nums = [_EMPTY] * self.n
        nums[wdeg] = self.R.trim(np.asarray(a, dtype=np.int64))
        return (tuple(nums), self.R.const(1))

    def w(self):
        if self.n == 1:
            return self.from_poly(self.R.neg(self.G[0]))
        return self.from_poly(self.R.const(1), 1)

    @staticmethod
    def is_zero(a) -> bool:
        return not any(len(c) for c in a[0])

    def _normalize(self, nums, den):
        R = self.R
        if not any(len(c) for c in nums):
            return self.zero
        g = den
        for c in nums:
            if len(g) == 1:
                break
            if len(c):
                g = R.gcd(g, c)
        if len(g) > 1:
            nums = [R.exact_div(c, g) if len(c) else c for c in nums]
            den = R.exact_div(den, g)
        lc = int(den[-1])
        if lc != 1:
            il = self.F.inv(lc)
            nums = [R.scale(c, il) for c in nums]
            den = R.scale(den, il)
        return (tuple(nums), den)

    # arithmetic

    def add(self, a, b):
        if self.is_zero(a):
            return b
        if self.is_zero(b):
            return a
        R = self.R
        (na, da), (nb, db) = a, b
        if len(da) == len(db) and np.array_equal(da, db):
            return self._normalize([R.add(x, y) for x, y in zip(na, nb)], da)
        g = R.gcd(da, db)
        fa = R.exact_div(db, g)
        fb = R.exact_div(da, g)
        nums = [R.add(R.mul(x, fa), R.mul(y, fb)) for x, y in zip(na, nb)]
        return self._normalize(nums, R.mul(da, fa))

    def neg(self, a):
        return (tuple(self.R.neg(c) for c in a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale_const(self, a, c: int):
        if not c:
            return self.zero
        return (tuple(self.R.scale(x, c) for x in a[0]), a[1])

    def _reduce(self, prod: list[np.ndarray]) -> list[np.ndarray]:
        R, n = self.R, self.n
        for k in range(len(prod) - 1, n - 1, -1):
            c = prod[k]
            if not len(c):
                continue
            for e in range(n):
                if len(self.G[e]):
                    prod[k - n + e] = R.sub(prod[k - n + e], R.mul(c, self.G[e]))
            prod[k] = _EMPTY
        return prod[:n]

    def mul(self, a, b):
        if self.is_zero(a) or self.is_zero(b):
            return self.zero
        R, n = self.R, self.n
        (na, da), (nb, db) = a, b
        prod = [_EMPTY] * (2 * n - 1)
        for i, x in enumerate(na):
            if not len(x):
                continue
            for j, y in enumerate(nb):
                if len(y):
                    prod[i + j] = R.add(prod[i + j], R.mul(x, y))
        return self._normalize(self._reduce(prod), R.mul(da, db))

    def _mul_matrix(self, nums) -> list[list[np.ndarray]]:
        """Columns are ``A * w^j`` for the numerator polynomial ``A``."""
        cols = []
        cur = list(nums)
        for j in range(self.n):
            cols.append(cur)
            if j + 1 < self.n:
                cur = self._reduce([_EMPTY] + list(cur))
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def _det(self, M: list[list[np.ndarray]]) -> np.ndarray:
        """Bareiss fraction-free determinant over F[u]."""
        R = self.R
        M = [list(r) for r in M]
        k = len(M)
        if k == 0:
            return R.const(1)
        sign = 1
        prev = R.const(1)
        for c in range(k - 1):
            if not len(M[c][c]):
                swap = next((r for r in range(c + 1, k) if len(M[r][c])), None)
                if swap is None:
                    return _EMPTY
                M[c], M[swap] = M[swap], M[c]
                sign = -sign
            for r in range(c + 1, k):
                for j in range(c + 1, k):
                    val = R.sub(R.mul(M[r][j], M[c][c]), R.mul(M[r][c], M[c][j]))
                    M[r][j] = R.exact_div(val, prev) if len(val) else val
                M[r][c] = _EMPTY
            prev = M[c][c]
        d = M[k - 1][k - 1]
        return R.neg(d) if sign < 0 else d

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in the function field")
        R, n = self.R, self.n
        nums, den = a
        M = self._mul_matrix(nums)
        det = self._det(M)
        if not len(det):
            raise ZeroDivisionError("singular multiplication matrix")  # pragma: no cover
        # first column of the adjugate solves M z = det * e_0
        z = []
        for i in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(1, n)]
            d = self._det(minor) if n > 1 else R.const(1)
            z.append(R.neg(d) if i % 2 else d)
        return self._normalize([R.mul(den, zi) for zi in z], det)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def degree_size(self, a) -> int:
        """Largest polynomial degree in the representation (a size measure)."""
        return max([len(c) for c in a[0]] + [len(a[1])])

    # truncated power series over K, as lists of elements

    def s_add(self, A, B):
        return [self.add(x, y) for x, y in zip(A, B)]

    def s_sub(self, A, B):
        return [self.sub(x, y) for x, y in zip(A, B)]

    def s_mul(self, A, B, N: int | None = None):
        N = min(len(A), len(B)) if N is None else N
        out = [self.zero] * N
        for i in range(N):
            if self.is_zero(A[i]):
                continue
            for j in range(N - i):
                if not self.is_zero(B[j]):
                    out[i + j] = self.add(out[i + j], self.mul(A[i], B[j]))
        return out

    def s_inv(self, A):
        N = len(A)
        i0 = self.inv(A[0])
        out = [i0]
        for k in range(1, N):
            acc = self.zero
            for i in range(1, k + 1):
                if not self.is_zero(A[i]):
                    acc = self.add(acc, self.mul(A[i], out[k - i]))
            out.append(self.neg(self.mul(acc, i0)))
        return out

    def s_poly_of_shift(self, a, N: int):
        """``a(u + t)`` as a series over K for a polynomial ``a`` in ``u``."""
        return [self.from_poly(c) for c in self.R.shift_expand(a, N)]


def implicit_series(K: FunctionField, N: int):
    """Series ``W(t)`` in ``K[[t]]`` with ``G(u + t, W) = 0`` and ``W(0) = w``.

    Newton iteration with the derivative inverted once per step; ``G`` must be
    separable in ``w``.
    """
    R = K.R
    shiftedG = [K.s_poly_of_shift(g, N) for g in K.G]
    dG = [R.scale(K.G[e], e % K.F.p) if e % K.F.p else _EMPTY for e in range(1, K.n + 1)]
    shifted_dG = [K.s_poly_of_shift(g, N) for g in dG]
    W = [K.w()] + [K.zero] * (N - 1)
    prec = 1
    while True:
        powers = [[K.one] + [K.zero] * (N - 1)]
        for _ in range(K.n):
            powers.append(K.s_mul(powers[-1], W, N))
        val = [K.zero] * N
        der = [K.zero] * N
        for e in range(K.n + 1):
            val = K.s_add(val, K.s_mul(shiftedG[e], powers[e], N))
            if e < K.n:
                der = K.s_add(der, K.s_mul(shifted_dG[e], powers[e], N))
        if all(K.is_zero(v) for v in val):
            return W
        if prec >= 2 * N:
            raise ArithmeticError("implicit expansion did not converge")  # pragma: no cover
        step = K.s_mul(val, K.s_inv(der), N)
        W = K.s_sub(W, step)
        prec *= 2


def rank_profile(K: FunctionField, rows: list[list], max_cols: int | None = None,
                 target_rank: int | None = None) -> list[int]:
    """Pivot columns of a matrix over ``K`` (columns swept left to right)."""
    M = [list(r) for r in rows]
    R = len(M)
    N = len(M[0]) if R else 0
    if max_cols is not None:
        N = min(N, max_cols)
    target = R if target_rank is None else target_rank
    used = [False] * R
    piv = []
    for c in range(N):
        if len(piv) >= target:
            break
        pr = next((r for r in range(R) if not used[r] and not K.is_zero(M[r][c])), None)
        if pr is None:
            continue
        used[pr] = True
        piv.append(c)
        ip = K.inv(M[pr][c])
        prow = [K.mul(v, ip) if not K.is_zero(v) else v for v in M[pr]]
        for r in range(R):
            if used[r] or K.is_zero(M[r][c]):
                continue
            f = M[r][c]
            M[r] = [M[r][j] if j <= c else (M[r][j] if K.is_zero(prow[j]) else K.sub(M[r][j], K.mul(f, prow[j])))
                    for j in range(len(M[r]))]
            M[r][c] = K.zero
    return piv
