"""Polynomials, Hasse derivatives, truncated power series and pivot reduction.

Coefficients are field indices (see :mod:`maxcurve.gf`).  Univariate helpers
work on dense lists (low degree first); :class:`Poly` is a sparse multivariate
map used for curve equations.  :class:`Series` carries a batch of power series
in one ``numpy`` array so that many points can be expanded at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf import Field


class PrecisionError(ArithmeticError):
    """Raised when a truncated computation cannot certify its answer."""


def binom_mod_p(n: int, k: int, p: int) -> int:
    """Binomial coefficient modulo a prime via Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        out = out * _small_binom(a, b) % p
        n //= p
        k //= p
    return out


def _small_binom(a: int, b: int) -> int:
    from math import comb
    return comb(a, b)


# -- dense univariate polynomials -------------------------------------------

def ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        if c:
            out[i] = F.add(out[i], c)
    return ptrim(out)


def pneg(F: Field, a: Sequence[int]) -> list[int]:
    return [F.neg(c) for c in a]


def psub(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return padd(F, a, pneg(F, b))


def pscale(F: Field, a: Sequence[int], c: int) -> list[int]:
    if c == 0:
        return []
    return ptrim([F.mul(x, c) for x in a])


def pmul(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return ptrim(out)


def pdivmod(F: Field, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = ptrim(list(a))
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    inv = F.inv(b[-1])
    add, mul, neg = F.add, F.mul, F.neg
    for s in range(len(r) - 1 - db, -1, -1):
        c = r[s + db]
        if c:
            c = mul(c, inv)
            q[s] = c
            nc = neg(c)
            for i, bc in enumerate(b):
                if bc:
                    r[s + i] = add(r[s + i], mul(nc, bc))
    return ptrim(q), ptrim(r[:db])


def pmonic(F: Field, a: Sequence[int]) -> list[int]:
    a = ptrim(list(a))
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = ptrim(list(a)), ptrim(list(b))
    while b:
        a, b = b, pdivmod(F, a, b)[1]
    return pmonic(F, a)


def peval(F: Field, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ppow(F: Field, a: Sequence[int], e: int, modulus: Sequence[int] | None = None) -> list[int]:
    result = [1]
    base = list(a) if modulus is None else pdivmod(F, a, modulus)[1]
    while e:
        if e & 1:
            result = pmul(F, result, base)
            if modulus is not None:
                result = pdivmod(F, result, modulus)[1]
        e >>= 1
        if e:
            base = pmul(F, base, base)
            if modulus is not None:
                base = pdivmod(F, base, modulus)[1]
    return result


def phasse(F: Field, a: Sequence[int], i: int) -> list[int]:
    """i-th Hasse derivative of a dense univariate polynomial."""
    p = F.p
    out = []
    for n in range(i, len(a)):
        c = binom_mod_p(n, i, p)
        out.append(F.mul(a[n], c) if c and a[n] else 0)
    return ptrim(out)


def poly_mod_reduce(F: Field, f: Sequence[int], field_size: int) -> list[int]:
    """Remainder of ``f`` modulo ``y^Q - y`` with ``Q = field_size``."""
    Q = field_size
    out = [0] * min(len(f), Q)
    for e, c in enumerate(f):
        if not c:
            continue
        r = e if e < Q else (e - 1) % (Q - 1) + 1
        out[r] = F.add(out[r], c)
    return ptrim(out)


# -- sparse multivariate polynomials -----------------------------------------

class Poly:
    """Sparse polynomial in ``nvars`` variables; ``terms`` maps exponent tuples to nonzero indices."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, terms: dict | Iterable = (), nvars: int = 2):
        self.field = field
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], int] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            c = int(c)
            if c:
                prev = self.terms.get(exps, 0)
                s = field.add(prev, c)
                if s:
                    self.terms[exps] = s
                else:
                    self.terms.pop(exps, None)

    @classmethod
    def monomial(cls, field: Field, exps: tuple[int, ...], c: int = 1) -> "Poly":
        return cls(field, {tuple(exps): c}, nvars=len(exps))

    @classmethod
    def constant(cls, field: Field, c: int, nvars: int = 2) -> "Poly":
        return cls(field, {(0,) * nvars: c}, nvars=nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: int | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        out = Poly(self.field, dict(self.terms), self.nvars)
        F = self.field
        for e, c in other.terms.items():
            s = F.add(out.terms.get(e, 0), c)
            if s:
                out.terms[e] = s
            else:
                out.terms.pop(e, None)
        return out

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, {e: F.neg(c) for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        F = self.field
        if isinstance(other, int):
            return Poly(F, {e: F.mul(c, other) for e, c in self.terms.items()}, self.nvars)
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return Poly(F, {e: c for e, c in out.items() if c}, self.nvars)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(self.field, 1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms and self.nvars == other.nvars

    def __repr__(self) -> str:
        return f"Poly({dict(sorted(self.terms.items()))})"

    def partial(self, var: int) -> "Poly":
        return hasse_derivative(self, 1, var)

    def evaluate(self, point: Sequence[int], field: Field | None = None) -> int:
        """Evaluate at a point whose coordinates are indices of ``field`` (coefficients must embed)."""
        F = field or self.field
        conv = coefficient_map(self.field, F)
        acc = 0
        for e, c in self.terms.items():
            t = conv(c)
            for v, k in zip(point, e):
                if k:
                    t = F.mul(t, F.pow(v, k))
            acc = F.add(acc, t)
        return acc

    def vevaluate(self, coords: Sequence[np.ndarray], field: Field | None = None) -> np.ndarray:
        F = field or self.field
        conv = coefficient_map(self.field, F)
        coords = [np.asarray(c, dtype=np.int64) for c in coords]
        acc = np.zeros(np.broadcast(*coords).shape, dtype=np.int64)
        for e, c in self.terms.items():
            t = np.full(acc.shape, conv(c), dtype=np.int64)
            for v, k in zip(coords, e):
                if k:
                    t = F.vmul(t, F.vpow(v, k))
            acc = F.vadd(acc, t)
        return acc

    def coefficients_in_prime_field(self) -> bool:
        return all(c < self.field.p for c in self.terms.values())

    def to_field(self, F: Field) -> "Poly":
        conv = coefficient_map(self.field, F)
        return Poly(F, {e: conv(c) for e, c in self.terms.items()}, self.nvars)


def coefficient_map(src: Field, dst: Field):
    """Map from indices of ``src`` to indices of ``dst`` (identity for prime fields)."""
    if src is dst:
        return lambda c: c
    if src.k == 1 or dst.k == src.k:
        return lambda c: c
    from .gf import embedding
    return embedding(src, dst)


def hasse_derivative(f: Poly, i: int, var: int = 0) -> Poly:
    """i-th Hasse derivative of ``f`` with respect to variable ``var``."""
    if i < 0:
        raise ValueError("order must be nonnegative")
    F = f.field
    out = {}
    for e, c in f.terms.items():
        b = binom_mod_p(e[var], i, F.p)
        if b:
            ne = list(e)
            ne[var] -= i
            out[tuple(ne)] = F.mul(c, b)
    return Poly(F, out, f.nvars)


# -- batched truncated power series ------------------------------------------

def conv_trunc(F: Field, a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    """Truncated product of coefficient arrays along the last axis."""
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (N,)
    out = np.zeros(shape, dtype=np.int64)
    a = a[..., :N]
    b = b[..., :N]
    nb = b.shape[-1]
    for i in range(min(a.shape[-1], N)):
        ai = a[..., i:i + 1]
        if not ai.any():
            continue
        m = min(N - i, nb)
        out[..., i:i + m] = F.vadd(out[..., i:i + m], F.vmul(ai, b[..., :m]))
    return out


@dataclass
class Series:
    """``t**val * sum(coeffs[..., i] * t**i)`` known modulo ``t**(val + N)``.

    The leading axes of ``coeffs`` index a batch; every member of the batch
    shares ``val`` and the relative precision ``N``.
    """

    field: Field
    coeffs: np.ndarray
    val: int = 0

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)

    @property
    def N(self) -> int:
        return self.coeffs.shape[-1]

    @property
    def abs_precision(self) -> int:
        return self.val + self.N

    @classmethod
    def constant(cls, F: Field, c, N: int, batch: tuple = ()) -> "Series":
        arr = np.zeros(batch + (N,), dtype=np.int64)
        arr[..., 0] = c
        return cls(F, arr)

    @classmethod
    def variable(cls, F: Field, N: int, offset=0, batch: tuple = ()) -> "Series":
        """``offset + t``."""
        arr = np.zeros(batch + (N,), dtype=np.int64)
        arr[..., 0] = offset
        if N > 1:
            arr[..., 1] = 1
        return cls(F, arr)

    def _aligned(self, other: "Series") -> tuple[np.ndarray, np.ndarray, int]:
        v = min(self.val, other.val)
        prec = min(self.abs_precision, other.abs_precision) - v
        if prec <= 0:
            raise PrecisionError("no overlapping precision")

        def lift(s):
            shift = s.val - v
            arr = np.zeros(s.coeffs.shape[:-1] + (prec,), dtype=np.int64)
            take = max(0, min(s.N, prec - shift))
            arr[..., shift:shift + take] = s.coeffs[..., :take]
            return arr

        return lift(self), lift(other), v

    def __add__(self, other: "Series") -> "Series":
        a, b, v = self._aligned(other)
        return Series(self.field, self.field.vadd(a, b), v)

    def __sub__(self, other: "Series") -> "Series":
        a, b, v = self._aligned(other)
        return Series(self.field, self.field.vsub(a, b), v)

    def __neg__(self) -> "Series":
        return Series(self.field, self.field.vneg(self.coeffs), self.val)

    def __mul__(self, other) -> "Series":
        F = self.field
        if not isinstance(other, Series):
            c = np.asarray(other, dtype=np.int64)
            if c.ndim:
                c = c[..., None]
            return Series(F, F.vmul(self.coeffs, c), self.val)
        N = min(self.N, other.N)
        return Series(F, conv_trunc(F, self.coeffs, other.coeffs, N), self.val + other.val)

    __rmul__ = __mul__

    def shift(self, s: int) -> "Series":
        return Series(self.field, self.coeffs, self.val + s)

    def truncate(self, N: int) -> "Series":
        return Series(self.field, self.coeffs[..., :N], self.val)

    def inverse(self) -> "Series":
        F = self.field
        c0 = self.coeffs[..., 0]
        if np.any(c0 == 0):
            raise PrecisionError("series is not a unit at the leading coefficient")
        N = self.N
        b = F.vinv(c0)[..., None]
        prec = 1
        two = F.from_int(2)
        while prec < N:
            prec = min(2 * prec, N)
            a = self.coeffs[..., :prec]
            bb = np.zeros(b.shape[:-1] + (prec,), dtype=np.int64)
            bb[..., :b.shape[-1]] = b
            ab = conv_trunc(F, a, bb, prec)
            corr = F.vneg(ab)
            corr[..., 0] = F.vadd(corr[..., 0], two)
            b = conv_trunc(F, bb, corr, prec)
        return Series(F, b, -self.val)

    def __pow__(self, e: int) -> "Series":
        if e < 0:
            return self.inverse() ** (-e)
        result = Series.constant(self.field, 1, self.N, self.coeffs.shape[:-1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def hasse(self, i: int) -> "Series":
        """i-th Hasse derivative with respect to ``t`` (series must be regular)."""
        if self.val != 0:
            raise ValueError("Hasse derivative needs a series with val == 0")
        F = self.field
        N = self.N
        if i >= N:
            raise PrecisionError("derivative order exceeds precision")
        factors = np.array([binom_mod_p(n, i, F.p) for n in range(i, N)], dtype=np.int64)
        return Series(F, F.vmul(self.coeffs[..., i:], factors))

    def valuations(self) -> np.ndarray:
        """Per batch member: index of the first nonzero coefficient plus ``val`` (``abs_precision`` if none)."""
        nz = self.coeffs != 0
        first = np.where(nz.any(-1), nz.argmax(-1), self.N)
        return first + self.val

    def regular(self, N: int | None = None) -> np.ndarray:
        """Coefficient array of the series as an element of F[[t]] (requires ``val >= 0``)."""
        if self.val < 0:
            raise ValueError("series has a pole")
        N = self.abs_precision if N is None else N
        out = np.zeros(self.coeffs.shape[:-1] + (N,), dtype=np.int64)
        take = max(0, min(self.N, N - self.val))
        out[..., self.val:self.val + take] = self.coeffs[..., :take]
        return out


# -- pivot reduction -----------------------------------------------------------

@dataclass(frozen=True)
class PivotProfile:
    pivots: tuple[int, ...]

    def __iter__(self):
        return iter(self.pivots)

    def __len__(self):
        return len(self.pivots)


def pivot_columns(F: Field, M: np.ndarray, expect_full_rank: bool = False,
                  return_reduced: bool = False):
    """Batched pivot-column computation.

    ``M`` has shape ``(B, R, N)``.  Columns are swept left to right; a column is
    a pivot when some row not yet used has a nonzero entry there (first such row
    wins), and that row is then used to clear the column in the other unused rows.
    Returns an int array ``(B, R)`` of pivot columns in increasing order, padded
    with ``-1`` when the rank is smaller than ``R``.
    """
    M = np.array(M, dtype=np.int64, copy=True)
    B, R, N = M.shape
    used = np.zeros((B, R), dtype=bool)
    piv = np.full((B, R), -1, dtype=np.int64)
    count = np.zeros(B, dtype=np.int64)
    for c in range(N):
        active = count < R
        if not active.any():
            break
        cand = (M[:, :, c] != 0) & ~used
        has = cand.any(1) & active
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        prow = cand[sel].argmax(1)
        piv[sel, count[sel]] = c
        count[sel] += 1
        used[sel, prow] = True
        sub = M[sel]
        prow_vals = sub[np.arange(len(sel)), prow, :]
        pv = F.vinv(prow_vals[:, c])
        factors = F.vmul(sub[:, :, c], pv[:, None])
        factors[used[sel]] = 0
        upd = F.vmul(factors[:, :, None], prow_vals[:, None, c:])
        sub[:, :, c:] = F.vsub(sub[:, :, c:], upd)
        M[sel] = sub
    if expect_full_rank and np.any(count < R):
        bad = np.nonzero(count < R)[0]
        raise PrecisionError(f"rank deficient to the available precision at batch members {bad.tolist()[:5]}")
    if return_reduced:
        return piv, M
    return piv


def pivot_orders(rows, max_order: int | None = None, field: Field | None = None,
                 expect_full_rank: bool = False) -> PivotProfile:
    """Column indices at which the row space of the coefficient matrix gains rank."""
    if isinstance(rows, np.ndarray):
        if field is None:
            raise ValueError("field required for raw arrays")
        F, M = field, rows
    else:
        rows = list(rows)
        F = rows[0].field
        N = min(s.abs_precision for s in rows)
        M = np.stack([s.regular(N) for s in rows])
    if max_order is not None and M.shape[-1] < max_order + 1:
        raise PrecisionError(f"precision {M.shape[-1]} < max_order + 1 = {max_order + 1}")
    piv = pivot_columns(F, M[None], expect_full_rank=expect_full_rank)[0]
    return PivotProfile(tuple(int(c) for c in piv if c >= 0))


def series_det_valuation(F: Field, mat: np.ndarray) -> int:
    """Valuation of the determinant of a square matrix of truncated series.

    ``mat`` has shape ``(R, R, N)``.  Pivots are chosen with minimal valuation
    (a DVR elimination), so the determinant valuation is the sum of pivot
    valuations.  Raises :class:`PrecisionError` if a pivot cannot be located.
    """
    M = np.array(mat, dtype=np.int64, copy=True)
    R, _, N = M.shape
    rows = list(range(R))
    cols = list(range(R))
    total = 0
    prec = N
    for _ in range(R):
        best = None
        for r in rows:
            for c in cols:
                nz = np.nonzero(M[r, c, :prec])[0]
                if len(nz) and (best is None or nz[0] < best[0]):
                    best = (int(nz[0]), r, c)
        if best is None:
            raise PrecisionError("determinant valuation exceeds available precision")
        v, r, c = best
        total += v
        rows.remove(r)
        cols.remove(c)
        # pivot entry = t^v * unit; divide the pivot row by it, losing v terms
        unit = Series(F, M[r, c, v:prec]).inverse().coeffs
        prec -= v
        for r2 in rows:
            e = M[r2, c, :prec + v]
            if not e.any():
                continue
            q = conv_trunc(F, e[v:], unit, prec)  # e / pivot, valuation >= 0
            for c2 in cols:
                M[r2, c2, :prec] = F.vsub(M[r2, c2, :prec], conv_trunc(F, q, M[r, c2, :prec], prec))
            M[r2, c, :] = 0
    return total
