"""Finite fields F_{p^k} in polynomial basis.

Elements are encoded as integer indices: the coefficient vector
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` maps to ``sum(c_i * p**i)``.  Prime
subfield elements therefore keep their integer value in every extension.

Arithmetic goes through discrete-log tables built from the deterministic
primitive element, with Zech logarithms for addition.  Each operation comes in
a scalar flavour (plain ``int``) and a vectorized flavour (``numpy`` arrays).
"""

from __future__ import annotations

import os
import threading
from functools import lru_cache

import numpy as np

DEFAULT_BUDGET = 1 << 20


class FieldError(ValueError):
    pass


def field_budget() -> int:
    env = os.environ.get("MAXCURVE_FIELD_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(n: int) -> tuple[int, int]:
    """Return ``(p, a)`` with ``n == p**a``; raise if ``n`` is not a prime power."""
    if n < 2:
        raise FieldError(f"{n} is not a prime power")
    fs = prime_factors(n)
    if len(fs) != 1:
        raise FieldError(f"{n} is not a prime power")
    p = fs[0]
    a = 0
    while n > 1:
        n //= p
        a += 1
    return p, a


# -- F_p[x] helpers (coefficient lists, low degree first) ---------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible_mod_p(f: list[int], p: int) -> bool:
    """Rabin's test for a monic ``f`` over F_p."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(j):
        return _ppowmod(x, p ** j, f, p)

    if _trim([(a - b) % p for a, b in _zip_pad(x_pow_p_pow(k), x)]):
        return False
    for ell in prime_factors(k):
        h = x_pow_p_pow(k // ell)
        diff = _trim([(a - b) % p for a, b in _zip_pad(h, x)])
        g = _pgcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``k`` whose low coefficients have the smallest index."""
    for idx in range(p ** k):
        low = [(idx // p ** i) % p for i in range(k)]
        f = low + [1]
        if k > 1 and low[0] == 0:
            continue
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# -- the field ---------------------------------------------------------------

class Field:
    """Descriptor and arithmetic tables for F_{p^k}.

    Use :func:`make_field`; direct construction bypasses the cache and the
    identity guarantee for equal ``(p, k)``.
    """

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.order = p ** k
        self.modulus = smallest_irreducible(p, k)
        n = self.order
        n1 = n - 1
        self._pw = [p ** i for i in range(k + 1)]

        self.digits = np.zeros((n, k), dtype=np.int64)
        rest = np.arange(n, dtype=np.int64)
        for i in range(k):
            self.digits[:, i] = rest % p
            rest //= p

        self.generator = self._find_primitive()
        mul_g = self._vmul_const(self.generator)
        exp = np.empty(2 * n1 + 1, dtype=np.int64)
        ml = mul_g.tolist()
        cur = 1
        seq = [0] * n1
        for i in range(n1):
            seq[i] = cur
            cur = ml[cur]
        exp[:n1] = seq
        exp[n1:2 * n1] = seq
        exp[2 * n1] = seq[0]
        log = np.full(n, -1, dtype=np.int64)
        log[exp[:n1]] = np.arange(n1, dtype=np.int64)
        self.exp_table = exp
        self.log_table = log

        # zech[d] = log(1 + g^d), -1 when 1 + g^d == 0
        e = exp[:n1]
        c0 = e % p
        one_plus = np.where(c0 == p - 1, e - (p - 1), e + 1)
        self.zech_table = log[one_plus]

        neg_digits = (-self.digits) % p
        self.neg_table = neg_digits @ np.array(self._pw[:k], dtype=np.int64)

        self._exp = exp.tolist()
        self._log = log.tolist()
        self._zech = self.zech_table.tolist()
        self._neg = self.neg_table.tolist()
        self._sub_lock = threading.Lock()

    # -- construction helpers

    def _vmul_const(self, g: int) -> np.ndarray:
        """Multiply every element of the field by ``g`` (vectorized polynomial product)."""
        p, k = self.p, self.k
        gd = [(g // p ** i) % p for i in range(k)]
        cols = [np.zeros(self.order, dtype=np.int64) for _ in range(2 * k - 1)]
        for i, gi in enumerate(gd):
            if gi:
                for j in range(k):
                    cols[i + j] += gi * self.digits[:, j]
        mod = self.modulus
        for top in range(2 * k - 2, k - 1, -1):
            c = cols[top] % p
            if not c.any():
                continue
            for i in range(k):
                if mod[i]:
                    cols[top - k + i] -= c * mod[i]
        out = np.zeros(self.order, dtype=np.int64)
        for j in range(k - 1, -1, -1):
            out = out * p + cols[j] % p
        return out

    def _to_poly(self, a: int) -> list[int]:
        return [(a // self._pw[i]) % self.p for i in range(self.k)]

    def _from_poly(self, c) -> int:
        return sum(int(ci) % self.p * self._pw[i] for i, ci in enumerate(c))

    def _find_primitive(self) -> int:
        n1 = self.order - 1
        if n1 == 1:
            return 1
        primes = prime_factors(n1)
        mod = list(self.modulus)
        for g in range(1, self.order):
            gp = self._to_poly(g)
            if all(_trim(_ppowmod(gp, n1 // ell, mod, self.p)) != [1] for ell in primes):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    # -- scalar arithmetic on indices

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.k == 1:
            c = a + b
            return c - self.p if c >= self.p else c
        if self.p == 2:
            return a ^ b
        la = self._log[a]
        d = self._log[b] - la
        if d < 0:
            d += self.order - 1
        z = self._zech[d]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        la = self._log[a]
        return self._exp[(self.order - 1 - la) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def from_int(self, c: int) -> int:
        """Image of the integer ``c`` in the prime subfield."""
        return c % self.p

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, e: int) -> int:
        return self._exp[e % (self.order - 1)]

    def frobenius(self, a: int, e: int = 1) -> int:
        """``a ** (p ** e)``."""
        return self.pow(a, pow(self.p, e, self.order - 1) if self.order > 2 else 1)

    def elements(self) -> range:
        return range(self.order)

    # -- vectorized arithmetic on index arrays

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        n1 = self.order - 1
        la = self.log_table[a]
        d = (self.log_table[b] - la) % n1
        z = self.zech_table[d]
        res = np.where(z < 0, 0, self.exp_table[np.where(z < 0, 0, la + z)])
        res = np.where(b == 0, a, res)
        return np.where(a == 0, b, res)

    def vneg(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        res = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, res)

    def vsum(self, a, axis: int = -1):
        """Field sum along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        d = self.digits[a].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return d @ np.array(self._pw[:self.k], dtype=np.int64)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        n1 = self.order - 1
        return self.exp_table[(n1 - self.log_table[a]) % n1]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        n1 = self.order - 1
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        res = self.exp_table[(self.log_table[a] * (e % n1)) % n1]
        return np.where(a == 0, 0, res)

    def vtrace(self, a, sub_order: int):
        """Trace to the subfield of size ``sub_order``, as indices of this field."""
        a = np.asarray(a, dtype=np.int64)
        d = _degree_ratio(self.order, sub_order)
        acc = np.zeros_like(a)
        cur = a
        for _ in range(d):
            acc = self.vadd(acc, cur)
            cur = self.vpow(cur, sub_order)
        return acc

    def all_elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    # -- misc

    def element(self, index: int) -> "FieldElement":
        return FieldElement(self, index)

    def is_subfield_size(self, size: int) -> bool:
        try:
            _degree_ratio(self.order, size)
        except FieldError:
            return False
        return True

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k})"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "order": self.order, "modulus": list(self.modulus)}

    def __reduce__(self):
        return (make_field, (self.p, self.k))


def _degree_ratio(big: int, small: int) -> int:
    p, a = prime_power(big)
    p2, b = prime_power(small)
    if p != p2 or a % b:
        raise FieldError(f"F_{small} is not a subfield of F_{big}")
    return a // b


@lru_cache(maxsize=None)
def _make_field(p: int, k: int) -> Field:
    return Field(p, k)


_make_lock = threading.Lock()


def make_field(p: int, k: int, budget: int | None = None) -> Field:
    """Return the (cached) descriptor for F_{p^k}."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be positive")
    limit = field_budget() if budget is None else budget
    if p ** k > limit:
        raise FieldError(f"field size {p}^{k} exceeds budget {limit}")
    with _make_lock:
        return _make_field(p, k)


def field_of_order(order: int, budget: int | None = None) -> Field:
    p, k = prime_power(order)
    return make_field(p, k, budget)


class FieldElement:
    """An element of a :class:`Field`, with operator overloading."""

    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        self.field = field
        self.index = int(index)

    @property
    def coeffs(self) -> list[int]:
        return self.field._to_poly(self.index)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.index
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.index, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.index, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o, self.index))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.index, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.index, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(o, self.index))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.order, self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"F{self.field.order}({self.index})"

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.index, e))

    def multiplicative_order(self) -> int:
        if self.index == 0:
            raise ValueError("zero has no multiplicative order")
        from math import gcd
        n1 = self.field.order - 1
        return n1 // gcd(n1, self.field.log(self.index))


# -- embeddings, traces, primitive elements ------------------------------------

class Embedding:
    """Ring homomorphism F_{p^j} -> F_{p^k} sending the source generator ``x`` to a root."""

    def __init__(self, source: Field, target: Field):
        if source.p != target.p or target.k % source.k:
            raise FieldError(f"{source} does not embed in {target}")
        self.source = source
        self.target = target
        self.image_of_generator = self._find_root()
        powers = [1]
        for _ in range(1, source.k):
            powers.append(target.mul(powers[-1], self.image_of_generator))
        self._powers = powers
        imgs = np.zeros(source.order, dtype=np.int64)
        for i in range(source.k):
            term = np.array([target.mul(target.from_int(c), powers[i]) for c in range(source.p)], dtype=np.int64)
            imgs = target.vadd(imgs, term[source.digits[:, i]])
        self.table = imgs
        self._inverse = {int(v): i for i, v in enumerate(imgs.tolist())}

    def _find_root(self) -> int:
        t = self.target
        mod = self.source.modulus
        if self.source.k == 1:
            return 0  # the modulus x has root 0 (prime field convention)
        xs = t.all_elements()
        acc = np.zeros_like(xs)
        for c in reversed(mod):
            acc = t.vadd(t.vmul(acc, xs), c)
        roots = np.nonzero(acc == 0)[0]
        if len(roots) == 0:
            raise FieldError("source modulus has no root in target")  # pragma: no cover
        return int(roots[0])

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def preimage(self, b: int) -> int:
        try:
            return self._inverse[int(b)]
        except KeyError:
            raise FieldError(f"{b} is not in the image of {self.source}") from None


_emb_cache: dict[tuple[int, int, int], Embedding] = {}
_emb_lock = threading.Lock()


def embedding(source: Field, target: Field) -> Embedding:
    key = (source.p, source.k, target.k)
    emb = _emb_cache.get(key)
    if emb is None:
        emb = Embedding(source, target)
        with _emb_lock:
            emb = _emb_cache.setdefault(key, emb)
    return emb


def trace(a: FieldElement, sub: Field) -> FieldElement:
    """Relative trace from ``a.field`` down to the subfield ``sub``."""
    F = a.field
    d = _degree_ratio(F.order, sub.order)
    acc = 0
    cur = a.index
    for _ in range(d):
        acc = F.add(acc, cur)
        cur = F.pow(cur, sub.order)
    return FieldElement(sub, embedding(sub, F).preimage(acc))


def norm(a: FieldElement, sub: Field) -> FieldElement:
    F = a.field
    d = _degree_ratio(F.order, sub.order)
    e = sum(sub.order ** i for i in range(d))
    return FieldElement(sub, embedding(sub, F).preimage(F.pow(a.index, e)))


def frobenius(a: FieldElement, e: int = 1) -> FieldElement:
    return a.frobenius(e)


def primitive_element(field: Field) -> FieldElement:
    return FieldElement(field, field.generator)


def enumerate_all(field: Field) -> list[FieldElement]:
    return [FieldElement(field, i) for i in range(field.order)]


def subfield_indices(field: Field, sub_order: int) -> np.ndarray:
    """Indices (in ``field``) of the elements of the subfield with ``sub_order`` elements."""
    _degree_ratio(field.order, sub_order)
    xs = field.all_elements()
    return xs[field.vpow(xs, sub_order) == xs]
