"""Numerical semigroups: gaps, symmetry, and the gap-set combinatorics used for
Weierstrass semigroups of maximal curves of genus (q-1)^2/4."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd
from typing import Iterable


class SemigroupError(ValueError):
    pass


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple[int, ...]
    gaps: tuple[int, ...]

    @property
    def genus(self) -> int:
        return len(self.gaps)

    @property
    def frobenius(self) -> int:
        return self.gaps[-1] if self.gaps else -1

    @property
    def conductor(self) -> int:
        return self.frobenius + 1

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n > self.frobenius:
            return True
        return n not in self._gapset

    @cached_property
    def _gapset(self) -> frozenset[int]:
        return frozenset(self.gaps)

    def nongap(self, i: int) -> int:
        """The i-th non-gap ``m_i`` (``m_0 = 0``)."""
        if i < 0:
            raise IndexError(i)
        n = -1
        count = -1
        while count < i:
            n += 1
            if n in self:
                count += 1
        return n

    def nongaps_upto(self, bound: int) -> list[int]:
        return [n for n in range(bound + 1) if n in self]

    def count_upto(self, bound: int) -> int:
        return len(self.nongaps_upto(bound))

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "gaps": list(self.gaps),
            "genus": self.genus,
            "frobenius": self.frobenius,
            "symmetric": is_symmetric(self),
        }


def from_generators(gens: Iterable[int]) -> NumericalSemigroup:
    gens = tuple(sorted(set(int(g) for g in gens if int(g) != 0)))
    if not gens or any(g < 0 for g in gens):
        raise SemigroupError("generators must be positive integers")
    if reduce(gcd, gens) != 1:
        raise SemigroupError(f"gcd{gens} != 1: infinitely many gaps")
    if gens[0] == 1:
        return NumericalSemigroup(gens, ())
    a = gens[0]
    if len(gens) == 2:
        limit = (gens[0] - 1) * (gens[1] - 1) + a
    else:
        limit = None
    member = [True]
    run = 0
    n = 0
    # sieve until a run of ``a`` consecutive members certifies the conductor
    while True:
        n += 1
        m = any(n >= g and member[n - g] for g in gens)
        member.append(m)
        run = run + 1 if m else 0
        if run >= a or (limit is not None and n >= limit):
            break
    gaps = tuple(i for i, m in enumerate(member) if not m)
    return NumericalSemigroup(gens, gaps)


def is_symmetric(S: NumericalSemigroup) -> bool:
    F = S.frobenius
    if F < 0:
        return False
    return all((n in S) != ((F - n) in S) for n in range(F + 1))


def two_generator_genus(r: int, s: int) -> int:
    """``(r-1)(s-1)/2``, cross-checked against the sieve."""
    if r <= 0 or s <= 0 or gcd(r, s) != 1:
        raise SemigroupError(f"gcd({r}, {s}) != 1")
    g = (r - 1) * (s - 1) // 2
    sieved = from_generators((r, s)).genus
    if sieved != g:
        raise AssertionError(f"closed form {g} != sieve {sieved} for <{r},{s}>")  # pragma: no cover
    return g


def is_semigroup_complement(excluded: Iterable[int]) -> bool:
    """Whether N minus a finite set ``excluded`` (of positive integers) is closed under addition."""
    ex = set(excluded)
    if 0 in ex:
        return False
    if not ex:
        return True
    bound = 2 * max(ex)
    members = [n for n in range(bound + 1) if n not in ex]
    for i, a in enumerate(members):
        for b in members[i:]:
            if a + b > bound:
                break
            if a + b in ex:
                return False
    return True


@dataclass(frozen=True)
class GapStructure:
    q: int
    j: int
    S: tuple[int, ...]
    excluded: tuple[int, ...]  # 1 + S(j), the complement of H(j)
    is_semigroup: bool

    @property
    def size(self) -> int:
        return len(self.S)

    def to_dict(self) -> dict:
        return {"q": self.q, "j": self.j, "S": list(self.S), "size": self.size,
                "H_complement": list(self.excluded), "H_is_semigroup": self.is_semigroup}


def _check_odd_q(q: int, j: int) -> None:
    if q % 2 == 0 or q < 5:
        raise SemigroupError("q must be odd and at least 5")
    if not 2 <= j <= q - 1:
        raise SemigroupError("need 2 <= j <= q-1")


def lemma33_S(q: int, j: int) -> GapStructure:
    """``S(j) = {a + b*j + c*q : a+b+c <= (q-3)/2}`` and ``H(j) = N \\ (1 + S(j))``."""
    _check_odd_q(q, j)
    h = (q - 3) // 2
    S = sorted({a + b * j + c * q
                for a in range(h + 1) for b in range(h + 1 - a) for c in range(h + 1 - a - b)})
    excluded = tuple(1 + s for s in S)
    return GapStructure(q, j, tuple(S), excluded, is_semigroup_complement(excluded))


def lemma33_tenpoint_S(q: int, j: int) -> dict:
    """The orders ``{0,1,2,j,j+1,2j,q,q+1,q+j,2q}`` collapsed to a set, with the ``#S <= 9`` test."""
    _check_odd_q(q, j)
    S = sorted({0, 1, 2, j, j + 1, 2 * j, q, q + 1, q + j, 2 * q})
    return {"q": q, "j": j, "S": S, "size": len(S), "eliminated": len(S) > 9}


def lemma32_semigroups(q: int) -> tuple[NumericalSemigroup, NumericalSemigroup]:
    """``H1 = <q-1, q, q+1>`` and ``H2 = <(q+1)/2, q>``."""
    if q % 2 == 0 or q < 3:
        raise SemigroupError("q must be odd")
    return from_generators((q - 1, q, q + 1)), from_generators(((q + 1) // 2, q))
