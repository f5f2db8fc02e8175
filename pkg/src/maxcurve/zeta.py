"""L-polynomials from point counts, maximality certificates and genus bounds.

Convention: ``L(t) = prod(1 - a_i t)`` so that ``N_i = l**i + 1 - sum(a_i**i)``.
The characteristic polynomial of Frobenius on the Jacobian is the reciprocal
``h(t) = t**(2g) * L(1/t)``; for a maximal curve over F_{q^2} it is
``(t + q)**(2g)``.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt


class ZetaError(ValueError):
    pass


@dataclass(frozen=True)
class LPolynomial:
    coeffs: tuple[int, ...]  # c_0 = 1, ..., c_{2g}
    ell: int
    genus: int

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.genus + 1 or self.coeffs[0] != 1:
            raise ZetaError("malformed L-polynomial")

    def h(self) -> tuple[int, ...]:
        """Coefficients (constant term first) of ``t**(2g) L(1/t)``."""
        return tuple(reversed(self.coeffs))

    def power_sum(self, i: int) -> int:
        return power_sums_from_coeffs(self.coeffs, i)[i - 1]

    def count(self, i: int) -> int:
        """Number of points over F_{l^i} predicted by this polynomial."""
        return self.ell ** i + 1 - self.power_sum(i)

    def functional_equation_holds(self) -> bool:
        g, c, l = self.genus, self.coeffs, self.ell
        return all(c[2 * g - i] == l ** (g - i) * c[i] for i in range(g + 1))

    def base_change(self, i: int) -> "LPolynomial":
        """The L-polynomial over F_{l^i}, rebuilt from the i-th power sums."""
        g = self.genus
        sums = [power_sums_from_coeffs(self.coeffs, i * j)[i * j - 1] for j in range(1, 2 * g + 1)]
        coeffs = coeffs_from_power_sums(sums, 2 * g)
        return LPolynomial(tuple(coeffs), self.ell ** i, g)

    def to_dict(self) -> dict:
        return {"L": list(self.coeffs), "h": list(self.h()), "ell": self.ell, "genus": self.genus}


def power_sums_from_coeffs(coeffs, n: int) -> list[int]:
    """Power sums ``s_1..s_n`` of the reciprocal roots of ``sum(c_k t^k)`` (c_0 = 1).

    Newton's identities for ``prod(1 - a_i t)``: ``s_k = -k c_k - sum_{j<k} c_j s_{k-j}``.
    """
    c = list(coeffs)
    s = []
    for k in range(1, n + 1):
        ck = c[k] if k < len(c) else 0
        acc = -k * ck
        for j in range(1, k):
            cj = c[j] if j < len(c) else 0
            acc -= cj * s[k - j - 1]
        s.append(acc)
    return s


def coeffs_from_power_sums(sums, degree: int) -> list[int]:
    """Inverse of :func:`power_sums_from_coeffs` for the first ``degree`` coefficients."""
    c = [1]
    for k in range(1, degree + 1):
        acc = -sums[k - 1]
        for j in range(1, k):
            acc -= c[j] * sums[k - j - 1]
        if acc % k:
            raise ZetaError(f"non-integral coefficient at degree {k}: inconsistent counts")
        c.append(acc // k)
    return c


def weil_interval(ell: int, g: int, i: int) -> tuple[int, int]:
    """Integer bounds for ``N_i``: ``|N_i - l^i - 1| <= 2g sqrt(l^i)`` (floor of the radius)."""
    radius = isqrt(4 * g * g * ell ** i)
    return ell ** i + 1 - radius, ell ** i + 1 + radius


def lpoly_from_counts(counts, ell: int, g: int) -> LPolynomial:
    counts = list(counts)
    if len(counts) != g:
        raise ZetaError(f"need exactly g={g} counts, got {len(counts)}")
    for i, n in enumerate(counts, 1):
        lo, hi = weil_interval(ell, g, i)
        if not lo <= n <= hi:
            raise ZetaError(f"N_{i} = {n} violates the Weil bound [{lo}, {hi}]")
    sums = [ell ** i + 1 - n for i, n in enumerate(counts, 1)]
    low = coeffs_from_power_sums(sums, g)
    coeffs = low + [0] * g
    for i in range(g + 1):
        coeffs[2 * g - i] = ell ** (g - i) * low[i]
    L = LPolynomial(tuple(coeffs), ell, g)
    if [L.count(i) for i in range(1, g + 1)] != counts:
        raise ZetaError("reconstructed polynomial does not reproduce the counts")  # pragma: no cover
    return L


def maximal_lpoly(q: int, g: int) -> LPolynomial:
    """``(1 + q t)^{2g}`` over F_{q^2}."""
    return LPolynomial(tuple(comb(2 * g, i) * q ** i for i in range(2 * g + 1)), q * q, g)


def base_change_power_sums(L: LPolynomial, i: int) -> int:
    """``sum(a_j ** i)`` over the reciprocal roots, by Newton's identities."""
    if i < 1:
        raise ZetaError("i must be positive")
    return L.power_sum(i)


def factor_power_sum(coeffs, i: int) -> int:
    """Power sum of the roots of a monic integer polynomial given constant-term-first.

    E.g. ``t^2 + 3t + 3`` is ``(3, 3, 1)``; its roots are the Frobenius eigenvalues.
    """
    coeffs = list(coeffs)
    deg = len(coeffs) - 1
    if coeffs[-1] != 1:
        raise ZetaError("polynomial must be monic")
    # roots of h are the reciprocal roots of the reversed polynomial
    rev = list(reversed(coeffs))
    return power_sums_from_coeffs(rev, i)[i - 1] if deg else 0


# -- certificates and bounds ----------------------------------------------------

@dataclass
class MaximalityCertificate:
    count: int
    expected: int
    maximal: bool
    q: int
    genus: int
    field_size: int
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"count": self.count, "expected": self.expected, "maximal": self.maximal,
             "q": self.q, "genus": self.genus, "field_size": self.field_size}
        d.update(self.extra)
        return d


def hasse_weil_upper(q: int, g: int) -> int:
    return q * q + 1 + 2 * g * q


def ihara_bound(q: int) -> Fraction:
    return Fraction((q - 1) * q, 2)


def ft_dichotomy(q: int, g: int) -> bool:
    return Fraction(g) <= Fraction((q - 1) ** 2, 4) or 2 * g == (q - 1) * q


def castelnuovo(q: int, n: int) -> dict:
    """Castelnuovo bound for ``|(q+1)P0|`` of dimension ``n+1``: ``2g <= M (q - n + e)``."""
    if n < 1:
        raise ZetaError("n must be positive")
    M = q // n
    e = q - M * n
    bound_2g = M * (q - n + e)
    if n % 2 == 0:
        closed = Fraction((2 * q - n) ** 2, 4 * n)
    else:
        closed = Fraction((2 * q - n) ** 2 - 1, 4 * n)
    return {"M": M, "e": e, "two_g_bound": bound_2g, "g_bound": Fraction(bound_2g, 2),
            "closed_form_two_g": closed}


def lewittes_bound(q: int, m1: int) -> Fraction:
    return Fraction((m1 - 1) * q, 2)


@dataclass
class BoundReport:
    q: int
    g: int | None
    n: int | None
    m1: int | None
    values: dict
    checks: dict

    def to_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "n": self.n, "m1": self.m1,
                "values": _jsonable(self.values), "checks": _jsonable(self.checks)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def bounds_report(q: int, g: int | None = None, n: int | None = None, m1: int | None = None) -> BoundReport:
    values: dict = {"ihara": ihara_bound(q), "ft_small": Fraction((q - 1) ** 2, 4)}
    checks: dict = {}
    if g is not None:
        values["weil"] = hasse_weil_upper(q, g)
        checks["ihara"] = {"holds": g <= values["ihara"], "slack": values["ihara"] - g}
        checks["ft_dichotomy"] = {"holds": ft_dichotomy(q, g)}
    if n is not None:
        cas = castelnuovo(q, n)
        values["castelnuovo"] = cas
        if g is not None:
            checks["castelnuovo"] = {"holds": 2 * g <= cas["two_g_bound"],
                                     "slack": cas["two_g_bound"] - 2 * g,
                                     "closed_form_agrees": cas["two_g_bound"] <= cas["closed_form_two_g"]}
    if m1 is not None:
        values["lewittes"] = lewittes_bound(q, m1)
        if g is not None:
            checks["lewittes"] = {"holds": g <= values["lewittes"], "slack": values["lewittes"] - g}
    return BoundReport(q, g, n, m1, values, checks)


def is_power_of(q: int, base: int) -> bool:
    if q < 1:
        return False
    while q % base == 0:
        q //= base
    return q == 1


def scholium_predicate(q: int, g: int) -> dict:
    """Genus window ``(q^2-3q+2)/4 < g <= (q-1)^2/4`` under the congruence hypotheses.

    The hypothesis sentence is ambiguous; both parses are reported.  The
    ``primary`` reading takes the conditions as: q odd, q not a power of 3,
    and q not congruent to 3 mod 4.  The ``literal`` reading negates the last
    one (q congruent to 3 mod 4).
    """
    lo = Fraction(q * q - 3 * q + 2, 4)
    hi = Fraction((q - 1) ** 2, 4)
    in_window = lo < g <= hi
    odd = q % 2 == 1
    pow3 = is_power_of(q, 3)
    readings = {
        "primary": odd and not pow3 and q % 4 != 3,
        "literal": odd and not pow3 and q % 4 == 3,
    }
    out = {"q": q, "g": g, "window": [str(lo), str(hi)], "in_window": in_window,
           "readings": {}}
    for name, applicable in readings.items():
        if not applicable:
            state = "not_applicable"
            holds = None
        elif not in_window:
            state = "no_conclusion"
            holds = None
        else:
            state = "conclusion"
            holds = Fraction(g) == hi
        out["readings"][name] = {"hypotheses_hold": applicable, "state": state,
                                 "conclusion_g": str(hi), "holds": holds}
    out["state"] = out["readings"]["primary"]["state"]
    out["holds"] = out["readings"]["primary"]["holds"]
    return out


# -- curve-level wrappers ---------------------------------------------------------

def curve_lpoly(c, ext: int = 1) -> LPolynomial:
    """L-polynomial of ``c`` over ``F_{|k|^ext}`` from ``g`` enumerated counts."""
    from .curve import count_points
    g = c.genus
    counts = [count_points(c, ext * i) for i in range(1, g + 1)]
    return lpoly_from_counts(counts, c.base_order ** ext, g)


def certify_maximal(c, method: str = "auto") -> MaximalityCertificate:
    """Count points over the maximality field and compare with ``q^2 + 1 + 2gq``."""
    from .curve import count_points
    if c.family == "ree":
        raise ZetaError("the Ree model is count-only; use ree_genus_report")
    ext, q = c.maximal_target()
    N = count_points(c, ext, method)
    expected = hasse_weil_upper(q, c.genus)
    extra = {"base_field": c.base_order, "extension": ext}
    if ext > 1 and c.genus <= 4:
        # route through power sums over the base field
        L = curve_lpoly(c)
        extra["lpoly_base"] = L.to_dict()
        extra["count_from_lpoly"] = L.count(ext)
        extra["lpoly_target_is_maximal"] = L.base_change(ext).coeffs == maximal_lpoly(q, c.genus).coeffs
    return MaximalityCertificate(N, expected, N == expected, q, c.genus, q * q, extra)
