"""
Closed Forms

Standalone numeric formulas: genus-0 and genus-1 Hurwitz numbers, the
full-factorization counts of the infinite families, reduced-factorization
counts, arithmetic functions and the roots-of-unity identities.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Dict, Optional, Sequence, Tuple

import sympy
from sympy import divisors, totient

from .cyclo_gram import CycloNum, mobius_mu
from .group_table import ReflectionGroup
from .real_orbit_group import OrbitGroup, cartan_and_connection_index
from .wreath_core import CycleData, GroupSpec, WreathGroup
from ..utils.errors import InvalidParameterError, NotPqcError

if TYPE_CHECKING:
    from .parabolic import GeneralizedCycle, PqcClassification

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """A partition of n, parts kept weakly decreasing."""

    parts: Tuple[int, ...]

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Partition":
        if not parts:
            raise InvalidParameterError("A partition needs at least one part")
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise InvalidParameterError(f"Partition parts must be positive integers, got {list(parts)}")
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)


def _as_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"{what} is not integral: {value}")
    return value.numerator


def euler_phi(m: int) -> int:
    return int(totient(m))


def mobius(m: int) -> int:
    return mobius_mu(m)


def jordan_j2(m: int) -> int:
    """J_2(m) = sum over r | m of mu(m/r) r^2."""
    return sum(mobius(m // r) * r * r for r in divisors(m))


def elementary_symmetric(values: Sequence[int], j: int) -> int:
    if j == 0:
        return 1
    return sum(math.prod(c) for c in combinations(values, j))


def multinomial(total: int, parts: Sequence[int]) -> int:
    if sum(parts) != total or any(p < 0 for p in parts):
        return 0
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


@dataclass(frozen=True)
class ArithmeticData:
    m: int
    phi: int
    mobius_on_divisors: Dict[int, int]
    j2: int


def arithmetic_functions(m: int) -> ArithmeticData:
    """phi(m), mu on the divisors of m and J_2(m)."""
    if m < 1:
        raise InvalidParameterError(f"m must be positive, got {m}")
    return ArithmeticData(
        m=m,
        phi=euler_phi(m),
        mobius_on_divisors={d: mobius(d) for d in divisors(m)},
        j2=jordan_j2(m),
    )


def _weight(lam: Partition) -> Fraction:
    return math.prod((Fraction(p ** p, math.factorial(p - 1)) for p in lam.parts), start=Fraction(1))


def hurwitz_number(genus: int, lam: Sequence[int]) -> int:
    """
    Transitive Hurwitz numbers of genus 0 and 1.

    Args:
        genus: 0 or 1.
        lam: Cycle type.

    Returns:
        genus 0: (n+r-2)! n^(r-3) prod lam^lam/(lam-1)!
        genus 1: (1/24)(n+k)! prod lam^lam/(lam-1)! (n^k - n^(k-1) - sum_{i>=2} (i-2)! e_i n^(k-i))

    Raises:
        InvalidParameterError: For other genera or a malformed partition.

    Example:
        >>> hurwitz_number(0, [3])
        3
    """
    part = Partition.of(list(lam))
    n, k = part.n, part.k
    if genus == 0:
        value = math.factorial(n + k - 2) * Fraction(n) ** (k - 3) * _weight(part)
        return _as_int(value, "H0")
    if genus == 1:
        bracket = n ** k - n ** (k - 1) - sum(
            math.factorial(i - 2) * elementary_symmetric(part.parts, i) * n ** (k - i)
            for i in range(2, k + 1)
        )
        value = Fraction(math.factorial(n + k), 24) * _weight(part) * bracket
        return _as_int(value, "H1")
    raise InvalidParameterError(f"Only genus 0 and 1 are supported, got {genus}")


def ffull_closed_form(spec: GroupSpec, cycles: CycleData) -> int:
    """
    Minimum-length full factorization count for G(m,1,n) and G(m,m,n), m > 1.

    k is the number of cycles of the underlying permutation. For G(m,1,n)
    with a = gcd(colour, m):
        a = 1:  n (n+k-1) m^(k-1) H0(lambda)
        a != 1: n^2 (n+k)(n+k-1) m^k / 2 * phi(a)/a * H0(lambda)
    For G(m,m,n) with d = gcd(cycle colours, m):
        d = 1:  m^(k-1) H0(lambda)
        d != 1: m^(k+1) J2(d)/d^2 H1(lambda)

    Raises:
        InvalidParameterError: If spec is not G(m,1,n) or G(m,m,n) with m > 1.
    """
    m, p, n = spec.m, spec.p, spec.n
    if m == 1 or p not in (1, m):
        raise InvalidParameterError(
            f"No closed form for {spec.label}",
            suggestion="Use G(m,1,n) or G(m,m,n) with m > 1.",
        )
    lam = [c.length for c in cycles.cycles]
    k = len(lam)
    if p == 1:
        a = math.gcd(cycles.total_color, m)
        h0 = hurwitz_number(0, lam)
        if a == 1:
            value = Fraction(n * (n + k - 1) * h0) * Fraction(m) ** (k - 1)
        else:
            value = Fraction(n * n * (n + k) * (n + k - 1) * m ** k, 2) * Fraction(euler_phi(a), a) * h0
        return _as_int(value, "F^full")
    d = m
    for c in cycles.cycles:
        d = math.gcd(d, c.color)
    if d == 1:
        value = Fraction(m) ** (k - 1) * hurwitz_number(0, lam)
    else:
        value = Fraction(m ** (k + 1) * jordan_j2(d), d * d) * hurwitz_number(1, lam)
    return _as_int(value, "F^full")


def abc_fred(h: int, rank: int, order: int) -> int:
    """Reduced factorizations of a Coxeter element: h^n n! / #W."""
    return _as_int(Fraction(h ** rank * math.factorial(rank), order), "Fred")


def cycle_fred(cycle: "GeneralizedCycle", m: int) -> int:
    """Reduced factorization count of one generalized cycle of G(m,1,n) or G(m,m,n)."""
    from .parabolic import COLORED_CYCLE, COLOR_PAIR, PLAIN_CYCLE

    if cycle.kind == PLAIN_CYCLE:
        lam = cycle.lengths[0]
        return 1 if lam == 1 else lam ** (lam - 2)
    if cycle.kind == COLORED_CYCLE:
        lam = cycle.lengths[0]
        return lam ** lam
    if cycle.kind == COLOR_PAIR:
        a, b = cycle.lengths
        nu = a + b
        return m * (nu - 1) * multinomial(nu - 2, [a - 1, b - 1]) * a ** a * b ** b
    raise InvalidParameterError(f"No closed form for a generalized cycle of kind {cycle.kind}")


def fred_closed_form(classification: "PqcClassification", m: int) -> int:
    """
    Fred(g) by multinomial recombination of its generalized cycles.

    Raises:
        NotPqcError: If the classification is NotPqc.
    """
    if not classification.is_pqc:
        raise NotPqcError("Fred closed form needs a parabolic quasi-Coxeter element")
    lengths = [c.reflection_length for c in classification.generalized_cycles]
    total = multinomial(sum(lengths), lengths)
    for cycle in classification.generalized_cycles:
        total *= cycle_fred(cycle, m)
    return total


def reduced_count_prefactor(group: ReflectionGroup, g: int, classification: "PqcClassification") -> Fraction:
    """
    prod Fred(g_i) / lR(g_i)!, equal to Fred(g) / lR(g)!.

    Wreath groups use the per-cycle closed forms; orbit groups count reduced
    factorizations directly.
    """
    if isinstance(group, WreathGroup):
        out = Fraction(1)
        for cycle in classification.generalized_cycles:
            out *= Fraction(cycle_fred(cycle, group.spec.m), math.factorial(cycle.reflection_length))
        return out
    from .subgroup_lattice import count_tuples

    lr = group.lengths[g]
    return Fraction(count_tuples(group, g, lr), math.factorial(lr))


def _wreath_factor_index(spec: GroupSpec, cycle: "GeneralizedCycle") -> int:
    from .parabolic import COLORED_CYCLE, COLOR_PAIR

    if cycle.kind == COLORED_CYCLE:
        return 2
    if cycle.kind == COLOR_PAIR:
        return 4
    return cycle.lengths[0]


def wreath_connection_index(spec: GroupSpec) -> Optional[int]:
    """I(W) for the Weyl members of the family: S_n -> n, B_n -> 2, D_n -> 4."""
    if spec.m == 1:
        return spec.n
    if spec.m == 2 and spec.p == 1:
        return 2
    if spec.m == 2 and spec.p == 2 and spec.n >= 2:
        return 4
    return None


def relative_connection_indices(
    group: ReflectionGroup, g: int, classification: "PqcClassification"
) -> Optional[Tuple[int, int]]:
    """(I(W_g), I(W)) when the ambient is a Weyl group, else None."""
    if isinstance(group, WreathGroup):
        ambient = wreath_connection_index(group.spec)
        if ambient is None:
            return None
        closure = math.prod(_wreath_factor_index(group.spec, c) for c in classification.generalized_cycles)
        return closure, ambient
    if isinstance(group, OrbitGroup):
        data = cartan_and_connection_index(group)
        if data.connection_index is None:
            return None
        from .parabolic import parabolic_closure

        return group.subgroup_connection_index(parabolic_closure(group, g).mask), data.connection_index
    return None


def weyl_cardinality_form(order: int, rank: int, highest_root: Sequence[int], rgs_count: int) -> int:
    """F^full(id) = #RGS * n! * prod(c_i) * (2n)! / #W."""
    value = Fraction(rgs_count * math.factorial(rank) * math.prod(highest_root) * math.factorial(2 * rank), order)
    return _as_int(value, "Weyl cardinality form")


def chebyshev_t(s: int, x: sympy.Symbol) -> sympy.Poly:
    """T_s by the three-term recurrence T_{n+1} = 2x T_n - T_{n-1}."""
    prev, cur = sympy.Poly(1, x), sympy.Poly(x, x)
    if s == 0:
        return prev
    for _ in range(s - 1):
        prev, cur = cur, 2 * sympy.Poly(x, x) * cur - prev
    return cur


@dataclass
class ChebyshevCheck:
    s: int
    a_at_one: int
    a_prime_at_one: Fraction
    b_at_one: int
    b_prime_at_one: Fraction
    t_second_derivative_ok: bool
    ok: bool


def chebyshev_helpers(s: int) -> ChebyshevCheck:
    """
    a = (T_{s+1} - T_s)/(x-1) and b = (T_{s+1} - T_{s-1})/(x-1) at x = 1.

    Expected: a(1) = 2s+1, a'(1) = s(s+1)(2s+1)/3, b(1) = 4s, b'(1) = 2s(2s^2+1)/3.
    """
    if s < 1:
        raise InvalidParameterError(f"s must be positive, got {s}")
    x = sympy.Symbol("x")
    t_next, t_cur, t_prev = chebyshev_t(s + 1, x), chebyshev_t(s, x), chebyshev_t(s - 1, x)
    divisor = sympy.Poly(x - 1, x)
    a, rem_a = (t_next - t_cur).div(divisor)
    b, rem_b = (t_next - t_prev).div(divisor)

    def at_one(poly: sympy.Poly) -> Fraction:
        value = sympy.Rational(poly.eval(1))
        return Fraction(int(value.p), int(value.q))

    a1, da1 = at_one(a), at_one(a.diff(x))
    b1, db1 = at_one(b), at_one(b.diff(x))
    second = at_one(t_cur.diff(x).diff(x)) == Fraction(s * s * (s * s - 1), 3)
    ok = (
        rem_a.is_zero and rem_b.is_zero and second
        and a1 == 2 * s + 1 and da1 == Fraction(s * (s + 1) * (2 * s + 1), 3)
        and b1 == 4 * s and db1 == Fraction(2 * s * (2 * s * s + 1), 3)
        and at_one(t_cur) == 1 and at_one(t_cur.diff(x)) == s * s
    )
    return ChebyshevCheck(s, int(a1), da1, int(b1), db1, second, ok)


def generating_function_check(terms: int = 6) -> Dict[str, bool]:
    """
    Compare z-series coefficients with the recurrence.

    The classical generating function (1 - xz)/(1 - 2xz + z^2) matches; the
    variant with denominator 1 + x^2 - 2xz does not (its constant term is
    1/(1 + x^2) rather than T_0 = 1).
    """
    x, z = sympy.symbols("x z")
    results = {}
    for name, denominator in (("classical", 1 - 2 * x * z + z ** 2), ("printed", 1 + x ** 2 - 2 * x * z)):
        series = sympy.series((1 - x * z) / denominator, z, 0, terms).removeO()
        matches = all(
            sympy.simplify(series.coeff(z, n) - chebyshev_t(n, x).as_expr()) == 0 for n in range(terms)
        )
        results[name] = matches
    return results


@dataclass
class IdentityReport:
    """One conductor's check of both roots-of-unity identities."""

    m: int
    inverse_sum: Fraction
    expected_inverse_sum: Fraction
    real_part_sum: Fraction
    expected_real_part_sum: Fraction
    float_ok: bool
    exact_ok: bool
    cosine_product_ok: bool
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.float_ok and self.exact_ok and self.cosine_product_ok


EXACT = "exact"
NUMERIC = "float"
BOTH = "both"


def _cosine_product_ratio(m: int) -> Fraction:
    """Q_m'(1)/Q_m(1) minus the even-m correction, from the Chebyshev form of Q_m."""
    s = m // 2
    x = sympy.Symbol("x")
    if m % 2:
        numerator = chebyshev_t(s + 1, x) - chebyshev_t(s, x)
    else:
        numerator = chebyshev_t(s + 1, x) - chebyshev_t(s - 1, x)
    q, _ = numerator.div(sympy.Poly(x - 1, x))
    ratio = sympy.Rational(q.diff(x).eval(1)) / sympy.Rational(q.eval(1))
    value = Fraction(int(ratio.p), int(ratio.q))
    return value - (Fraction(1, 4) if m % 2 == 0 else 0)


def primitive_root_identities(m: int, check_mode: str = BOTH, tolerance: float = 1e-9) -> IdentityReport:
    """
    Sum over primitive m-th roots xi of 1/(1-xi) and of 1/(2-xi-conj(xi)).

    The exact path takes the field trace of a single value; the float path
    sums over the complex embeddings.

    Raises:
        InvalidParameterError: If m < 2 or the mode is unknown.
    """
    if m < 2:
        raise InvalidParameterError(f"m must be at least 2, got {m}")
    if check_mode not in (EXACT, NUMERIC, BOTH):
        raise InvalidParameterError(f"Unknown check mode {check_mode}", suggestion="Use exact, float or both.")
    expected_1 = Fraction(euler_phi(m), 2)
    expected_2 = Fraction(jordan_j2(m), 12)

    zeta = CycloNum.zeta(m)
    first_inverse = (1 - zeta).inverse()
    inverse_sum = first_inverse.trace()
    # 1/(2 - xi - conj(xi)) = -xi / (1 - xi)^2
    real_part_sum = (-zeta * first_inverse * first_inverse).trace()
    exact_ok = True
    if check_mode in (EXACT, BOTH):
        exact_ok = inverse_sum == expected_1 and real_part_sum == expected_2

    float_ok = True
    if check_mode in (NUMERIC, BOTH):
        roots = [cmath.exp(2j * math.pi * k / m) for k in range(1, m) if math.gcd(k, m) == 1]
        s1 = sum(1 / (1 - r) for r in roots)
        s2 = sum(1 / (2 - 2 * r.real) for r in roots)
        float_ok = abs(s1 - float(expected_1)) < tolerance and abs(s2 - float(expected_2)) < tolerance

    cosine_ok = True
    if m > 2:
        # full sum over nontrivial roots is (m^2 - 1)/12
        cosine_ok = _cosine_product_ratio(m) == Fraction(m * m - 1, 12)

    report = IdentityReport(
        m=m,
        inverse_sum=inverse_sum,
        expected_inverse_sum=expected_1,
        real_part_sum=real_part_sum,
        expected_real_part_sum=expected_2,
        float_ok=float_ok,
        exact_ok=exact_ok,
        cosine_product_ok=cosine_ok,
    )
    if not report.ok:
        logger.warning("Roots-of-unity identity failed at m = %d", m)
    return report
