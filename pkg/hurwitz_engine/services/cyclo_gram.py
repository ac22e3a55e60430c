"""
Cyclotomic Arithmetic and Grammian Determinants

Exact arithmetic in Q(zeta_m), canonical root/coroot choices for the
reflections of an enumerated group, Gram determinants of root families and
the two right-hand sides of the main counting theorem.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy import Poly, QQ, cyclotomic_poly, totient

from .group_table import ReflectionGroup
from .real_orbit_group import OrbitGroup
from .wreath_core import DIAGONAL, WreathGroup
from ..utils.errors import InvalidParameterError, NotPqcError, NotWellGeneratedError

logger = logging.getLogger(__name__)

_Z = sympy.Symbol("z")

Number = Union["CycloNum", Fraction, int]


@lru_cache(maxsize=None)
def _modulus(m: int) -> Poly:
    return Poly(cyclotomic_poly(m, _Z), _Z, domain=QQ)


@lru_cache(maxsize=None)
def mobius_mu(n: int) -> int:
    exponents = sympy.factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


@lru_cache(maxsize=None)
def _power_trace(m: int, k: int) -> int:
    """Tr_{Q(zeta_m)/Q}(zeta_m^k), a Ramanujan sum."""
    g = math.gcd(k, m)
    q = m // g
    return mobius_mu(q) * int(totient(m)) // int(totient(q))


class CycloNum:
    """
    An element of the m-th cyclotomic field.

    Stored as a rational polynomial in zeta reduced modulo the m-th cyclotomic
    polynomial, so every value has a unique representative and zero tests are
    exact.

    Example:
        >>> w = CycloNum.zeta(3)
        >>> (1 / (1 - w) + 1 / (1 - w.conj())).to_fraction()
        Fraction(1, 1)
    """

    __slots__ = ("m", "_poly")

    def __init__(self, m: int, poly: Optional[Poly] = None):
        if m < 1:
            raise InvalidParameterError(f"Conductor must be positive, got {m}")
        self.m = m
        if poly is None:
            poly = Poly(0, _Z, domain=QQ)
        self._poly = poly.rem(_modulus(m))

    @classmethod
    def from_rational(cls, m: int, value: Union[int, Fraction]) -> "CycloNum":
        value = Fraction(value)
        return cls(m, Poly(sympy.Rational(value.numerator, value.denominator), _Z, domain=QQ))

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycloNum":
        return cls(m, Poly(_Z ** (k % m), _Z, domain=QQ))

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """Coefficients of 1, zeta, zeta^2, ... of the reduced representative."""
        if self._poly.is_zero:
            return ()
        out = []
        for c in reversed(self._poly.all_coeffs()):
            c = sympy.Rational(c)
            out.append(Fraction(int(c.p), int(c.q)))
        return tuple(out)

    def _coerce(self, other: Any) -> Optional["CycloNum"]:
        if isinstance(other, CycloNum):
            if other.m != self.m:
                raise InvalidParameterError(f"Cannot mix conductors {self.m} and {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.from_rational(self.m, other)
        return None

    def __add__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloNum(self.m, self._poly + o._poly)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloNum(self.m, self._poly - o._poly)

    def __rsub__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.m, -self._poly)

    def __mul__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloNum(self.m, self._poly * o._poly)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("CycloNum division by zero")
        return CycloNum(self.m, self._poly.invert(_modulus(self.m)))

    def __truediv__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "CycloNum":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other: Any) -> bool:
        try:
            o = self._coerce(other)
        except InvalidParameterError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloNum({self.m}, {self._poly.as_expr()})"

    def __str__(self) -> str:
        return str(self._poly.as_expr()).replace("z", f"zeta{self.m}")

    def is_zero(self) -> bool:
        return self._poly.is_zero

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvalidParameterError(f"{self} is not rational")
        coeffs = self.coeffs
        return coeffs[0] if coeffs else Fraction(0)

    def conj(self) -> "CycloNum":
        """Complex conjugate, zeta -> zeta^-1."""
        terms = {((-k) % self.m,): sympy.Rational(c.numerator, c.denominator) for k, c in enumerate(self.coeffs) if c}
        if not terms:
            return CycloNum(self.m)
        return CycloNum(self.m, Poly.from_dict(terms, _Z, domain=QQ))

    def trace(self) -> Fraction:
        """Field trace down to Q: the sum of all Galois conjugates."""
        return sum((c * _power_trace(self.m, k) for k, c in enumerate(self.coeffs)), Fraction(0))

    def to_complex(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * math.pi * k / self.m) for k, c in enumerate(self.coeffs)),
            0j,
        )


def bareiss_determinant(matrix: Sequence[Sequence[Any]], one: Any = 1) -> Any:
    """
    Fraction-free determinant, exact over any field type.

    Works with Fraction, int and CycloNum entries; every division is exact.
    """
    n = len(matrix)
    if n == 0:
        return one
    a = [list(row) for row in matrix]
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return one * 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


CYCLOTOMIC = "cyclotomic"
RATIONAL = "rational"
FLOAT = "float"


@dataclass
class RootAssignment:
    """
    Roots and coroots for every reflection position of a group.

    Pairings are Hermitian, conjugate-linear in the second slot, and every
    assignment satisfies <rho_t, rho_t^vee> = 1 - xi_t.
    """

    field_kind: str
    m: int
    roots: List[Tuple[Any, ...]]
    coroots: List[Tuple[Any, ...]]

    def one(self) -> Any:
        if self.field_kind == CYCLOTOMIC:
            return CycloNum.from_rational(self.m, 1)
        if self.field_kind == RATIONAL:
            return Fraction(1)
        return 1.0

    def pairing(self, u: Sequence[Any], v: Sequence[Any]) -> Any:
        total = self.one() * 0
        for x, y in zip(u, v):
            total = total + x * (y.conj() if self.field_kind == CYCLOTOMIC else y)
        return total

    def with_scaled_root(self, position: int, scalar: Any) -> "RootAssignment":
        """Replace rho_t by c*rho_t and rho_t^vee by rho_t^vee / conj(c)."""
        inv_bar = 1 / (scalar.conj() if self.field_kind == CYCLOTOMIC else scalar)
        roots = list(self.roots)
        coroots = list(self.coroots)
        roots[position] = tuple(scalar * x for x in roots[position])
        coroots[position] = tuple(inv_bar * x for x in coroots[position])
        return RootAssignment(self.field_kind, self.m, roots, coroots)


def canonical_roots(group: ReflectionGroup) -> RootAssignment:
    """
    Canonical root and coroot for every reflection of group.

    Transposition-like [(ij);k] gets rho = rho^vee = e_i - zeta^k e_j.
    Diagonal [id; c e_i] with xi = zeta^c gets rho = (1 - xi) e_i and
    rho^vee = e_i. Orbit groups use their root vectors and 2 rho / <rho,rho>.

    This is not the e_i - zeta^{-k} e_j, rho = e_i normalization found in
    some tables. The sign of the exponent follows the action
    [u; a] e_k = zeta^{a_k} e_{u(k)} used by WreathGroup, so each root spans the
    image of t - 1 for its reflection t. For the same reflection the two
    choices differ by a nonzero scalar, and GD(rho_g) / GD(rho_t + rho_g) is
    unchanged when a root and its coroot are rescaled, so the main theorem
    value does not depend on the choice.
    """
    if isinstance(group, WreathGroup):
        m, n = group.spec.m, group.spec.n
        zero = CycloNum(m)
        one = CycloNum.from_rational(m, 1)
        roots, coroots = [], []
        for refl in group.reflection_list:
            vec = [zero] * n
            if refl.kind == DIAGONAL:
                vec[refl.i - 1] = one - CycloNum.zeta(m, refl.k)
                co = [zero] * n
                co[refl.i - 1] = one
                roots.append(tuple(vec))
                coroots.append(tuple(co))
            else:
                vec[refl.i - 1] = one
                vec[refl.j - 1] = -CycloNum.zeta(m, refl.k)
                roots.append(tuple(vec))
                coroots.append(tuple(vec))
        return RootAssignment(CYCLOTOMIC, m, roots, coroots)
    if isinstance(group, OrbitGroup):
        kind = RATIONAL if group.exact else FLOAT
        positions = range(group.reflection_count)
        return RootAssignment(
            kind, 2,
            [tuple(group.root_vector(r)) for r in positions],
            [tuple(group.coroot_vector(r)) for r in positions],
        )
    raise InvalidParameterError(f"No root model for group {group.name}")


def gram_matrix(assignment: RootAssignment, positions: Sequence[int]) -> List[List[Any]]:
    return [
        [assignment.pairing(assignment.roots[a], assignment.coroots[b]) for b in positions]
        for a in positions
    ]


def gram_determinant(assignment: RootAssignment, positions: Sequence[int]) -> Any:
    """
    Determinant of (<rho_i, rho_j^vee>) over the given reflection positions.

    Returns a CycloNum, a Fraction or a float according to the assignment's
    field. The empty family has determinant 1.
    """
    matrix = gram_matrix(assignment, positions)
    if assignment.field_kind == FLOAT:
        if not matrix:
            return 1.0
        return float(np.linalg.det(np.array(matrix, dtype=float)))
    return bareiss_determinant(matrix, one=assignment.one())


def as_exact(value: Any) -> Fraction:
    """Rational value of a CycloNum or Fraction that must be rational."""
    if isinstance(value, CycloNum):
        return value.to_fraction()
    return Fraction(value)


@dataclass
class MainTheoremValue:
    """Both right-hand sides of the main theorem for one element."""

    element: int
    ltr: int
    prefactor: Fraction
    rgs_count: int
    rgs_sum: Fraction
    complex_rhs: Fraction
    weyl_rhs: Optional[Fraction] = None
    key_histogram: Dict[str, int] = field(default_factory=dict)


def rational_from_float(value: float, tolerance: float) -> Fraction:
    """Snap a float that is known to be rational; raise if it is not close to one."""
    candidate = Fraction(value).limit_denominator(10 ** 6)
    if abs(float(candidate) - value) > tolerance:
        raise InvalidParameterError(f"Sum {value!r} is not rational within {tolerance}")
    return candidate


def main_theorem_rhs(
    group: ReflectionGroup,
    g: int,
    assignment: Optional[RootAssignment] = None,
    float_tolerance: float = 1e-6,
) -> MainTheoremValue:
    """
    Evaluate the main theorem's right-hand sides at g.

    Complex path:
        ltr(g)! * prod Fred(g_i)/lR(g_i)! * sum over RGS of GD(rho_g)/GD(rho_t + rho_g)
    Weyl path (Weyl-realizable ambients only):
        ltr(g)! * prod Fred(g_i)/lR(g_i)! * #RGS * I(W_g)/I(W)

    The RGS sum is multiplicative over direct products: for W = W1 x W2 and
    g = (g1, g2) it is the product of the sums for g1 in W1 and g2 in W2.

    Args:
        group: Well generated ambient group.
        g: Element id.
        assignment: Root choice; canonical_roots(group) when omitted.
        float_tolerance: Rationality tolerance for the floating H3 path.

    Raises:
        NotWellGeneratedError: For G(m,p,n) with 1 < p < m.
        NotPqcError: When g is not parabolic quasi-Coxeter.
    """
    from .closed_forms import relative_connection_indices, reduced_count_prefactor
    from .parabolic import canonical_factorization, classify_pqc
    from .rgs import enumerate_rgs

    if not group.well_generated:
        raise NotWellGeneratedError(group.name)
    classification = classify_pqc(group, g)
    if not classification.is_pqc:
        raise NotPqcError(f"{group.element_text(g)} is not parabolic quasi-Coxeter in {group.name}")
    if assignment is None:
        assignment = canonical_roots(group)

    lr = group.lengths[g]
    ltr = 2 * group.rank - lr
    prefactor = math.factorial(ltr) * reduced_count_prefactor(group, g, classification)

    factor_positions = canonical_factorization(group, g)
    base = gram_determinant(assignment, factor_positions)
    records = enumerate_rgs(group, g, assignment=assignment)
    histogram: Dict[str, int] = {}
    if assignment.field_kind == FLOAT:
        total = 0.0
        for record in records:
            total += base / gram_determinant(assignment, list(record.reflections) + factor_positions)
        rgs_sum = rational_from_float(total, float_tolerance)
    else:
        acc = assignment.one() * 0
        for record in records:
            acc = acc + base / gram_determinant(assignment, list(record.reflections) + factor_positions)
        rgs_sum = as_exact(acc)
    for record in records:
        key = str(record.grammian_key)
        histogram[key] = histogram.get(key, 0) + 1

    value = MainTheoremValue(
        element=g,
        ltr=ltr,
        prefactor=prefactor,
        rgs_count=len(records),
        rgs_sum=rgs_sum,
        complex_rhs=prefactor * rgs_sum,
        key_histogram=dict(sorted(histogram.items())),
    )
    indices = relative_connection_indices(group, g, classification)
    if indices is not None:
        closure_index, ambient_index = indices
        value.weyl_rhs = prefactor * len(records) * Fraction(closure_index, ambient_index)
    logger.debug("Main theorem at %s in %s: %s", group.element_text(g), group.name, value.complex_rhs)
    return value
