"""
Real Orbit Groups

Finite real reflection groups built from simple-root data. The root system
is closed under the simple reflections; every group element is stored as the
permutation it induces on the root indices, so group arithmetic is exact even
when the coordinates are floating point (H3, generic dihedral groups).
"""

from __future__ import annotations

import logging
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .group_table import ReflectionGroup
from ..utils.errors import (
    BudgetExceededError,
    ElementParseError,
    InvalidParameterError,
    NonCrystallographicError,
    UnknownPresetError,
)

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]
Vector = Tuple[Scalar, ...]

SNAP_TOLERANCE = 1e-9
MAX_ROOTS = 2000

SUPPORTED_PRESETS = "A1, A2, A3, A4, B2, B3, B4, D4, G2, H3, I2(m) for 3 <= m <= 12, F4 (flag)"


def _combo(dim: int, *terms: Tuple[int, Union[int, Fraction]]) -> Tuple[Fraction, ...]:
    v = [Fraction(0)] * dim
    for i, c in terms:
        v[i] += Fraction(c)
    return tuple(v)


def _dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return sum((a * b for a, b in zip(u, v)), Fraction(0) if isinstance(u[0], Fraction) else 0.0)


@dataclass(frozen=True)
class RootDatum:
    """Simple roots of a finite real reflection group."""

    name: str
    simple_roots: Tuple[Vector, ...]
    exact: bool

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def dimension(self) -> int:
        return len(self.simple_roots[0])

    def coxeter_matrix(self) -> List[List[int]]:
        n = self.rank
        out = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.simple_roots[i], self.simple_roots[j]
                cos = float(_dot(a, b)) / math.sqrt(float(_dot(a, a)) * float(_dot(b, b)))
                theta = math.acos(max(-1.0, min(1.0, cos)))
                m = int(round(math.pi / (math.pi - theta)))
                out[i][j] = out[j][i] = m
        return out


def _cholesky_datum(name: str, coxeter: Sequence[Sequence[int]]) -> RootDatum:
    """Unit simple roots whose Gram matrix is -cos(pi/m_ij)."""
    n = len(coxeter)
    gram = np.array(
        [[1.0 if i == j else -math.cos(math.pi / coxeter[i][j]) for j in range(n)] for i in range(n)]
    )
    lower = np.linalg.cholesky(gram)
    return RootDatum(name, tuple(tuple(float(x) for x in row) for row in lower), exact=False)


def _type_a(n: int) -> RootDatum:
    d = n + 1
    return RootDatum(f"A{n}", tuple(_combo(d, (i, 1), (i + 1, -1)) for i in range(n)), exact=True)


def _type_b(n: int) -> RootDatum:
    roots = [_combo(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    roots.append(_combo(n, (n - 1, 1)))
    return RootDatum(f"B{n}", tuple(roots), exact=True)


def _type_d4() -> RootDatum:
    roots = [_combo(4, (0, 1), (1, -1)), _combo(4, (1, 1), (2, -1)),
             _combo(4, (2, 1), (3, -1)), _combo(4, (2, 1), (3, 1))]
    return RootDatum("D4", tuple(roots), exact=True)


def _type_f4() -> RootDatum:
    half = Fraction(1, 2)
    roots = [_combo(4, (1, 1), (2, -1)), _combo(4, (2, 1), (3, -1)), _combo(4, (3, 1)),
             _combo(4, (0, half), (1, -half), (2, -half), (3, -half))]
    return RootDatum("F4", tuple(roots), exact=True)


def _type_g2(name: str = "G2") -> RootDatum:
    return RootDatum(name, (_combo(3, (0, 1), (1, -1)), _combo(3, (0, -2), (1, 1), (2, 1))), exact=True)


def preset_datum(name: str, enable_f4: bool = False) -> RootDatum:
    """
    Root data for a shipped preset.

    Args:
        name: Preset name such as "A3", "B2", "H3" or "I2(5)".
        enable_f4: Whether the F4 stretch preset may be built.

    Returns:
        The preset's RootDatum.

    Raises:
        UnknownPresetError: If the name is not shipped or is disabled.
    """
    key = name.strip().upper().replace(" ", "")
    match = re.fullmatch(r"I2\((\d+)\)", key)
    if match:
        m = int(match.group(1))
        if not 3 <= m <= 12:
            raise UnknownPresetError(name, SUPPORTED_PRESETS)
        label = f"I2({m})"
        if m == 3:
            return RootDatum(label, _type_a(2).simple_roots, exact=True)
        if m == 4:
            return RootDatum(label, _type_b(2).simple_roots, exact=True)
        if m == 6:
            return _type_g2(label)
        return _cholesky_datum(label, [[1, m], [m, 1]])
    match = re.fullmatch(r"([ABD])(\d)", key)
    if match:
        family, n = match.group(1), int(match.group(2))
        if family == "A" and 1 <= n <= 4:
            return _type_a(n)
        if family == "B" and 2 <= n <= 4:
            return _type_b(n)
        if family == "D" and n == 4:
            return _type_d4()
    if key == "G2":
        return _type_g2()
    if key == "H3":
        return _cholesky_datum("H3", [[1, 3, 2], [3, 1, 5], [2, 5, 1]])
    if key == "F4" and enable_f4:
        return _type_f4()
    raise UnknownPresetError(name, SUPPORTED_PRESETS)


def datum_from_vectors(vectors: Sequence[Sequence[Union[int, float, str]]], name: str = "custom") -> RootDatum:
    """
    Root data from a JSON list of simple-root coordinate vectors.

    Integer or "p/q" string entries give exact data; any float makes the datum
    floating point.
    """
    if not vectors or not all(isinstance(v, (list, tuple)) and v for v in vectors):
        raise InvalidParameterError("Root data must be a nonempty list of coordinate vectors")
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise InvalidParameterError("All simple roots must have the same dimension")
    exact = all(isinstance(x, (int, str)) and not isinstance(x, bool) for v in vectors for x in v)
    try:
        if exact:
            roots = tuple(tuple(Fraction(x) for x in v) for v in vectors)
        else:
            roots = tuple(tuple(float(x) for x in v) for v in vectors)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidParameterError(f"Bad root coordinate: {e}") from e
    return RootDatum(name, roots, exact=exact)


class _RootSystem:
    """Closure of the simple roots with simple-root coefficients tracked."""

    def __init__(self, datum: RootDatum, max_roots: int = MAX_ROOTS):
        self.datum = datum
        self.exact = datum.exact
        n = datum.rank
        simple = list(datum.simple_roots)
        self.vectors: List[Vector] = []
        self.coefficients: List[Vector] = []
        self._index: Dict[Tuple, int] = {}
        zero = Fraction(0) if self.exact else 0.0
        for i, v in enumerate(simple):
            coeff = [zero] * n
            coeff[i] = Fraction(1) if self.exact else 1.0
            self._add(tuple(v), tuple(coeff))
        norms = [_dot(a, a) for a in simple]
        queue = deque(range(len(self.vectors)))
        while queue:
            k = queue.popleft()
            v, c = self.vectors[k], self.coefficients[k]
            for i, a in enumerate(simple):
                pairing = 2 * _dot(v, a) / norms[i]
                w = tuple(x - pairing * y for x, y in zip(v, a))
                if self.lookup(w) is None:
                    if len(self.vectors) >= max_roots:
                        raise BudgetExceededError(f"Root count of {datum.name}", max_roots)
                    coeff = list(c)
                    coeff[i] = coeff[i] - pairing
                    self._add(w, tuple(coeff))
                    queue.append(len(self.vectors) - 1)
        self.positive = [self._sign(c) > 0 for c in self.coefficients]
        if any(self._sign(c) == 0 for c in self.coefficients):
            raise InvalidParameterError(
                f"{datum.name}: simple roots do not form a simple system",
                suggestion="Every root must be a nonnegative or nonpositive combination of the simple roots.",
            )

    def _key(self, v: Vector) -> Tuple:
        if self.exact:
            return v
        return tuple(round(x, 6) + 0.0 for x in v)

    def _add(self, v: Vector, coeff: Vector) -> None:
        self._index[self._key(v)] = len(self.vectors)
        self.vectors.append(v)
        self.coefficients.append(coeff)

    def lookup(self, v: Vector) -> Optional[int]:
        idx = self._index.get(self._key(v))
        if idx is not None or self.exact:
            return idx
        target = np.asarray(v, dtype=float)
        for k, w in enumerate(self.vectors):
            if np.allclose(target, np.asarray(w, dtype=float), atol=SNAP_TOLERANCE * 1e3):
                self._index[self._key(v)] = k
                return k
        return None

    def _sign(self, coeff: Vector) -> int:
        tol = 0 if self.exact else 1e-7
        if all(x >= -tol for x in coeff) and any(x > tol for x in coeff):
            return 1
        if all(x <= tol for x in coeff) and any(x < -tol for x in coeff):
            return -1
        return 0

    def reflection_permutation(self, beta: int) -> Tuple[int, ...]:
        b = self.vectors[beta]
        norm = _dot(b, b)
        images = []
        for v in self.vectors:
            pairing = 2 * _dot(v, b) / norm
            w = tuple(x - pairing * y for x, y in zip(v, b))
            idx = self.lookup(w)
            if idx is None:
                raise InvalidParameterError(f"{self.datum.name}: root set is not closed under reflection")
            images.append(idx)
        return tuple(images)


class OrbitRealization:
    """Adapter exposing a root system to the generic group enumerator."""

    kind = "orbit"
    is_real = True
    well_generated = True

    def __init__(self, datum: RootDatum, max_roots: int = MAX_ROOTS):
        self.datum = datum
        self.system = _RootSystem(datum, max_roots)
        self.positive_roots = [k for k, pos in enumerate(self.system.positive) if pos]
        self.reflection_perms = [self.system.reflection_permutation(k) for k in self.positive_roots]
        coeffs = np.array([[float(x) for x in c] for c in self.system.coefficients])
        self._coeffs = coeffs

    @property
    def name(self) -> str:
        return self.datum.name

    @property
    def rank(self) -> int:
        return self.datum.rank

    def identity(self) -> Tuple[int, ...]:
        return tuple(range(len(self.system.vectors)))

    def reflections(self) -> List[Tuple[int, ...]]:
        return list(self.reflection_perms)

    def multiply(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(x[k] for k in y)

    def inverse(self, x: Tuple[int, ...]) -> Tuple[int, ...]:
        out = [0] * len(x)
        for k, image in enumerate(x):
            out[image] = k
        return tuple(out)

    def moved_matrix(self, x: Tuple[int, ...]) -> np.ndarray:
        """Columns w(alpha_i) - alpha_i in simple-root coordinates."""
        n = self.rank
        return np.array([self._coeffs[x[i]] - np.eye(n)[i] for i in range(n)]).T

    def fixed_codim(self, x: Tuple[int, ...]) -> int:
        return int(np.linalg.matrix_rank(self.moved_matrix(x), tol=1e-7))

    def element_text(self, x: Tuple[int, ...]) -> Dict[str, List[int]]:
        return {"root_perm": list(x)}

    def sort_key(self, x: Tuple[int, ...]) -> Tuple:
        return x


class OrbitGroup(ReflectionGroup):
    """
    A finite real reflection group acting on its roots.

    Reflection positions follow the discovery order of the positive roots,
    so positions 0..n-1 are the simple reflections.
    """

    def __init__(self, datum: RootDatum, max_order: int = 1200):
        realization = OrbitRealization(datum)
        super().__init__(realization, max_order=max_order)
        self.datum = datum
        self.exact = datum.exact
        self.system = realization.system
        self.reflection_roots: List[int] = realization.positive_roots
        self._words: Optional[List[Tuple[int, ...]]] = None
        self.coxeter_number = self.element_order(self.product_of_reflections(range(self.rank)))

    @property
    def roots(self) -> List[Vector]:
        return self.system.vectors

    def root_vector(self, position: int) -> Vector:
        return self.system.vectors[self.reflection_roots[position]]

    def root_coefficients(self, position: int) -> Vector:
        return self.system.coefficients[self.reflection_roots[position]]

    def coroot_vector(self, position: int) -> Vector:
        v = self.root_vector(position)
        norm = _dot(v, v)
        return tuple(2 * x / norm for x in v)

    def fixed_space_dim(self, g: int) -> int:
        return self.rank - self.codims[g]

    def words(self) -> List[Tuple[int, ...]]:
        """Breadth-first words in the simple reflections (1-indexed) for every element."""
        with self._lock:
            if self._words is not None:
                return self._words
        words: List[Optional[Tuple[int, ...]]] = [None] * self.order
        words[self.identity] = ()
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in range(self.rank):
                h = self.rmul[s][g]
                if words[h] is None:
                    words[h] = words[g] + (s + 1,)
                    queue.append(h)
        with self._lock:
            self._words = [w or () for w in words]
        return self._words

    def element_text(self, g: int) -> Dict[str, List[int]]:
        return {"word": list(self.words()[g])}

    def element_from_word(self, word: Sequence[int]) -> int:
        g = self.identity
        for s in word:
            if not isinstance(s, int) or not 1 <= s <= self.rank:
                raise ElementParseError(str(list(word)), f"letters must lie in 1..{self.rank}")
            g = self.rmul[s - 1][g]
        return g

    def span_rank(self, positions: Sequence[int]) -> int:
        if not positions:
            return 0
        mat = np.array([[float(x) for x in self.root_coefficients(r)] for r in positions])
        return int(np.linalg.matrix_rank(mat, tol=1e-7))

    def root_in_moved_space(self, g: int, position: int) -> bool:
        """Whether the root of t lies in im(g - I) = (V^g)^perp."""
        moved = self.realization.moved_matrix(self.keys[g])
        root = np.array([[float(x)] for x in self.root_coefficients(position)])
        before = int(np.linalg.matrix_rank(moved, tol=1e-7)) if moved.size else 0
        after = int(np.linalg.matrix_rank(np.hstack([moved, root]), tol=1e-7))
        return before == after

    def simple_system(self, mask: int) -> List[int]:
        """
        Canonical simple roots of the reflection subgroup with reflection set mask.

        A positive root of the subgroup is simple when its reflection sends
        every other positive root of the subgroup to a positive root.
        """
        positions = [r for r in range(self.reflection_count) if mask >> r & 1]
        subgroup_roots = {self.reflection_roots[r] for r in positions}
        positive = self.system.positive
        simple = []
        for r in positions:
            perm = self.keys[self.reflections[r]]
            beta = self.reflection_roots[r]
            if all(positive[perm[g]] for g in subgroup_roots if g != beta):
                simple.append(r)
        return simple

    def cartan_of(self, positions: Sequence[int]) -> List[List[Scalar]]:
        """Matrix of <alpha_i, alpha_j^vee> over the given reflection positions."""
        return [
            [_dot(self.root_vector(a), self.coroot_vector(b)) for b in positions]
            for a in positions
        ]

    def subgroup_connection_index(self, mask: int) -> int:
        """I(W') for the reflection subgroup with the given mask."""
        if not self.exact:
            raise NonCrystallographicError(self.name)
        simple = self.simple_system(mask)
        if not simple:
            return 1
        det = sympy.Matrix(self.cartan_of(simple)).det()
        return abs(int(det))


@dataclass(frozen=True)
class CartanData:
    cartan: List[List[Scalar]]
    connection_index: Optional[int]
    highest_root: Optional[Tuple[int, ...]]


def build_group(datum: RootDatum, max_order: int = 1200) -> OrbitGroup:
    """
    Enumerate the group generated by the simple reflections of datum.

    Raises:
        BudgetExceededError: If the root set or the element set outgrows the ceilings.
    """
    group = OrbitGroup(datum, max_order=max_order)
    logger.info("Built orbit group %s with %d roots, h = %d", datum.name, len(group.roots), group.coxeter_number)
    return group


def cartan_and_connection_index(group: OrbitGroup) -> CartanData:
    """
    Cartan matrix, connection index and highest-root coefficients.

    Non-crystallographic data yields the Cartan matrix only.
    """
    simple = list(range(group.rank))
    cartan = group.cartan_of(simple)
    if not group.exact or any(Fraction(x).denominator != 1 for row in cartan for x in row):
        return CartanData(cartan, None, None)
    index = abs(int(sympy.Matrix(cartan).det()))
    coefficients = [group.root_coefficients(r) for r in range(group.reflection_count)]
    highest = max(coefficients, key=lambda c: (sum(c), c))
    return CartanData(cartan, index, tuple(int(x) for x in highest))


def connection_index(group: OrbitGroup) -> int:
    data = cartan_and_connection_index(group)
    if data.connection_index is None:
        raise NonCrystallographicError(group.name)
    return data.connection_index


def weyl_order_identity(group: OrbitGroup) -> bool:
    """#W = n! * prod(c_i) * I(W)."""
    data = cartan_and_connection_index(group)
    if data.connection_index is None:
        raise NonCrystallographicError(group.name)
    return math.factorial(group.rank) * math.prod(data.highest_root) * data.connection_index == group.order


def fixed_space_dim(group: OrbitGroup, g: int) -> int:
    return group.fixed_space_dim(g)
