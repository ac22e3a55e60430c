"""
Subgroup Lattice

Reflection subgroups of a small ambient group, identified by the bitmask of
the reflections they contain, together with the Moebius function of the
containment order. Factorization counts come from transfer-matrix walks on
the ambient element ids; inverting over the lattice yields counts of full
factorizations, the full reflection length and the Phi polynomial.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from threading import Lock
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import sympy

from .group_table import ReflectionGroup
from .lattice_cache import LatticeCache, table_key
from .real_orbit_group import OrbitGroup
from ..utils.errors import BudgetExceededError, InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReflectionSubgroup:
    """A reflection subgroup, equal to another iff the masks are equal."""

    mask: int
    order: int
    generators: Tuple[int, ...]

    @property
    def reflection_count(self) -> int:
        return bin(self.mask).count("1")

    def positions(self) -> List[int]:
        out, mask, r = [], self.mask, 0
        while mask:
            if mask & 1:
                out.append(r)
            mask >>= 1
            r += 1
        return out


def _mask_of(positions: Iterable[int]) -> int:
    mask = 0
    for r in positions:
        mask |= 1 << r
    return mask


def closure_elements(group: ReflectionGroup, generators: Sequence[int]) -> List[int]:
    """Element ids of the subgroup generated by the given reflection positions."""
    seen = {group.identity}
    order = [group.identity]
    queue = deque(order)
    while queue:
        g = queue.popleft()
        for r in generators:
            h = group.rmul[r][g]
            if h not in seen:
                seen.add(h)
                order.append(h)
                queue.append(h)
    return order


def closure(group: ReflectionGroup, seed: Union[int, Iterable[int]]) -> ReflectionSubgroup:
    """
    Reflection subgroup generated by seed.

    Args:
        group: Ambient group.
        seed: Reflection positions, or a mask over them.

    Returns:
        The generated subgroup, identified by all the reflections it contains.
    """
    if isinstance(seed, int):
        generators = tuple(r for r in range(group.reflection_count) if seed >> r & 1)
    else:
        generators = tuple(sorted(set(seed)))
    if any(not 0 <= r < group.reflection_count for r in generators):
        raise InvalidParameterError(f"Reflection position out of range for {group.name}")
    elements = set(closure_elements(group, generators))
    mask = _mask_of(r for r, t in enumerate(group.reflections) if t in elements)
    return ReflectionSubgroup(mask=mask, order=len(elements), generators=generators)


def count_tuples(group: ReflectionGroup, g: int, length: int, mask: Optional[int] = None) -> int:
    """
    Number of length-ell tuples of reflections (of the subgroup mask) with product g.

    Standalone transfer-matrix walk; Lattice.count_tuples shares memoized series.

    Raises:
        InvalidParameterError: If g is not in the subgroup generated by mask.
    """
    if mask is None:
        positions = list(range(group.reflection_count))
    else:
        positions = [r for r in range(group.reflection_count) if mask >> r & 1]
        if g not in set(closure_elements(group, positions)):
            raise InvalidParameterError(f"{group.element_text(g)} is not in the requested subgroup")
    series = _walk(group, positions, length)
    return int(series[length][g])


def _walk(group: ReflectionGroup, positions: Sequence[int], length: int, start: Optional[List[np.ndarray]] = None) -> List[np.ndarray]:
    if start:
        series = start
    else:
        v0 = np.zeros(group.order, dtype=object)
        v0[group.identity] = 1
        series = [v0]
    back = [np.asarray(group.rmul[group.reflection_inverse[r]], dtype=np.int64) for r in positions]
    while len(series) <= length:
        prev = series[-1]
        nxt = np.zeros(group.order, dtype=object)
        for idx in back:
            nxt = nxt + prev[idx]
        series.append(nxt)
    return series


class Lattice:
    """
    Reflection subgroups of an ambient group with Moebius values to the top.

    Subgroups are listed by (order, reflection count, mask); the ambient
    group itself is last. Series of tuple counts are memoized per mask.
    """

    def __init__(
        self,
        group: ReflectionGroup,
        subgroups: List[ReflectionSubgroup],
        covers: List[Tuple[int, int]],
        mobius: Optional[List[int]] = None,
        element_cache_limit: int = 2000000,
    ):
        self.group = group
        self.subgroups = subgroups
        self.covers = covers
        self.index: Dict[int, int] = {h.mask: i for i, h in enumerate(subgroups)}
        self.top = self.index[group.full_mask]
        self.mobius = mobius if mobius is not None else self._compute_mobius()
        self.element_cache_limit = element_cache_limit
        self._elements: Dict[int, frozenset] = {}
        self._element_total = 0
        self._series: Dict[int, List[np.ndarray]] = {}
        self._full: Dict[int, List[np.ndarray]] = {}
        self._ranks: Dict[int, int] = {}
        self._lock = Lock()

    def __len__(self) -> int:
        return len(self.subgroups)

    def _compute_mobius(self) -> List[int]:
        size = len(self.subgroups)
        mu = [0] * size
        mu[self.top] = 1
        for i in range(size - 1, -1, -1):
            if i == self.top:
                continue
            h = self.subgroups[i].mask
            mu[i] = -sum(
                mu[j] for j in range(i + 1, size)
                if self.subgroups[j].mask != h and self.subgroups[j].mask & h == h
            )
        return mu

    def subgroup(self, mask: int) -> ReflectionSubgroup:
        try:
            return self.subgroups[self.index[mask]]
        except KeyError:
            raise InvalidParameterError(f"Mask {mask} is not a reflection subgroup of {self.group.name}")

    def mobius_of(self, mask: int) -> int:
        return self.mobius[self.index[mask]]

    def elements(self, mask: int) -> frozenset:
        with self._lock:
            cached = self._elements.get(mask)
        if cached is not None:
            return cached
        sub = self.subgroup(mask)
        elements = frozenset(closure_elements(self.group, sub.generators))
        with self._lock:
            if self._element_total + len(elements) > self.element_cache_limit:
                self._elements.clear()
                self._element_total = 0
            self._elements[mask] = elements
            self._element_total += len(elements)
        return elements

    def contains(self, mask: int, g: int) -> bool:
        return g in self.elements(mask)

    def rank_of(self, mask: int) -> int:
        """Codimension of the common fixed space of the subgroup."""
        with self._lock:
            if mask in self._ranks:
                return self._ranks[mask]
        sub = self.subgroup(mask)
        if isinstance(self.group, OrbitGroup):
            rank = self.group.span_rank(sub.positions())
        else:
            rank = max(self.group.codims[e] for e in self.elements(mask))
        with self._lock:
            self._ranks[mask] = rank
        return rank

    def tuple_series(self, mask: int, length: int) -> List[np.ndarray]:
        """counts[l][x]: l-tuples of reflections of the subgroup with product x."""
        with self._lock:
            series = self._series.get(mask)
            if series is not None and len(series) > length:
                return series
        positions = self.subgroup(mask).positions()
        series = _walk(self.group, positions, length, start=list(series) if series else None)
        with self._lock:
            self._series[mask] = series
        return series

    def count_tuples(self, g: int, length: int, mask: Optional[int] = None) -> int:
        """
        Tuples of reflections of the subgroup with product g.

        Raises:
            InvalidParameterError: If g is not in the subgroup.
        """
        mask = self.group.full_mask if mask is None else mask
        if not self.contains(mask, g):
            raise InvalidParameterError(f"{self.group.element_text(g)} is not in the requested subgroup")
        return int(self.tuple_series(mask, length)[length][g])

    def count_full(self, g: int, length: int) -> int:
        """Tuples with product g generating the whole ambient group (Moebius inversion)."""
        total = 0
        for i, h in enumerate(self.subgroups):
            if self.mobius[i]:
                total += self.mobius[i] * int(self.tuple_series(h.mask, length)[length][g])
        return total

    def full_series_within(self, mask: int, length: int) -> List[np.ndarray]:
        """
        counts[l][x]: l-tuples of reflections generating exactly the subgroup mask.

        Built bottom-up: tuples of the subgroup minus those generating a proper
        reflection subgroup of it.
        """
        with self._lock:
            cached = self._full.get(mask)
            if cached is not None and len(cached) > length:
                return cached
        series = [v.copy() for v in self.tuple_series(mask, length)[: length + 1]]
        for h in self.subgroups:
            if h.mask != mask and h.mask & mask == h.mask:
                inner = self.full_series_within(h.mask, length)
                for l in range(length + 1):
                    series[l] = series[l] - inner[l]
        with self._lock:
            self._full[mask] = series
        return series

    def full_count_within(self, mask: int, g: int, length: int) -> int:
        return int(self.full_series_within(mask, length)[length][g])

    def full_reflection_length(self, g: int, max_length: int, mask: Optional[int] = None) -> Optional[int]:
        """Smallest l with a full factorization of g of length l, or None up to max_length."""
        mask = self.group.full_mask if mask is None else mask
        if not self.contains(mask, g):
            return None
        start = self.group.lengths[g]
        for length in range(start, max_length + 1):
            if mask == self.group.full_mask:
                value = self.count_full(g, length)
            else:
                value = self.full_count_within(mask, g, length)
            if value > 0:
                return length
        return None

    def to_record(self) -> Dict[str, object]:
        return {
            "group": self.group.name,
            "masks": [h.mask for h in self.subgroups],
            "orders": [h.order for h in self.subgroups],
            "generators": [list(h.generators) for h in self.subgroups],
            "containment": [list(c) for c in self.covers],
            "mobius": list(self.mobius),
        }

    @classmethod
    def from_record(cls, group: ReflectionGroup, record: Dict[str, object], element_cache_limit: int = 2000000) -> "Lattice":
        subgroups = [
            ReflectionSubgroup(mask=int(m), order=int(o), generators=tuple(gens))
            for m, o, gens in zip(record["masks"], record["orders"], record["generators"])
        ]
        covers = [tuple(c) for c in record["containment"]]
        return cls(group, subgroups, covers, mobius=list(record["mobius"]), element_cache_limit=element_cache_limit)


def enumerate_lattice(
    group: ReflectionGroup,
    max_size: int = 5000,
    cache: Optional[LatticeCache] = None,
    element_cache_limit: int = 2000000,
) -> Lattice:
    """
    All reflection subgroups of group.

    Breadth-first from the trivial subgroup: every known subgroup is extended
    by each absent reflection and closed; new masks are queued.

    Raises:
        BudgetExceededError: If more than max_size subgroups turn up.
    """
    key = None
    if cache is not None:
        key = table_key(group.reflection_multiplication_table())
        record = cache.get(key)
        if record is not None:
            return Lattice.from_record(group, record, element_cache_limit)

    trivial = ReflectionSubgroup(mask=0, order=1, generators=())
    found: Dict[int, ReflectionSubgroup] = {0: trivial}
    extensions: Dict[int, Set[int]] = {}
    queue = deque([trivial])
    while queue:
        h = queue.popleft()
        ext: Set[int] = set()
        for r in range(group.reflection_count):
            if h.mask >> r & 1:
                continue
            gens = h.generators + (r,)
            elements = set(closure_elements(group, gens))
            mask = _mask_of(q for q, t in enumerate(group.reflections) if t in elements)
            ext.add(mask)
            if mask not in found:
                if len(found) >= max_size:
                    raise BudgetExceededError(f"Reflection subgroup count of {group.name}", max_size)
                sub = ReflectionSubgroup(mask=mask, order=len(elements), generators=gens)
                found[mask] = sub
                queue.append(sub)
        extensions[h.mask] = ext

    subgroups = sorted(found.values(), key=lambda s: (s.order, s.reflection_count, s.mask))
    position = {s.mask: i for i, s in enumerate(subgroups)}
    covers: List[Tuple[int, int]] = []
    for mask, ext in extensions.items():
        for k in ext:
            if not any(j != k and j & k == j for j in ext):
                covers.append((position[mask], position[k]))
    covers.sort()
    lattice = Lattice(group, subgroups, covers, element_cache_limit=element_cache_limit)
    logger.info("Enumerated lattice of %s: %d reflection subgroups", group.name, len(subgroups))
    if cache is not None and key is not None:
        cache.set(key, lattice.to_record())
    return lattice


def hurwitz_orbit(group: ReflectionGroup, factorization: Sequence[int], max_size: int = 200000) -> Set[Tuple[int, ...]]:
    """
    Orbit of a tuple of reflection positions under the Hurwitz moves.

    sigma_i replaces (t_i, t_{i+1}) by (t_{i+1}, t_{i+1}^-1 t_i t_{i+1});
    its inverse replaces it by (t_i t_{i+1} t_i^-1, t_i).

    Raises:
        InvalidParameterError: For an empty tuple.
        BudgetExceededError: If the orbit outgrows max_size.
    """
    start = tuple(factorization)
    if not start:
        raise InvalidParameterError("Hurwitz orbit needs a nonempty factorization")
    conj = group.reflection_conjugation
    inv = group.reflection_inverse
    seen = {start}
    queue = deque([start])
    while queue:
        word = queue.popleft()
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            for pair in ((b, conj[inv[b]][a]), (conj[a][b], a)):
                moved = word[:i] + pair + word[i + 2:]
                if moved not in seen:
                    if len(seen) >= max_size:
                        raise BudgetExceededError("Hurwitz orbit size", max_size)
                    seen.add(moved)
                    queue.append(moved)
    return seen


def reduced_factorizations(group: ReflectionGroup, g: int) -> Set[Tuple[int, ...]]:
    """All reduced reflection factorizations of g, as position tuples."""
    target = group.lengths[g]
    out: Set[Tuple[int, ...]] = set()

    def extend(prefix: Tuple[int, ...], current: int) -> None:
        if len(prefix) == target:
            if current == g:
                out.add(prefix)
            return
        for r in range(group.reflection_count):
            nxt = group.rmul[r][current]
            # stay on a geodesic towards g
            if group.lengths[nxt] == len(prefix) + 1 and group.lengths[group.multiply(group.inverse[nxt], g)] == target - len(prefix) - 1:
                extend(prefix + (r,), nxt)

    extend((), group.identity)
    return out


@dataclass
class PhiPolynomial:
    """
    Phi_W(g; X) with the exponential-sum data it is assembled from.

    coefficients[i] is the coefficient of X^i. kappas maps each exponent j
    in -R..R to kappa_j, so that the full count at length N is
    sum kappa_j j^N / #W.
    """

    element: int
    ltr: int
    coefficients: List[Fraction]
    kappas: Dict[int, Fraction]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def value_at(self, x: Union[int, Fraction]) -> Fraction:
        return sum((c * Fraction(x) ** i for i, c in enumerate(self.coefficients)), Fraction(0))

    def as_poly(self, symbol: sympy.Symbol) -> sympy.Poly:
        return sympy.Poly(
            sum(sympy.Rational(c.numerator, c.denominator) * symbol ** i for i, c in enumerate(self.coefficients)),
            symbol,
        )

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients)


def phi_polynomial(lattice: Lattice, g: int) -> PhiPolynomial:
    """
    Recover Phi_W(g; X) from the full-count series of a real ambient group.

    Unknowns a_j (j = -R..R, R the number of reflections) are fixed by
    count_full(g, N) = sum_j a_j j^N for N = 0..2R. Then
    sum_j #W a_j X^(j+R) = Phi(X) (X-1)^ltr(g).

    Raises:
        InvalidParameterError: For a non-real ambient group or when the
            recovered polynomial is not divisible by (X-1)^ltr or not monic.
    """
    group = lattice.group
    if not group.is_real:
        raise InvalidParameterError(f"Phi polynomial needs a real ambient group, got {group.name}")
    big_r = group.reflection_count
    exponents = list(range(-big_r, big_r + 1))
    counts = [lattice.count_full(g, n) for n in range(2 * big_r + 1)]
    matrix = sympy.Matrix([[sympy.Integer(j) ** n for j in exponents] for n in range(2 * big_r + 1)])
    rhs = sympy.Matrix(counts)
    solution = matrix.LUsolve(rhs)

    x = sympy.Symbol("X")
    kappas: Dict[int, Fraction] = {}
    p_expr = sympy.Integer(0)
    for j, a in zip(exponents, solution):
        kappa = sympy.Rational(a) * group.order
        if kappa != 0:
            kappas[j] = Fraction(int(kappa.p), int(kappa.q))
        p_expr += kappa * x ** (j + big_r)
    ltr = next((n for n, c in enumerate(counts) if c), None)
    if ltr is None:
        raise InvalidParameterError(f"No full factorizations of {group.element_text(g)} up to length {2 * big_r}")
    quotient, remainder = sympy.div(sympy.Poly(p_expr, x), sympy.Poly((x - 1) ** ltr, x))
    if not remainder.is_zero:
        raise InvalidParameterError("Series does not determine Phi: remainder after dividing by (X-1)^ltr")
    coeffs = [sympy.Rational(c) for c in reversed(quotient.all_coeffs())]
    if coeffs[-1] != 1:
        raise InvalidParameterError("Recovered Phi polynomial is not monic")
    return PhiPolynomial(
        element=g,
        ltr=ltr,
        coefficients=[Fraction(int(c.p), int(c.q)) for c in coeffs],
        kappas=kappas,
    )
