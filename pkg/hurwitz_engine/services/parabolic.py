"""
Parabolic Structure

Parabolic closures, reflection and full reflection lengths, the absolute
order and the classification of parabolic quasi-Coxeter elements.

Wreath groups are classified by their cycles and colours. Orbit groups are
classified by searching for a relative generating set, and their
generalized cycles are read off the non-commutation graph of W_g.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import sympy

from .closed_forms import relative_connection_indices
from .cyclo_gram import canonical_roots
from .group_table import ReflectionGroup
from .real_orbit_group import OrbitGroup
from .subgroup_lattice import Lattice, ReflectionSubgroup, closure, closure_elements
from .wreath_core import DIAGONAL, WreathElement, WreathGroup, cycle_gauge
from ..utils.errors import BudgetExceededError, NotWellGeneratedError

logger = logging.getLogger(__name__)

# Generalized cycle kinds
PLAIN_CYCLE = "plain_cycle"
COLORED_CYCLE = "colored_cycle"
COLOR_PAIR = "color_pair"
COMPONENT = "component"

# Classification tags
YOUNG_ONLY = "YoungOnly"
WITH_FULL_CYCLE = "WithFullCycle"
WITH_COLOR_PAIR = "WithColorPair"
PQC = "Pqc"
NOT_PQC = "NotPqc"

THEOREM_ROUTE = "theorem"
SEARCH_ROUTE = "search"


@dataclass(frozen=True)
class GeneralizedCycle:
    """
    One commuting factor of a parabolic quasi-Coxeter element.

    For wreath groups support lists coordinates (1-indexed); for the
    component decomposition it lists the reflection positions of the
    irreducible factor.
    """

    kind: str
    lengths: Tuple[int, ...]
    support: Tuple[int, ...]
    element: int
    reflection_length: int
    mask: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "lengths": list(self.lengths),
            "support": list(self.support),
            "reflection_length": self.reflection_length,
        }


@dataclass
class PqcClassification:
    """
    Outcome of classify_pqc.

    lam carries the distinguished part lambda_0 first in the full-cycle and
    colour-pair cases; for orbit groups it lists the factor lengths.
    """

    case_tag: str
    lam: Tuple[int, ...]
    generalized_cycles: List[GeneralizedCycle] = field(default_factory=list)
    blocks: Tuple[Tuple[int, ...], ...] = ()
    closure_mask: int = 0
    route: str = THEOREM_ROUTE
    determinant_agrees: Optional[bool] = None

    @property
    def is_pqc(self) -> bool:
        return self.case_tag != NOT_PQC

    @property
    def has_distinguished_part(self) -> bool:
        return self.case_tag in (WITH_FULL_CYCLE, WITH_COLOR_PAIR)

    @property
    def other_parts(self) -> Tuple[int, ...]:
        """lambda_1, ..., lambda_k: every part except lambda_0."""
        return self.lam[1:] if self.has_distinguished_part else self.lam

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case_tag": self.case_tag,
            "lambda": list(self.lam),
            "route": self.route,
            "generalized_cycles": [c.to_dict() for c in self.generalized_cycles],
            "determinant_agrees": self.determinant_agrees,
        }


@dataclass(frozen=True)
class LengthRecord:
    lr: int
    ltr: int
    rank_closure: int

    def to_dict(self) -> Dict[str, int]:
        return {"lR": self.lr, "ltr": self.ltr, "rank_closure": self.rank_closure}


def reflection_fixes_space(group: ReflectionGroup, g: int, position: int) -> bool:
    """Whether the hyperplane of the reflection at position contains V^g."""
    if isinstance(group, OrbitGroup):
        return group.root_in_moved_space(g, position)
    if isinstance(group, WreathGroup):
        x = group.element(g)
        refl = group.reflection_list[position]
        cycle_of: Dict[int, Tuple[int, int]] = {}
        for idx, cycle in enumerate(group.cycle_data(g).cycles):
            for point in cycle.support:
                cycle_of[point] = (idx, cycle.color)
        if refl.kind == DIAGONAL:
            return cycle_of[refl.i][1] != 0
        ci, cj = cycle_of[refl.i], cycle_of[refl.j]
        if ci[1] != 0 and cj[1] != 0:
            return True
        if ci[1] != 0 or cj[1] != 0 or ci[0] != cj[0]:
            return False
        gauge = cycle_gauge(x, group.spec)
        return (refl.k - gauge[refl.i] + gauge[refl.j]) % group.spec.m == 0
    raise TypeError(f"Unsupported group model {type(group).__name__}")


def parabolic_closure(group: ReflectionGroup, g: int) -> ReflectionSubgroup:
    """
    W_g: the subgroup generated by the reflections whose hyperplanes contain V^g.

    Its rank is codim(V^g).
    """
    positions = [r for r in range(group.reflection_count) if reflection_fixes_space(group, g, r)]
    return closure(group, positions)


def canonical_factorization(group: ReflectionGroup, g: int, mask: Optional[int] = None) -> List[int]:
    """
    Lexicographically smallest reduced factorization of g, as reflection positions.

    Greedy descent: the next factor is the smallest t (within mask, when
    given) with lR(t^-1 g) = lR(g) - 1.
    """
    out: List[int] = []
    current = g
    while group.lengths[current] > 0:
        target = group.lengths[current] - 1
        for r in range(group.reflection_count):
            if mask is not None and not mask >> r & 1:
                continue
            rest = group.lmul[group.reflection_inverse[r]][current]
            if group.lengths[rest] == target:
                out.append(r)
                current = rest
                break
        else:
            raise ValueError(f"No descending reflection for {group.element_text(current)} in the given subgroup")
    return out


def reflection_length(group: ReflectionGroup, g: int) -> int:
    """lR(g), from the breadth-first enumeration."""
    return group.lengths[g]


def combinatorial_reflection_length(group: WreathGroup, g: int) -> int:
    """n minus the number of colour-0 cycles; equals lR(g) for parabolic quasi-Coxeter g."""
    return group.realization.fixed_codim(group.element(g))


def absolute_leq(group: ReflectionGroup, u: int, v: int) -> bool:
    """u <=_R v iff lR(u) + lR(u^-1 v) = lR(v)."""
    return group.lengths[u] + group.lengths[group.multiply(group.inverse[u], v)] == group.lengths[v]


def is_quasi_coxeter(group: ReflectionGroup, g: int) -> bool:
    """lR(g) = rank and a reduced factorization of g generates the whole group."""
    if group.lengths[g] != group.rank:
        return False
    gens = canonical_factorization(group, g)
    return len(closure_elements(group, gens)) == group.order


def _restrict(x: WreathElement, support: Sequence[int]) -> WreathElement:
    perm = list(range(1, x.n + 1))
    colors = [0] * x.n
    for point in support:
        perm[point - 1] = x.perm[point - 1]
        colors[point - 1] = x.colors[point - 1]
    return WreathElement(tuple(perm), tuple(colors))


def _classify_wreath(group: WreathGroup, g: int) -> PqcClassification:
    spec = group.spec
    m = spec.m
    x = group.element(g)
    cycles = group.cycle_data(g).cycles
    zero = [c for c in cycles if c.color == 0]
    colored = [c for c in cycles if c.color != 0]

    def factor(kind: str, support: Sequence[int], lengths: Tuple[int, ...], lr: int) -> GeneralizedCycle:
        support = tuple(sorted(support))
        element = group.index[_restrict(x, support)]
        return GeneralizedCycle(kind, lengths, support, element, lr, parabolic_closure(group, element).mask)

    plain = [factor(PLAIN_CYCLE, c.support, (c.length,), c.length - 1) for c in zero if c.length > 1]
    blocks = [tuple(sorted(c.support)) for c in zero]

    if not colored:
        tag, lam, special = YOUNG_ONLY, tuple(c.length for c in cycles), []
    elif spec.p == 1 and len(colored) == 1 and gcd(colored[0].color, m) == 1:
        c0 = colored[0]
        tag = WITH_FULL_CYCLE
        lam = (c0.length,) + tuple(c.length for c in zero)
        special = [factor(COLORED_CYCLE, c0.support, (c0.length,), c0.length)]
        blocks.append(tuple(sorted(c0.support)))
    elif (
        spec.p == m
        and len(colored) == 2
        and (colored[0].color + colored[1].color) % m == 0
        and gcd(colored[0].color, m) == 1
    ):
        a, b = colored
        tag = WITH_COLOR_PAIR
        lam = (a.length + b.length,) + tuple(c.length for c in zero)
        special = [factor(COLOR_PAIR, a.support + b.support, (a.length, b.length), a.length + b.length)]
        blocks.append(tuple(sorted(a.support + b.support)))
    else:
        return PqcClassification(
            NOT_PQC,
            tuple(c.length for c in cycles),
            blocks=tuple(sorted(tuple(sorted(c.support)) for c in cycles)),
            closure_mask=parabolic_closure(group, g).mask,
        )

    generalized = sorted(plain + special, key=lambda c: c.support[0])
    classification = PqcClassification(
        tag, lam, generalized,
        blocks=tuple(sorted(blocks)),
        closure_mask=parabolic_closure(group, g).mask,
    )
    total = sum(c.reflection_length for c in generalized)
    if total != group.lengths[g]:
        logger.warning(
            "Generalized cycle lengths of %s sum to %d, breadth-first length is %d",
            group.element_text(g), total, group.lengths[g],
        )
    return classification


def _relative_generating_set_exists(group: ReflectionGroup, g: int, factorization: Sequence[int]) -> bool:
    size = group.rank - group.lengths[g]
    if size < 0:
        return False
    for subset in combinations(range(group.reflection_count), size):
        if len(closure_elements(group, tuple(factorization) + subset)) == group.order:
            return True
    return False


def component_decomposition(group: ReflectionGroup, g: int) -> List[GeneralizedCycle]:
    """
    Factors of g over the irreducible components of W_g.

    Components are the connected components of the graph on the reflections
    of W_g joining non-commuting pairs. Each factor is the product of the
    canonical factorization's reflections lying in that component.
    """
    sub = parabolic_closure(group, g)
    positions = sub.positions()
    graph = nx.Graph()
    graph.add_nodes_from(positions)
    for a, b in combinations(positions, 2):
        ab = group.rmul[b][group.reflections[a]]
        ba = group.rmul[a][group.reflections[b]]
        if ab != ba:
            graph.add_edge(a, b)
    factorization = canonical_factorization(group, g)
    out: List[GeneralizedCycle] = []
    for component in nx.connected_components(graph):
        used = [r for r in factorization if r in component]
        if not used:
            continue
        support = tuple(sorted(component))
        mask = 0
        for r in support:
            mask |= 1 << r
        out.append(GeneralizedCycle(
            COMPONENT, (len(used),), support, group.product_of_reflections(used), len(used), mask,
        ))
    out.sort(key=lambda c: c.support[0])
    return out


def moved_space_determinant(group: ReflectionGroup, g: int) -> Optional[Fraction]:
    """
    |det(g - I)| on the span of the roots of g's canonical factorization.

    That span is the moved space (V^g)^perp. Returns None when the group has
    no rational realization here (complex wreath groups, float orbit data).
    """
    factorization = canonical_factorization(group, g)
    if not factorization:
        return Fraction(1)
    if isinstance(group, OrbitGroup):
        if not group.exact:
            return None
        perm = group.keys[g]
        basis = [group.root_vector(r) for r in factorization]
        images = [group.system.vectors[perm[group.reflection_roots[r]]] for r in factorization]
    elif isinstance(group, WreathGroup):
        if group.spec.m > 2:
            return None
        roots = canonical_roots(group).roots
        basis = [tuple(c.to_fraction() for c in roots[r]) for r in factorization]
        x = group.element(g)
        images = []
        for vec in basis:
            image = [Fraction(0)] * x.n
            for k in range(x.n):
                sign = -1 if x.colors[k] % 2 else 1
                image[x.perm[k] - 1] = sign * vec[k]
            images.append(tuple(image))
    else:
        return None
    to_sym = lambda v: [sympy.Rational(q.numerator, q.denominator) for q in map(Fraction, v)]
    b = sympy.Matrix([to_sym(v) for v in basis]).T
    moved = sympy.Matrix([to_sym(v) for v in images]).T - b
    coords = (b.T * b).inv() * b.T * moved
    det = abs(coords.det())
    return Fraction(int(det.p), int(det.q))


def _determinant_check(group: ReflectionGroup, g: int, classification: PqcClassification) -> Optional[bool]:
    indices = relative_connection_indices(group, g, classification)
    if indices is None:
        return None
    det = moved_space_determinant(group, g)
    if det is None:
        return None
    agrees = det == indices[0]
    if classification.is_pqc and not agrees:
        logger.warning(
            "Moved-space determinant %s differs from I(W_g) = %d at %s",
            det, indices[0], group.element_text(g),
        )
    return agrees


def classify_pqc(group: ReflectionGroup, g: int) -> PqcClassification:
    """
    Decide whether g is parabolic quasi-Coxeter and split it into generalized cycles.

    Args:
        group: Well generated ambient group.
        g: Element id.

    Returns:
        The classification with its generalized cycles. For Weyl-realizable
        ambients the moved-space determinant is compared with I(W_g).

    Raises:
        NotWellGeneratedError: For G(m,p,n) with 1 < p < m.
    """
    if not group.well_generated:
        raise NotWellGeneratedError(group.name)
    if isinstance(group, WreathGroup):
        classification = _classify_wreath(group, g)
    else:
        factorization = canonical_factorization(group, g)
        found = _relative_generating_set_exists(group, g, factorization)
        if found:
            cycles = component_decomposition(group, g)
            classification = PqcClassification(
                PQC,
                tuple(c.reflection_length for c in cycles),
                cycles,
                closure_mask=parabolic_closure(group, g).mask,
                route=SEARCH_ROUTE,
            )
        else:
            classification = PqcClassification(
                NOT_PQC, (), closure_mask=parabolic_closure(group, g).mask, route=SEARCH_ROUTE,
            )
    if classification.is_pqc:
        classification.determinant_agrees = _determinant_check(group, g, classification)
    return classification


def full_reflection_length(
    group: ReflectionGroup,
    g: int,
    lattice: Optional[Lattice] = None,
    max_length: int = 24,
) -> int:
    """
    ltr(g): 2 rank - lR(g) for parabolic quasi-Coxeter g in a well generated
    group, otherwise the first length with a full factorization.

    Raises:
        BudgetExceededError: If the oracle finds nothing up to max_length.
    """
    if group.well_generated and classify_pqc(group, g).is_pqc:
        return 2 * group.rank - group.lengths[g]
    if lattice is None:
        from .subgroup_lattice import enumerate_lattice

        lattice = enumerate_lattice(group)
    found = lattice.full_reflection_length(g, max_length)
    if found is None:
        raise BudgetExceededError(f"Full reflection length search for {group.element_text(g)}", max_length)
    return found


def length_record(group: ReflectionGroup, g: int, lattice: Optional[Lattice] = None, max_length: int = 24) -> LengthRecord:
    return LengthRecord(
        lr=group.lengths[g],
        ltr=full_reflection_length(group, g, lattice, max_length),
        rank_closure=group.codims[g],
    )


def is_parabolic_subgroup(lattice: Lattice, mask: int) -> bool:
    """
    Whether the reflection subgroup is the pointwise stabilizer of its fixed space.

    Equivalently, adding any outside reflection raises the rank.
    """
    group = lattice.group
    rank = lattice.rank_of(mask)
    for r in range(group.reflection_count):
        if mask >> r & 1:
            continue
        bigger = closure(group, mask | 1 << r).mask
        if lattice.rank_of(bigger) == rank:
            return False
    return True


