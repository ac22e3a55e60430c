"""
Relative Generating Sets

Sets of rank(W) - lR(g) reflections that generate W together with a
reduced factorization of g. Three routes enumerate them: exhaustive
closure search, the relative-graph characterization for G(m,1,n) and
G(m,m,n), and the quasi-Coxeter product test.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy

from .closed_forms import elementary_symmetric, euler_phi, jordan_j2
from .cyclo_gram import FLOAT, RootAssignment, canonical_roots, gram_determinant
from .group_table import ReflectionGroup
from .parabolic import (
    NOT_PQC,
    WITH_COLOR_PAIR,
    WITH_FULL_CYCLE,
    YOUNG_ONLY,
    PqcClassification,
    canonical_factorization,
    classify_pqc,
    is_quasi_coxeter,
)
from .real_orbit_group import OrbitGroup
from .subgroup_lattice import closure_elements
from .wreath_core import DIAGONAL, GroupSpec, Reflection, WreathGroup, cycle_gauge
from ..utils.errors import (
    InvalidParameterError,
    NonCrystallographicError,
    NotPqcError,
    NotWellGeneratedError,
)

logger = logging.getLogger(__name__)

# Relative graph shapes
TREE = "tree"
ROOTED_TREE = "rooted_tree"
UNICYCLE = "unicycle"
NONE = "none"

GD_KEY_DIGITS = 6


@dataclass(frozen=True)
class RelativeGraph:
    """
    Reflections drawn on 1..n with the blocks of Pi contracted.

    Edges are (i, j, colour) read as i -> j; loops have i == j. datum is
    the loop colour of a rooted tree or delta of a unicycle.
    """

    n: int
    edges: Tuple[Tuple[int, int, int], ...]
    blocks: Tuple[Tuple[int, ...], ...]
    kind: str
    datum: Optional[int] = None
    loop_is_diagonal: bool = False


@dataclass(frozen=True)
class RgsRecord:
    reflections: Tuple[int, ...]
    grammian_key: Hashable

    def to_dict(self, group: ReflectionGroup) -> Dict[str, Any]:
        if isinstance(group, WreathGroup):
            labels = [group.reflection_list[r].label() for r in self.reflections]
        else:
            labels = [group.element_text(group.reflections[r]) for r in self.reflections]
        return {"reflections": labels, "grammian_key": str(self.grammian_key)}


def _walk_cycle(graph: nx.MultiGraph, cycle_nodes: List[int], colour_of) -> int:
    start = min(cycle_nodes)
    on_cycle = set(cycle_nodes)
    used = set()
    total = 0
    node = start
    while True:
        options = sorted(
            (nbr, key) for _, nbr, key in graph.edges(node, keys=True)
            if nbr in on_cycle and (min(node, nbr), max(node, nbr), key) not in used
        )
        if not options:
            break
        nbr, key = options[0]
        used.add((min(node, nbr), max(node, nbr), key))
        total += colour_of(node, nbr, key)
        node = nbr
        if node == start:
            break
    return total


def relative_graph_classify(
    reflections: Sequence[Reflection],
    blocks: Sequence[Sequence[int]],
    m: int,
    gauge: Optional[Dict[int, int]] = None,
) -> RelativeGraph:
    """
    Contract the blocks and classify the reflections as a relative graph.

    A transposition [(ij);k] is an edge i -> j of colour k + d_j - d_i,
    where d is the gauge of g (zero when omitted); a diagonal reflection is
    a loop with its own colour. After contraction: a tree, a rooted tree
    (spanning tree plus one loop), a unicycle (spanning tree plus one
    non-loop edge) or none. delta is the oriented colour sum around the
    cycle, starting at its smallest block and leaving towards the smallest
    neighbouring block.
    """
    gauge = gauge or {}
    n = max((p for b in blocks for p in b), default=0)
    block_of = {p: idx for idx, b in enumerate(blocks) for p in b}
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(blocks)))
    edges = []
    loops: List[Tuple[int, bool]] = []
    oriented: Dict[Tuple[int, int, int], int] = {}
    for refl in reflections:
        if refl.kind == DIAGONAL:
            edges.append((refl.i, refl.i, refl.k % m))
            loops.append((refl.k % m, True))
            graph.add_edge(block_of[refl.i], block_of[refl.i])
            continue
        colour = (refl.k + gauge.get(refl.j, 0) - gauge.get(refl.i, 0)) % m
        edges.append((refl.i, refl.j, colour))
        u, v = block_of[refl.i], block_of[refl.j]
        if u == v:
            loops.append((colour, False))
            graph.add_edge(u, u)
            continue
        key = graph.add_edge(u, v)
        oriented[(u, v, key)] = colour
        oriented[(v, u, key)] = -colour

    blocks_t = tuple(tuple(sorted(b)) for b in blocks)
    count = graph.number_of_edges()
    if not blocks or not nx.is_connected(graph):
        return RelativeGraph(n, tuple(edges), blocks_t, NONE)
    if count == len(blocks) - 1 and not loops:
        return RelativeGraph(n, tuple(edges), blocks_t, TREE)
    if count != len(blocks):
        return RelativeGraph(n, tuple(edges), blocks_t, NONE)
    if len(loops) == 1:
        colour, diagonal = loops[0]
        return RelativeGraph(n, tuple(edges), blocks_t, ROOTED_TREE, colour, diagonal)
    if loops:
        return RelativeGraph(n, tuple(edges), blocks_t, NONE)

    # Strip leaves; what remains is the cycle.
    degree = {v: graph.degree(v) for v in graph.nodes}
    alive = set(graph.nodes)
    leaves = [v for v in alive if degree[v] == 1]
    while leaves:
        leaf = leaves.pop()
        alive.discard(leaf)
        for _, nbr in graph.edges(leaf):
            if nbr in alive:
                degree[nbr] -= 1
                if degree[nbr] == 1:
                    leaves.append(nbr)
    delta = _walk_cycle(graph, sorted(alive), lambda u, v, k: oriented[(u, v, k)]) % m
    return RelativeGraph(n, tuple(edges), blocks_t, UNICYCLE, delta)


def _wreath_key(graph: RelativeGraph, m: int) -> int:
    if graph.kind == ROOTED_TREE:
        return graph.datum
    if graph.kind == UNICYCLE:
        return min(graph.datum, (m - graph.datum) % m)
    return 0


def graph_admits(graph: RelativeGraph, spec: GroupSpec, classification: PqcClassification) -> bool:
    """
    The relative-graph characterization of relative generating sets.

    Full-cycle and colour-pair cases need a tree. Young elements need a
    rooted tree with a primitive diagonal loop in G(m,1,n), and a unicycle
    (or intra-block loop) with primitive colour in G(m,m,n).
    """
    m = spec.m
    if classification.case_tag in (WITH_FULL_CYCLE, WITH_COLOR_PAIR) or m == 1:
        return graph.kind == TREE
    if classification.case_tag != YOUNG_ONLY:
        return False
    if spec.p == 1:
        return graph.kind == ROOTED_TREE and graph.loop_is_diagonal and gcd(graph.datum, m) == 1
    if graph.kind == ROOTED_TREE and graph.loop_is_diagonal:
        return False
    return graph.kind in (ROOTED_TREE, UNICYCLE) and gcd(graph.datum, m) == 1


def _gd_key(assignment: RootAssignment, positions: Sequence[int]) -> Hashable:
    value = gram_determinant(assignment, positions)
    if assignment.field_kind == FLOAT:
        return round(value, GD_KEY_DIGITS) + 0.0
    return Fraction(value)


def _candidate_size(group: ReflectionGroup, g: int, rank: Optional[int] = None) -> int:
    return (group.rank if rank is None else rank) - group.lengths[g]


def search_rgs(
    group: ReflectionGroup,
    factorization: Sequence[int],
    pool: Sequence[int],
    size: int,
    target_order: int,
) -> List[Tuple[int, ...]]:
    """All size-subsets of pool that generate a group of target_order together with factorization."""
    if size < 0:
        return []
    found = []
    base = tuple(factorization)
    for subset in combinations(pool, size):
        if len(closure_elements(group, base + subset)) == target_order:
            found.append(subset)
    return found


def _keys_for(group: ReflectionGroup, g: int, subsets: List[Tuple[int, ...]], assignment: Optional[RootAssignment]) -> List[RgsRecord]:
    factorization = canonical_factorization(group, g)
    if isinstance(group, WreathGroup):
        classification = classify_pqc(group, g)
        gauge = cycle_gauge(group.element(g), group.spec)
        out = []
        for subset in subsets:
            graph = relative_graph_classify(
                [group.reflection_list[r] for r in subset], classification.blocks, group.spec.m, gauge,
            )
            out.append(RgsRecord(subset, _wreath_key(graph, group.spec.m)))
        return out
    if assignment is None:
        assignment = canonical_roots(group)
    return [RgsRecord(subset, _gd_key(assignment, list(subset) + factorization)) for subset in subsets]


def enumerate_rgs(group: ReflectionGroup, g: int, assignment: Optional[RootAssignment] = None) -> List[RgsRecord]:
    """
    RGS(W, g) by exhaustive closure search.

    Args:
        group: Well generated ambient group.
        g: Element id.
        assignment: Root choice used for the Grammian keys of orbit groups.

    Returns:
        Records in lexicographic order of reflection positions; [()] for
        quasi-Coxeter g.

    Raises:
        NotWellGeneratedError: For G(m,p,n) with 1 < p < m.
    """
    if not group.well_generated:
        raise NotWellGeneratedError(group.name)
    factorization = canonical_factorization(group, g)
    subsets = search_rgs(
        group, factorization, range(group.reflection_count), _candidate_size(group, g), group.order,
    )
    logger.debug("RGS search at %s in %s: %d sets", group.element_text(g), group.name, len(subsets))
    return _keys_for(group, g, subsets, assignment)


def enumerate_rgs_by_graph(group: WreathGroup, g: int) -> List[RgsRecord]:
    """RGS(W, g) for G(m,1,n) and G(m,m,n) from the relative-graph characterization alone."""
    if not group.well_generated:
        raise NotWellGeneratedError(group.name)
    classification = classify_pqc(group, g)
    if not classification.is_pqc:
        return []
    gauge = cycle_gauge(group.element(g), group.spec)
    size = _candidate_size(group, g)
    out = []
    for subset in combinations(range(group.reflection_count), size):
        graph = relative_graph_classify(
            [group.reflection_list[r] for r in subset], classification.blocks, group.spec.m, gauge,
        )
        if graph_admits(graph, group.spec, classification):
            out.append(RgsRecord(subset, _wreath_key(graph, group.spec.m)))
    return out


def enumerate_rgs_by_product(group: ReflectionGroup, g: int) -> List[Tuple[int, ...]]:
    """
    RGS(W, g) from products: S qualifies iff t_1 ... t_k g is quasi-Coxeter.

    Only the order of positions in S is used.
    """
    if not group.well_generated:
        raise NotWellGeneratedError(group.name)
    out = []
    for subset in combinations(range(group.reflection_count), _candidate_size(group, g)):
        w = group.multiply(group.product_of_reflections(subset), g)
        if is_quasi_coxeter(group, w):
            out.append(subset)
    return out


def count_rgs_formula(spec: GroupSpec, classification: PqcClassification) -> int:
    """
    #RGS(W, g) for G(m,1,n) and G(m,m,n) from the partition data.

    S_n:                  prod(lambda) n^(r-2)
    full cycle / pair:    m^k n^(k-1) prod_{i=0..k} lambda_i
    Young in G(m,1,n):    phi(m) m^(k-1) n^(k-1) prod(lambda)
    Young in G(m,m,n):    phi(m) m^(k-1)/2 (n^k - n^(k-1) - sum_j (j-2)! n^(k-j) e_j) prod(lambda)

    Raises:
        NotPqcError: For a NotPqc classification.
    """
    if not classification.is_pqc or classification.case_tag == NOT_PQC:
        raise NotPqcError("RGS count needs a parabolic quasi-Coxeter element")
    lam = classification.lam
    n, m = spec.n, spec.m
    prod = math.prod(lam)
    if m == 1:
        value = Fraction(prod) * Fraction(n) ** (len(lam) - 2)
    elif classification.has_distinguished_part:
        k = len(lam) - 1
        value = Fraction(m) ** k * Fraction(n) ** (k - 1) * prod
    elif spec.p == 1:
        k = len(lam)
        value = euler_phi(m) * Fraction(m) ** (k - 1) * Fraction(n) ** (k - 1) * prod
    else:
        k = len(lam)
        tail = sum(math.factorial(j - 2) * Fraction(n) ** (k - j) * elementary_symmetric(lam, j) for j in range(2, k + 1))
        bracket = Fraction(n) ** k - Fraction(n) ** (k - 1) - tail
        value = Fraction(euler_phi(m)) * Fraction(m) ** (k - 1) / 2 * bracket * prod
    if value.denominator != 1:
        raise ArithmeticError(f"RGS count is not integral: {value}")
    return value.numerator


def dedekind_psi(m: int) -> int:
    return jordan_j2(m) // euler_phi(m)


def expected_aggregate_constant(spec: GroupSpec, classification: PqcClassification) -> Optional[Fraction]:
    """1, 1/2, 1 or psi(m)/12 by case; None for S_n."""
    if spec.m == 1 or not classification.is_pqc:
        return None
    if classification.case_tag == WITH_FULL_CYCLE:
        return Fraction(1)
    if classification.case_tag == WITH_COLOR_PAIR:
        return Fraction(1)
    if spec.p == 1:
        return Fraction(1, 2)
    return Fraction(dedekind_psi(spec.m), 12)


def aggregate_constant(rgs_sum: Fraction, rgs_count: int, classification: PqcClassification) -> Fraction:
    """sum of GD ratios / (#RGS * prod_{i>=1} lambda_i)."""
    if rgs_count == 0:
        raise NotPqcError("No relative generating sets")
    return Fraction(rgs_sum) / (rgs_count * math.prod(classification.other_parts))


def grammian_histogram(records: Sequence[RgsRecord]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for record in records:
        key = str(record.grammian_key)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def _coroot_coefficients(group: OrbitGroup, position: int) -> List[Fraction]:
    coeff = group.root_coefficients(position)
    root = group.root_vector(position)
    norm = sum(Fraction(x) * Fraction(x) for x in root)
    out = []
    for i, c in enumerate(coeff):
        simple = group.root_vector(i)
        simple_norm = sum(Fraction(x) * Fraction(x) for x in simple)
        out.append(Fraction(c) * simple_norm / norm)
    return out


def lattice_basis_generates(group: OrbitGroup, positions: Sequence[int]) -> bool:
    """
    Whether the roots and the coroots of n reflections both form lattice bases.

    Both change-of-basis determinants (from the simple roots, and from the
    simple coroots) must be +-1.

    Raises:
        NonCrystallographicError: For non-rational data.
        InvalidParameterError: Unless exactly rank reflections are given.
    """
    if not group.exact:
        raise NonCrystallographicError(group.name)
    if len(positions) != group.rank:
        raise InvalidParameterError(f"Need exactly {group.rank} reflections, got {len(positions)}")

    def det(rows: List[List[Fraction]]) -> sympy.Rational:
        return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows]).det()

    roots = det([[Fraction(x) for x in group.root_coefficients(r)] for r in positions])
    coroots = det([_coroot_coefficients(group, r) for r in positions])
    return abs(roots) == 1 and abs(coroots) == 1
