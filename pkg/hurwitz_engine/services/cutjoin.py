"""
Cut-and-Join

The cut-and-join recursion for full factorizations in real reflection
groups, its reformulation in terms of relative generating sets and
connection indices, and the poset of prefixes of minimum-length full
factorizations of the identity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .group_table import ReflectionGroup
from .parabolic import canonical_factorization, classify_pqc, is_parabolic_subgroup, parabolic_closure
from .real_orbit_group import OrbitGroup
from .rgs import search_rgs
from .subgroup_lattice import Lattice, closure
from ..utils.errors import BudgetExceededError, InvalidParameterError, NonCrystallographicError, NotPqcError

logger = logging.getLogger(__name__)

Node = Tuple[int, int]


class _Joins:
    """Memoized masks of <W', t>."""

    def __init__(self, group: ReflectionGroup):
        self.group = group
        self._table: Dict[Tuple[int, int], int] = {}

    def __call__(self, mask: int, position: int) -> int:
        if mask >> position & 1:
            return mask
        key = (mask, position)
        if key not in self._table:
            self._table[key] = closure(self.group, mask | 1 << position).mask
        return self._table[key]


def _require_real(group: ReflectionGroup) -> None:
    if not group.is_real:
        raise InvalidParameterError(
            f"{group.name} is not a real reflection group",
            suggestion="Cut-and-join is available for real groups only.",
        )


def _require_pqc(group: ReflectionGroup, g: int) -> None:
    if not classify_pqc(group, g).is_pqc:
        raise NotPqcError(f"{group.element_text(g)} is not parabolic quasi-Coxeter in {group.name}")


@dataclass
class CutJoinTerm:
    reflection: int
    mask: int
    value: int


@dataclass
class CutJoinResult:
    element: int
    ltr: int
    first_sum: int
    second_sum: int
    first_terms: List[CutJoinTerm] = field(default_factory=list)
    second_terms: List[CutJoinTerm] = field(default_factory=list)
    first_terms_pqc: bool = True

    @property
    def total(self) -> int:
        return self.first_sum + self.second_sum


def cutjoin_rhs(group: ReflectionGroup, g: int, lattice: Lattice) -> CutJoinResult:
    """
    Right side of the cut-and-join recursion at g.

    First sum: t in W_g and parabolic W' of rank n-1 with <W', t> = W.
    Second sum: t outside W_g and reflection subgroups W' of rank n with
    <W', t> = W. Each term is F^full_{W'}(gt) at length ltr(g) - 1, which is
    nonzero exactly when gt is parabolic quasi-Coxeter in W'.

    Raises:
        InvalidParameterError: For a non-real group.
        NotPqcError: When g is not parabolic quasi-Coxeter.
    """
    _require_real(group)
    _require_pqc(group, g)
    rank = group.rank
    ltr = 2 * rank - group.lengths[g]
    length = ltr - 1
    closure_mask = parabolic_closure(group, g).mask
    joins = _Joins(group)
    result = CutJoinResult(element=g, ltr=ltr, first_sum=0, second_sum=0)
    if length < 0:
        return result

    for t in range(group.reflection_count):
        gt = group.rmul[t][g]
        inside = bool(closure_mask >> t & 1)
        wanted_rank = rank - 1 if inside else rank
        for sub in lattice.subgroups:
            if lattice.rank_of(sub.mask) != wanted_rank:
                continue
            if joins(sub.mask, t) != group.full_mask:
                continue
            if inside and not is_parabolic_subgroup(lattice, sub.mask):
                continue
            if inside and not lattice.contains(sub.mask, gt):
                continue
            value = lattice.full_count_within(sub.mask, gt, length)
            if inside:
                if value == 0:
                    result.first_terms_pqc = False
                    logger.warning(
                        "Admissible parabolic subgroup %d misses %s as parabolic quasi-Coxeter",
                        sub.mask, group.element_text(gt),
                    )
                result.first_sum += value
                result.first_terms.append(CutJoinTerm(t, sub.mask, value))
            elif value:
                result.second_sum += value
                result.second_terms.append(CutJoinTerm(t, sub.mask, value))
    logger.debug(
        "Cut-and-join at %s in %s: %d + %d",
        group.element_text(g), group.name, result.first_sum, result.second_sum,
    )
    return result


@dataclass
class RecurrenceSides:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _weyl_summand(group: OrbitGroup, lattice: Lattice, x: int, mask: int) -> Fraction:
    """Fred_{W'}(x) #RGS(W', x) I(W'_x) / I(W') for x parabolic quasi-Coxeter in W'."""
    lr = group.lengths[x]
    fred = int(lattice.tuple_series(mask, lr)[lr][x])
    sub = lattice.subgroup(mask)
    factorization = canonical_factorization(group, x, mask)
    rgs_count = len(search_rgs(
        group, factorization, sub.positions(), lattice.rank_of(mask) - lr, sub.order,
    ))
    closure_in_sub = mask & parabolic_closure(group, x).mask
    ratio = Fraction(group.subgroup_connection_index(closure_in_sub), group.subgroup_connection_index(mask))
    return fred * rgs_count * ratio


def rgs_recurrence_sides(group: OrbitGroup, g: int, lattice: Lattice) -> RecurrenceSides:
    """
    Both sides of the cut-and-join recursion rewritten with the Weyl main theorem.

    ltr(g) Fred(g) #RGS(W,g) I(W_g)/I(W)
        = lR(g) * sum_first  Fred(gt) #RGS(W',gt) I(W'_gt)/I(W')
        + 1/(lR(g)+1) * sum_second (same summand)

    Raises:
        NonCrystallographicError: Unless the group has integral Cartan data.
    """
    if not isinstance(group, OrbitGroup) or not group.exact:
        raise NonCrystallographicError(group.name)
    cut = cutjoin_rhs(group, g, lattice)
    lr = group.lengths[g]
    lhs = cut.ltr * _weyl_summand(group, lattice, g, group.full_mask)
    first = sum((_weyl_summand(group, lattice, group.rmul[term.reflection][g], term.mask) for term in cut.first_terms if term.value), Fraction(0))
    second = sum((_weyl_summand(group, lattice, group.rmul[term.reflection][g], term.mask) for term in cut.second_terms), Fraction(0))
    return RecurrenceSides(lhs=lhs, rhs=lr * first + second / (lr + 1))


def verify_rgs_recurrence(group: OrbitGroup, g: int, lattice: Lattice) -> bool:
    sides = rgs_recurrence_sides(group, g, lattice)
    if not sides.holds:
        logger.warning("RGS recurrence fails at %s in %s: %s != %s", group.element_text(g), group.name, sides.lhs, sides.rhs)
    return sides.holds


@dataclass
class PrefixPoset:
    """
    Pairs (g_i, W_i) of prefix products and generated subgroups.

    levels[i] lists the rank-i nodes in canonical order; graph holds the
    cover relations as a networkx DiGraph.
    """

    group_name: str
    levels: List[List[Node]]
    graph: nx.DiGraph
    chain_count: int
    prefix_lengths_hold: bool

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def middle_rank(self) -> List[Node]:
        return self.levels[self.height // 2]

    def covers(self) -> List[Tuple[Node, Node]]:
        return sorted(self.graph.edges())

    def to_dot(self) -> str:
        """DOT text: labels 'element-id / subgroup-mask', one same-rank cluster per level."""
        names: Dict[Node, str] = {}
        lines = ["digraph prefix_poset {", "  rankdir=BT;"]
        for i, level in enumerate(self.levels):
            lines.append(f"  subgraph rank_{i} {{")
            lines.append("    rank=same;")
            for j, node in enumerate(level):
                names[node + (i,)] = f"n{i}_{j}"
                lines.append(f'    n{i}_{j} [label="{node[0]} / {node[1]}"];')
            lines.append("  }")
        for i, level in enumerate(self.levels[:-1]):
            for node in level:
                for succ in sorted(self.graph.successors(node + (i,))):
                    lines.append(f"  {names[node + (i,)]} -> {names[succ]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, object]:
        return {
            "group": self.group_name,
            "height": self.height,
            "level_sizes": [len(level) for level in self.levels],
            "chain_count": str(self.chain_count),
            "prefix_lengths_hold": self.prefix_lengths_hold,
        }


def prefix_poset(group: ReflectionGroup, lattice: Lattice, max_nodes: int = 200000) -> PrefixPoset:
    """
    Poset of prefixes of minimum-length full factorizations of the identity.

    A node at rank i is a pair (g_i, mask of W_i) with 2 rank(W_i) - lR(g_i) = i.
    Nodes that do not reach (id, W) at rank 2n are dropped. Maximal chains
    are in bijection with the factorizations.

    Raises:
        InvalidParameterError: For a non-real group.
        BudgetExceededError: If the node count exceeds max_nodes.
    """
    _require_real(group)
    height = 2 * group.rank
    joins = _Joins(group)
    graph = nx.DiGraph()
    root = (group.identity, 0, 0)
    graph.add_node(root)
    frontier = [root]
    for i in range(height):
        nxt = set()
        for node in frontier:
            x, mask, _ = node
            for t in range(group.reflection_count):
                y = group.rmul[t][x]
                bigger = joins(mask, t)
                if 2 * lattice.rank_of(bigger) - group.lengths[y] != i + 1:
                    continue
                child = (y, bigger, i + 1)
                graph.add_edge(node, child)
                nxt.add(child)
        if graph.number_of_nodes() > max_nodes:
            raise BudgetExceededError("Prefix poset size", max_nodes)
        frontier = sorted(nxt)

    top = (group.identity, group.full_mask, height)
    if top not in graph:
        raise InvalidParameterError(f"No minimum-length full factorization of the identity in {group.name}")
    keep = nx.ancestors(graph, top) | {top}
    graph = graph.subgraph(keep).copy()

    paths: Dict[Tuple[int, int, int], int] = {root: 1}
    for node in nx.topological_sort(graph):
        if node == root:
            continue
        paths[node] = sum(paths[p] for p in graph.predecessors(node))

    levels: List[List[Node]] = [[] for _ in range(height + 1)]
    for x, mask, i in graph.nodes:
        levels[i].append((x, mask))
    for level in levels:
        level.sort(key=lambda node: (group.sort_key(node[0]), node[1]))

    prefix_ok = all(
        lattice.full_reflection_length(x, i, mask) == i
        for i, level in enumerate(levels) for x, mask in level
    )
    if not prefix_ok:
        logger.warning("A prefix (x, W) at rank i has ltr within W different from i in %s", group.name)
    logger.info("Prefix poset of %s: %d nodes, %d chains", group.name, graph.number_of_nodes(), paths[top])
    return PrefixPoset(group.name, levels, graph, paths[top], prefix_ok)
