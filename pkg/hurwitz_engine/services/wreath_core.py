"""
Wreath Product Model

Exact combinatorial model of the groups G(m,p,n) = (Z/mZ wr S_n) restricted
to colour sums divisible by p. An element [u; a] acts on C^n by
[u; a] e_k = zeta^{a_k} e_{u(k)}, so that [u; a][v; b] = [uv; v(a) + b].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .group_table import ReflectionGroup
from ..utils.errors import DimensionMismatchError, ElementParseError, InvalidParameterError

TRANSPOSITION = "transposition"
DIAGONAL = "diagonal"


@dataclass(frozen=True)
class GroupSpec:
    """Parameters (m, p, n) of G(m,p,n)."""

    m: int
    p: int
    n: int

    def __post_init__(self) -> None:
        for name in ("m", "p", "n"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")
        if self.m % self.p:
            raise InvalidParameterError(
                f"p = {self.p} does not divide m = {self.m}",
                suggestion="G(m,p,n) needs p | m.",
            )

    @property
    def label(self) -> str:
        return f"G({self.m},{self.p},{self.n})"

    def well_generated(self) -> bool:
        return self.p == 1 or self.p == self.m

    def rank(self) -> int:
        return self.n - 1 if self.m == 1 else self.n

    def order(self) -> int:
        total = self.m ** self.n
        for k in range(2, self.n + 1):
            total *= k
        return total // self.p

    def identity(self) -> "WreathElement":
        return WreathElement(tuple(range(1, self.n + 1)), (0,) * self.n)

    def contains(self, x: "WreathElement") -> bool:
        return (
            x.n == self.n
            and sorted(x.perm) == list(range(1, self.n + 1))
            and all(0 <= c < self.m for c in x.colors)
            and sum(x.colors) % self.p == 0
        )


@dataclass(frozen=True, order=True)
class WreathElement:
    """An element [u; a]: 1-indexed permutation images plus colours mod m."""

    perm: Tuple[int, ...]
    colors: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_dict(self) -> Dict[str, List[int]]:
        return {"perm": list(self.perm), "colors": list(self.colors)}


@dataclass(frozen=True)
class Reflection:
    """
    A reflection of G(m,p,n).

    Transposition-like [(ij); k] is stored with i < j and colours k at i and
    -k at j. Diagonal [id; k e_i] has j = 0.
    """

    kind: str
    i: int
    j: int
    k: int
    index: int

    def element(self, spec: GroupSpec) -> WreathElement:
        perm = list(range(1, spec.n + 1))
        colors = [0] * spec.n
        if self.kind == TRANSPOSITION:
            perm[self.i - 1], perm[self.j - 1] = self.j, self.i
            colors[self.i - 1] = self.k % spec.m
            colors[self.j - 1] = (-self.k) % spec.m
        else:
            colors[self.i - 1] = self.k % spec.m
        return WreathElement(tuple(perm), tuple(colors))

    def order(self, m: int) -> int:
        if self.kind == TRANSPOSITION:
            return 2
        return m // gcd(self.k, m)

    def label(self) -> str:
        if self.kind == TRANSPOSITION:
            return f"[({self.i}{self.j});{self.k}]"
        return f"[id;{self.k}e{self.i}]"


@dataclass(frozen=True)
class Cycle:
    """A cycle of the underlying permutation, listed from its minimal point."""

    support: Tuple[int, ...]
    color: int

    @property
    def length(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class CycleData:
    cycles: Tuple[Cycle, ...]
    total_color: int

    def lengths(self) -> List[int]:
        return [c.length for c in self.cycles]


def _check_pair(x: WreathElement, y: WreathElement) -> None:
    if x.n != y.n:
        raise DimensionMismatchError(x.n, y.n)


def multiply(x: WreathElement, y: WreathElement, spec: GroupSpec) -> WreathElement:
    """
    Multiply two elements, right factor applied first.

    Args:
        x: Left factor [u; a].
        y: Right factor [v; b].
        spec: Ambient group parameters (only m is used for reduction).

    Returns:
        [uv; v(a) + b] with v(a)_k = a_{v(k)}.

    Raises:
        DimensionMismatchError: If x and y act on different n.
    """
    _check_pair(x, y)
    m = spec.m
    u, a = x.perm, x.colors
    v, b = y.perm, y.colors
    perm = tuple(u[v[k] - 1] for k in range(len(v)))
    colors = tuple((a[v[k] - 1] + b[k]) % m for k in range(len(v)))
    return WreathElement(perm, colors)


def inverse(x: WreathElement, spec: GroupSpec) -> WreathElement:
    n = x.n
    inv = [0] * n
    for k, image in enumerate(x.perm, start=1):
        inv[image - 1] = k
    colors = tuple((-x.colors[inv[k] - 1]) % spec.m for k in range(n))
    return WreathElement(tuple(inv), colors)


def reflections_of(spec: GroupSpec) -> List[Reflection]:
    """
    Canonical ordered reflection list of G(m,p,n).

    Transposition-like reflections come first, ordered by (i, j, k), then the
    diagonal reflections ordered by (i, k).
    """
    out: List[Reflection] = []
    n, m, p = spec.n, spec.m, spec.p
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(m):
                out.append(Reflection(TRANSPOSITION, i, j, k, len(out)))
    if p < m:
        for i in range(1, n + 1):
            for k in range(p, m, p):
                out.append(Reflection(DIAGONAL, i, 0, k, len(out)))
    return out


def cycle_data(x: WreathElement, spec: GroupSpec) -> CycleData:
    """Cycles of the underlying permutation with their colours, ordered by minimal point."""
    seen = [False] * x.n
    cycles: List[Cycle] = []
    for start in range(1, x.n + 1):
        if seen[start - 1]:
            continue
        support = []
        color = 0
        point = start
        while not seen[point - 1]:
            seen[point - 1] = True
            support.append(point)
            color += x.colors[point - 1]
            point = x.perm[point - 1]
        cycles.append(Cycle(tuple(support), color % spec.m))
    total = sum(x.colors) % spec.m
    return CycleData(tuple(cycles), total)


def cycle_gauge(x: WreathElement, spec: GroupSpec) -> Dict[int, int]:
    """
    Diagonal gauge d with [id; d] x [id; -d] a colourless permutation on every
    colour-0 cycle of x.

    Along each cycle d_{u(k)} = d_k - a_k, starting from d = 0 at the minimal
    point. Points on cycles of nonzero colour get the same walk, which is then
    not closed.
    """
    gauge: Dict[int, int] = {}
    for cycle in cycle_data(x, spec).cycles:
        value = 0
        for point in cycle.support:
            gauge[point] = value % spec.m
            value -= x.colors[point - 1]
    return gauge


def project(x: WreathElement, spec: GroupSpec, r: int) -> Tuple[WreathElement, GroupSpec]:
    """
    Image of x under the surjection G(m,1,n) -> G(r,1,n) induced by zeta_m -> zeta_m^{m/r}.

    Raises:
        InvalidParameterError: If r does not divide m.
    """
    if r < 1 or spec.m % r:
        raise InvalidParameterError(f"r = {r} does not divide m = {spec.m}")
    target = GroupSpec(r, 1, spec.n)
    return WreathElement(x.perm, tuple(c % r for c in x.colors)), target


def make_element(perm: Sequence[int], colors: Optional[Sequence[int]], spec: GroupSpec) -> WreathElement:
    """
    Build and validate an element of spec from raw images and colours.

    Colours are reduced mod m. The element must be a bijection on 1..n and
    have colour sum divisible by p.
    """
    text = f"perm={list(perm)}, colors={None if colors is None else list(colors)}"
    if colors is None:
        colors = [0] * len(perm)
    if len(perm) != spec.n or len(colors) != spec.n:
        raise ElementParseError(text, f"expected {spec.n} images and {spec.n} colours")
    try:
        images = tuple(int(v) for v in perm)
        cols = tuple(int(c) % spec.m for c in colors)
    except (TypeError, ValueError) as e:
        raise ElementParseError(text, "entries must be integers") from e
    if sorted(images) != list(range(1, spec.n + 1)):
        raise ElementParseError(text, "perm is not a permutation of 1..n")
    if sum(cols) % spec.p:
        raise ElementParseError(text, f"colour sum is not divisible by p = {spec.p}")
    return WreathElement(images, cols)


class WreathRealization:
    """Adapter exposing G(m,p,n) to the generic group enumerator."""

    kind = "wreath"

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.reflection_list = reflections_of(spec)

    @property
    def name(self) -> str:
        return self.spec.label

    @property
    def rank(self) -> int:
        return self.spec.rank()

    @property
    def is_real(self) -> bool:
        return self.spec.m <= 2

    @property
    def well_generated(self) -> bool:
        return self.spec.well_generated()

    def identity(self) -> WreathElement:
        return self.spec.identity()

    def reflections(self) -> List[WreathElement]:
        return [r.element(self.spec) for r in self.reflection_list]

    def multiply(self, x: WreathElement, y: WreathElement) -> WreathElement:
        return multiply(x, y, self.spec)

    def inverse(self, x: WreathElement) -> WreathElement:
        return inverse(x, self.spec)

    def fixed_codim(self, x: WreathElement) -> int:
        zero_cycles = sum(1 for c in cycle_data(x, self.spec).cycles if c.color == 0)
        return self.spec.n - zero_cycles

    def element_text(self, x: WreathElement) -> Dict[str, List[int]]:
        return x.to_dict()

    def sort_key(self, x: WreathElement) -> Tuple:
        return (x.perm, x.colors)


class WreathGroup(ReflectionGroup):
    """G(m,p,n) enumerated into ids, keeping the structured reflection list."""

    def __init__(self, spec: GroupSpec, max_order: int = 1200):
        realization = WreathRealization(spec)
        super().__init__(realization, max_order=max_order)
        self.spec = spec
        self.reflection_list = realization.reflection_list

    def element(self, g: int) -> WreathElement:
        return self.keys[g]

    def id_of_element(self, x: WreathElement) -> int:
        if not self.spec.contains(x):
            raise ElementParseError(str(x.to_dict()), f"not an element of {self.spec.label}")
        return self.index[x]

    def cycle_data(self, g: int) -> CycleData:
        return cycle_data(self.keys[g], self.spec)
