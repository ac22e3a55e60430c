"""
Enumerated Reflection Groups

A finite group generated by reflections, enumerated once into integer ids.
Elements are discovered breadth-first from the identity by right
multiplication with the canonical reflections, so the discovery depth of an
element is its reflection length. All later algorithms work on ids and on
the multiplication tables built here.
"""

from __future__ import annotations

import logging
from collections import deque
from threading import Lock
from typing import Any, Dict, Hashable, List, Optional, Protocol, Sequence, Tuple

from ..utils.errors import BudgetExceededError

logger = logging.getLogger(__name__)


class Realization(Protocol):
    """What the enumerator needs from a concrete group model."""

    kind: str

    @property
    def name(self) -> str: ...

    @property
    def rank(self) -> int: ...

    @property
    def is_real(self) -> bool: ...

    @property
    def well_generated(self) -> bool: ...

    def identity(self) -> Hashable: ...

    def reflections(self) -> Sequence[Hashable]: ...

    def multiply(self, x: Any, y: Any) -> Hashable: ...

    def inverse(self, x: Any) -> Hashable: ...

    def fixed_codim(self, x: Any) -> int: ...

    def element_text(self, x: Any) -> Dict[str, Any]: ...

    def sort_key(self, x: Any) -> Tuple: ...


class ReflectionGroup:
    """
    Finite reflection group with elements numbered 0..order-1.

    Attributes:
        realization: The concrete model (wreath or root-permutation).
        keys: Element keys of the realization, indexed by id.
        identity: Id of the identity (always 0).
        reflections: Element ids of the canonical reflections, by position.
        rmul: rmul[r][g] is the id of g * t_r.
        lmul: lmul[r][g] is the id of t_r * g.
        inverse: inverse[g] is the id of g^-1.
        lengths: Reflection length of every element.
        codims: Codimension of the fixed space of every element.
    """

    def __init__(self, realization: Realization, max_order: int = 1200):
        self.realization = realization
        self.name = realization.name
        self.rank = realization.rank
        self.is_real = realization.is_real
        self.well_generated = realization.well_generated

        identity = realization.identity()
        reflection_keys = list(realization.reflections())
        self.keys: List[Hashable] = [identity]
        self.index: Dict[Hashable, int] = {identity: 0}
        self.lengths: List[int] = [0]
        self.rmul: List[List[int]] = [[] for _ in reflection_keys]

        queue = deque([0])
        while queue:
            g = queue.popleft()
            key = self.keys[g]
            for r, t in enumerate(reflection_keys):
                h = realization.multiply(key, t)
                idx = self.index.get(h)
                if idx is None:
                    if len(self.keys) >= max_order:
                        raise BudgetExceededError(f"Order of {self.name}", max_order)
                    idx = len(self.keys)
                    self.index[h] = idx
                    self.keys.append(h)
                    self.lengths.append(self.lengths[g] + 1)
                    queue.append(idx)
                self.rmul[r].append(idx)

        self.order = len(self.keys)
        self.identity = 0
        self.reflections: Tuple[int, ...] = tuple(self.index[t] for t in reflection_keys)
        self.reflection_position: Dict[int, int] = {g: r for r, g in enumerate(self.reflections)}
        self.lmul: List[List[int]] = [
            [self.index[realization.multiply(t, key)] for key in self.keys]
            for t in reflection_keys
        ]
        self.inverse: List[int] = [self.index[realization.inverse(key)] for key in self.keys]
        self.reflection_inverse: Tuple[int, ...] = tuple(
            self.reflection_position[self.inverse[g]] for g in self.reflections
        )
        self.codims: List[int] = [realization.fixed_codim(key) for key in self.keys]
        self._conj: Optional[List[List[int]]] = None
        self._classes: Optional[List[List[int]]] = None
        self._lock = Lock()
        logger.info(
            "Enumerated %s: order %d, %d reflections, rank %d",
            self.name, self.order, len(self.reflections), self.rank,
        )

    @property
    def kind(self) -> str:
        return self.realization.kind

    @property
    def reflection_count(self) -> int:
        return len(self.reflections)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.reflections)) - 1

    def multiply(self, a: int, b: int) -> int:
        return self.index[self.realization.multiply(self.keys[a], self.keys[b])]

    def conjugate(self, u: int, g: int) -> int:
        """u g u^-1."""
        return self.multiply(self.multiply(u, g), self.inverse[u])

    def product(self, ids: Sequence[int]) -> int:
        """Product of a sequence of element ids, left to right."""
        acc = self.identity
        for g in ids:
            acc = self.multiply(acc, g)
        return acc

    def product_of_reflections(self, positions: Sequence[int]) -> int:
        acc = self.identity
        for r in positions:
            acc = self.rmul[r][acc]
        return acc

    @property
    def reflection_conjugation(self) -> List[List[int]]:
        """conj[a][b] is the position of t_a t_b t_a^-1."""
        with self._lock:
            if self._conj is None:
                table = []
                for a in range(len(self.reflections)):
                    inv_a = self.reflection_inverse[a]
                    row = []
                    for b, tb in enumerate(self.reflections):
                        elem = self.lmul[a][self.rmul[inv_a][tb]]
                        row.append(self.reflection_position[elem])
                    table.append(row)
                self._conj = table
            return self._conj

    def conjugacy_classes(self) -> List[List[int]]:
        """
        Conjugacy classes as sorted id lists.

        Classes are orbits under conjugation by the reflections, which
        generate the group. They are ordered by (reflection length,
        representative key), and every class's representative is its
        minimal element under that order.
        """
        with self._lock:
            if self._classes is not None:
                return self._classes
        seen = [False] * self.order
        classes: List[List[int]] = []
        for g in range(self.order):
            if seen[g]:
                continue
            seen[g] = True
            orbit = [g]
            queue = deque([g])
            while queue:
                x = queue.popleft()
                for r in range(len(self.reflections)):
                    y = self.lmul[r][self.rmul[self.reflection_inverse[r]][x]]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        queue.append(y)
            classes.append(sorted(orbit, key=self.sort_key))
        classes.sort(key=lambda cls: self.sort_key(cls[0]))
        with self._lock:
            self._classes = classes
        return classes

    def sort_key(self, g: int) -> Tuple:
        return (self.lengths[g], self.realization.sort_key(self.keys[g]))

    def element_text(self, g: int) -> Dict[str, Any]:
        return self.realization.element_text(self.keys[g])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.multiply(x, g)
            k += 1
        return k

    def reflection_multiplication_table(self) -> List[List[int]]:
        """Ids of t_a t_b for all reflection pairs; the lattice cache key is built from it."""
        return [[self.rmul[b][ta] for b in range(len(self.reflections))] for ta in self.reflections]
