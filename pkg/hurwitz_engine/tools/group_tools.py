"""
Group Tools

Group summaries, factorization counts, relative generating set listings,
Hurwitz numbers and Phi polynomials.
"""

import logging
from threading import Lock
from typing import Dict, List, Optional, Tuple

from ..config import Settings
from ..services.closed_forms import ffull_closed_form, fred_closed_form, hurwitz_number
from ..services.group_table import ReflectionGroup
from ..services.lattice_cache import get_lattice_cache, table_key
from ..services.parabolic import classify_pqc, full_reflection_length, parabolic_closure
from ..services.real_orbit_group import (
    OrbitGroup,
    build_group,
    cartan_and_connection_index,
    datum_from_vectors,
    preset_datum,
)
from ..services.rgs import count_rgs_formula, enumerate_rgs, grammian_histogram
from ..services.subgroup_lattice import Lattice, count_tuples, enumerate_lattice, phi_polynomial
from ..services.wreath_core import WreathGroup
from ..utils.errors import HurwitzError, InvalidParameterError
from ..utils.validators import (
    parse_family,
    parse_lambda,
    parse_root_vectors,
    resolve_element,
    validate_genus,
    validate_group_source,
    validate_length,
)

logger = logging.getLogger(__name__)

_groups: Dict[Tuple[str, str], ReflectionGroup] = {}
_lattices: Dict[int, Lattice] = {}
_lock = Lock()


def resolve_group(
    settings: Settings,
    family: Optional[str] = None,
    preset: Optional[str] = None,
    roots: Optional[str] = None,
) -> ReflectionGroup:
    """
    Build (or reuse) the group named by exactly one of family, preset, roots.

    Raises:
        InvalidParameterError: For mixed or missing addressing.
        UnknownPresetError: For an unknown preset name.
        BudgetExceededError: If the group is larger than max_group_order.
    """
    source = validate_group_source(family, preset, roots)
    value = {"family": family, "preset": preset, "roots": roots}[source]
    key = (source, value.strip())
    with _lock:
        cached = _groups.get(key)
    if cached is not None:
        return cached

    if source == "family":
        group: ReflectionGroup = WreathGroup(parse_family(value), max_order=settings.max_group_order)
    elif source == "preset":
        group = build_group(preset_datum(value.strip(), settings.enable_f4), settings.max_group_order)
    else:
        group = build_group(datum_from_vectors(parse_root_vectors(value)), settings.max_group_order)

    with _lock:
        return _groups.setdefault(key, group)


def lattice_for(settings: Settings, group: ReflectionGroup) -> Lattice:
    """Reflection subgroup lattice of group, memoized per group and cached on disk."""
    with _lock:
        cached = _lattices.get(id(group))
    if cached is not None:
        return cached
    cache = _cache(settings) if settings.cache_enabled else None
    lattice = enumerate_lattice(
        group,
        max_size=settings.max_lattice_size,
        cache=cache,
        element_cache_limit=settings.element_cache_limit,
    )
    with _lock:
        return _lattices.setdefault(id(group), lattice)


def _cache(settings: Settings):
    return get_lattice_cache(settings.cache_dir, settings.cache_enabled)


def reset_group_memo() -> None:
    with _lock:
        _groups.clear()
        _lattices.clear()


def ffull_formula(group: ReflectionGroup, g: int) -> Optional[int]:
    """Closed-form F^full(g) where one exists: H0 for S_n, the family formulas for G(m,1,n) and G(m,m,n)."""
    if not isinstance(group, WreathGroup):
        return None
    spec = group.spec
    cycles = group.cycle_data(g)
    if spec.m == 1:
        return hurwitz_number(0, cycles.lengths())
    if spec.p in (1, spec.m):
        return ffull_closed_form(spec, cycles)
    return None


def _error(e: Exception) -> Dict:
    if isinstance(e, HurwitzError):
        return {"success": False, "error": e.to_dict()}
    logger.exception("Unexpected failure")
    return {"success": False, "error": {"code": "INTERNAL_ERROR", "message": str(e)}}


class GroupTools:
    """Group and counting tools class"""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize group tools.

        Args:
            settings: Loaded settings; Settings.load() when omitted.
        """
        self.settings = settings or Settings.load()

    def _context(self, family, preset, roots, element) -> Tuple[ReflectionGroup, int]:
        group = resolve_group(self.settings, family, preset, roots)
        return group, resolve_element(group, element)

    def group_info(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
    ) -> Dict:
        """
        Summarize a group, and optionally one of its elements.

        Returns:
            Order, rank, reflection count, conjugacy classes; for an element its
            lengths, classification and parabolic closure.

        Example:
            >>> tools = GroupTools()
            >>> tools.group_info(family="2,1,2")["order"]
            '8'
        """
        try:
            group, g = self._context(family, preset, roots, element)
            data = {
                "group": group.name,
                "order": str(group.order),
                "rank": group.rank,
                "reflections": group.reflection_count,
                "real": group.is_real,
                "well_generated": group.well_generated,
                "conjugacy_classes": len(group.conjugacy_classes()),
            }
            if isinstance(group, OrbitGroup):
                cartan = cartan_and_connection_index(group)
                data["coxeter_number"] = group.coxeter_number
                data["coxeter_matrix"] = group.datum.coxeter_matrix()
                data["crystallographic"] = cartan.connection_index is not None
                if cartan.connection_index is not None:
                    data["connection_index"] = cartan.connection_index
                    data["highest_root"] = list(cartan.highest_root)
            if element is not None:
                closure = parabolic_closure(group, g)
                info = {
                    "element": group.element_text(g),
                    "order": group.element_order(g),
                    "lR": group.lengths[g],
                    "closure_order": str(closure.order),
                    "closure_reflections": closure.reflection_count,
                }
                if group.well_generated:
                    info["classification"] = classify_pqc(group, g).to_dict()
                data["element"] = info
            return {**data, "success": True}
        except Exception as e:
            return _error(e)

    def count_reduced(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
    ) -> Dict:
        """Fred(g): reduced reflection factorizations, with the closed form when g is pqc in G(m,1,n) or G(m,m,n)."""
        try:
            group, g = self._context(family, preset, roots, element)
            lr = group.lengths[g]
            data = {
                "group": group.name,
                "element": group.element_text(g),
                "lR": lr,
                "count": str(count_tuples(group, g, lr)),
            }
            if isinstance(group, WreathGroup) and group.well_generated:
                classification = classify_pqc(group, g)
                if classification.is_pqc:
                    data["formula"] = str(fred_closed_form(classification, group.spec.m))
            return {**data, "success": True}
        except Exception as e:
            return _error(e)

    def count_full(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
        length: Optional[int] = None,
    ) -> Dict:
        """
        Full reflection factorizations of g.

        Args:
            length: Factorization length; ltr(g) when omitted.

        Returns:
            The Möbius-inversion count, plus the closed form at length ltr(g)
            when one exists.
        """
        try:
            group, g = self._context(family, preset, roots, element)
            lattice = lattice_for(self.settings, group)
            ltr = full_reflection_length(group, g, lattice, self.settings.max_full_length)
            n = ltr if length is None else validate_length(length, self.settings.max_full_length)
            data = {
                "group": group.name,
                "element": group.element_text(g),
                "ltr": ltr,
                "length": n,
                "count": str(lattice.count_full(g, n)),
            }
            if n == ltr:
                formula = ffull_formula(group, g)
                if formula is not None:
                    data["formula"] = str(formula)
            return {**data, "success": True}
        except Exception as e:
            return _error(e)

    def rgs_count(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
    ) -> Dict:
        """#RGS(W, g) by search, the grammian key histogram, and the family formula where it applies."""
        try:
            group, g = self._context(family, preset, roots, element)
            records = enumerate_rgs(group, g)
            data = {
                "group": group.name,
                "element": group.element_text(g),
                "count": str(len(records)),
                "grammian_keys": grammian_histogram(records),
            }
            if isinstance(group, WreathGroup):
                classification = classify_pqc(group, g)
                if classification.is_pqc:
                    data["formula"] = str(count_rgs_formula(group.spec, classification))
            return {**data, "success": True}
        except Exception as e:
            return _error(e)

    def rgs_list(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
    ) -> Dict:
        try:
            group, g = self._context(family, preset, roots, element)
            records = enumerate_rgs(group, g)
            return {
                "group": group.name,
                "element": group.element_text(g),
                "count": str(len(records)),
                "sets": [record.to_dict(group) for record in records],
                "success": True,
            }
        except Exception as e:
            return _error(e)

    def hurwitz(self, genus, lam: str) -> Dict:
        """
        Transitive Hurwitz number H_genus(lambda).

        Example:
            >>> GroupTools().hurwitz(0, "3")["value"]
            '3'
        """
        try:
            g = validate_genus(genus)
            parts = parse_lambda(lam)
            return {
                "genus": g,
                "lambda": parts,
                "value": str(hurwitz_number(g, parts)),
                "success": True,
            }
        except Exception as e:
            return _error(e)

    def phi(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        element: Optional[str] = None,
    ) -> Dict:
        """Phi_W(g; X) with the exponential-sum coefficients it comes from."""
        try:
            group, g = self._context(family, preset, roots, element)
            if not group.is_real:
                raise InvalidParameterError(
                    f"{group.name} is not real",
                    suggestion="Phi polynomials are computed for real groups only.",
                )
            poly = phi_polynomial(lattice_for(self.settings, group), g)
            return {
                "group": group.name,
                "element": group.element_text(g),
                "ltr": poly.ltr,
                "degree": poly.degree,
                "coefficients": [str(c) for c in poly.coefficients],
                "value_at_one": str(poly.value_at(1)),
                "nonnegative": poly.is_nonnegative(),
                "kappas": {str(j): str(k) for j, k in sorted(poly.kappas.items())},
                "success": True,
            }
        except Exception as e:
            return _error(e)


    def cache_stats(self) -> Dict:
        """Entries, hits and misses of the lattice cache for this process."""
        try:
            return {**_cache(self.settings).get_stats(), "success": True}
        except Exception as e:
            return _error(e)

    def cache_evict(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
    ) -> Dict:
        """
        Drop the stored lattice of one group from memory and disk.

        The next lattice request for the group enumerates it again.
        """
        try:
            group = resolve_group(self.settings, family, preset, roots)
            key = table_key(group.reflection_multiplication_table())
            with _lock:
                _lattices.pop(id(group), None)
            removed = _cache(self.settings).delete(key)
            logger.info("Evicted lattice of %s: %s", group.name, removed)
            return {"group": group.name, "key": key, "removed": removed, "success": True}
        except Exception as e:
            return _error(e)

def element_rows(group: ReflectionGroup) -> List[int]:
    """Class representatives in canonical order: by lR, then representative."""
    return [cls[0] for cls in group.conjugacy_classes()]
