"""
Verification Tools

Runs the closed forms against the brute-force oracles: the verification
matrix over conjugacy classes, the cut-and-join recursion, the
roots-of-unity identities and the prefix poset.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config import Settings
from ..services.closed_forms import (
    BOTH,
    chebyshev_helpers,
    fred_closed_form,
    generating_function_check,
    primitive_root_identities,
)
from ..services.cutjoin import cutjoin_rhs, prefix_poset, verify_rgs_recurrence
from ..services.cyclo_gram import main_theorem_rhs
from ..services.group_table import ReflectionGroup
from ..services.parabolic import classify_pqc, full_reflection_length
from ..services.real_orbit_group import OrbitGroup
from ..services.rgs import count_rgs_formula
from ..services.subgroup_lattice import Lattice, count_tuples
from ..services.wreath_core import WreathGroup
from ..utils.errors import HurwitzError, InvalidParameterError, NotWellGeneratedError
from ..utils.validators import validate_max_m
from .group_tools import element_rows, ffull_formula, lattice_for, resolve_group

logger = logging.getLogger(__name__)

CHEBYSHEV_MAX_S = 50


@dataclass
class VerificationRow:
    """
    One conjugacy class of the verification matrix.

    Counts are decimal strings; None marks a column that does not apply.
    match is the conjunction of every equality the row can state.
    """

    group: str
    representative: Dict[str, Any]
    case_tag: str
    lR: int
    ltr: int
    fred_bruteforce: str
    fred_formula: Optional[str]
    ffull_bruteforce: str
    ffull_prop_formula: Optional[str]
    main_thm_rhs: Optional[str]
    main_thm_weyl_rhs: Optional[str]
    rgs_count_search: Optional[str]
    rgs_count_formula: Optional[str]
    match: bool = True

    def comparisons(self) -> List[tuple]:
        pairs = [
            (self.fred_bruteforce, self.fred_formula),
            (self.ffull_bruteforce, self.ffull_prop_formula),
            (self.ffull_bruteforce, self.main_thm_rhs),
            (self.ffull_bruteforce, self.main_thm_weyl_rhs),
            (self.rgs_count_search, self.rgs_count_formula),
        ]
        return [(a, b) for a, b in pairs if a is not None and b is not None]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]


def _str(value) -> Optional[str]:
    return None if value is None else str(value)


def verification_row(settings: Settings, group: ReflectionGroup, lattice: Lattice, g: int) -> VerificationRow:
    """Compute every column for the class of g."""
    classification = classify_pqc(group, g)
    lr = group.lengths[g]
    ltr = full_reflection_length(group, g, lattice, settings.max_full_length)
    row = VerificationRow(
        group=group.name,
        representative=group.element_text(g),
        case_tag=classification.case_tag,
        lR=lr,
        ltr=ltr,
        fred_bruteforce=str(count_tuples(group, g, lr)),
        fred_formula=None,
        ffull_bruteforce=str(lattice.count_full(g, ltr)),
        ffull_prop_formula=None,
        main_thm_rhs=None,
        main_thm_weyl_rhs=None,
        rgs_count_search=None,
        rgs_count_formula=None,
    )
    if classification.is_pqc:
        if isinstance(group, WreathGroup):
            row.fred_formula = str(fred_closed_form(classification, group.spec.m))
            row.rgs_count_formula = str(count_rgs_formula(group.spec, classification))
        row.ffull_prop_formula = _str(ffull_formula(group, g))
        tolerance = settings.float_tolerance
        if isinstance(group, OrbitGroup) and not group.exact:
            tolerance = settings.h3_tolerance
        value = main_theorem_rhs(group, g, float_tolerance=tolerance)
        row.main_thm_rhs = str(value.complex_rhs)
        row.main_thm_weyl_rhs = _str(value.weyl_rhs)
        row.rgs_count_search = str(value.rgs_count)
    row.match = all(a == b for a, b in row.comparisons())
    if not row.match:
        logger.warning("Mismatch in %s at %s: %s", group.name, row.representative, row.to_dict())
    else:
        logger.debug("Row %s %s matches", group.name, row.representative)
    return row


class VerifyTools:
    """Verification tools class"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings.load()

    def verify_main(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        all_classes: bool = False,
    ) -> Dict:
        """
        Verification matrix for the identity, or for every conjugacy class.

        Args:
            family: "m,p,n" for G(m,p,n).
            preset: Name of a shipped real root system.
            roots: JSON list of simple roots.
            all_classes: One row per conjugacy class instead of the identity only.

        Returns:
            {"rows": [...], "match": bool, "success": True}; rows ordered by lR,
            then representative.

        Example:
            >>> tools = VerifyTools()
            >>> tools.verify_main(family="3,3,3", all_classes=True)["match"]
            True
        """
        try:
            group = resolve_group(self.settings, family, preset, roots)
            if not group.well_generated:
                raise NotWellGeneratedError(group.name)
            lattice = lattice_for(self.settings, group)
            reps = element_rows(group) if all_classes else [group.identity]
            with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
                rows = list(pool.map(lambda g: verification_row(self.settings, group, lattice, g), reps))
            match = all(row.match for row in rows)
            logger.info(
                "Verified %s: %d rows, %d mismatches",
                group.name, len(rows), sum(not row.match for row in rows),
            )
            return {
                "group": group.name,
                "rows": [row.to_dict() for row in rows],
                "match": match,
                "success": True,
            }
        except HurwitzError as e:
            return {"success": False, "error": e.to_dict()}
        except Exception as e:
            logger.exception("verify main failed")
            return {"success": False, "error": {"code": "INTERNAL_ERROR", "message": str(e)}}

    def verify_cutjoin(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
    ) -> Dict:
        """
        Cut-and-join recursion against the Möbius oracle for every pqc class.

        Crystallographic orbit groups also check the recursion rewritten in
        terms of relative generating sets.
        """
        try:
            group = resolve_group(self.settings, family, preset, roots)
            if not group.is_real:
                raise InvalidParameterError(
                    f"{group.name} is not a real reflection group",
                    suggestion="Cut-and-join is checked on real groups: presets or G(m,p,n) with m <= 2.",
                )
            lattice = lattice_for(self.settings, group)
            crystallographic = isinstance(group, OrbitGroup) and group.exact
            rows = []
            for g in element_rows(group):
                if not classify_pqc(group, g).is_pqc:
                    continue
                cut = cutjoin_rhs(group, g, lattice)
                oracle = lattice.count_full(g, cut.ltr)
                recurrence = verify_rgs_recurrence(group, g, lattice) if crystallographic else None
                match = cut.total == oracle and cut.first_terms_pqc and recurrence is not False
                rows.append({
                    "representative": group.element_text(g),
                    "lR": group.lengths[g],
                    "ltr": cut.ltr,
                    "first_sum": str(cut.first_sum),
                    "second_sum": str(cut.second_sum),
                    "cutjoin_rhs": str(cut.total),
                    "ffull_bruteforce": str(oracle),
                    "first_terms_pqc": cut.first_terms_pqc,
                    "rgs_recurrence": recurrence,
                    "match": match,
                })
            match = all(row["match"] for row in rows)
            logger.info("Cut-and-join on %s: %d classes, match=%s", group.name, len(rows), match)
            return {"group": group.name, "rows": rows, "match": match, "success": True}
        except HurwitzError as e:
            return {"success": False, "error": e.to_dict()}
        except Exception as e:
            logger.exception("verify cutjoin failed")
            return {"success": False, "error": {"code": "INTERNAL_ERROR", "message": str(e)}}

    def verify_identities(self, max_m, check_mode: str = BOTH) -> Dict:
        """
        Roots-of-unity sums for 2 <= m <= max_m, the Chebyshev helper values
        for s <= 50 and the generating-function comparison.
        """
        try:
            top = validate_max_m(max_m)
            rows = []
            for m in range(2, top + 1):
                report = primitive_root_identities(m, check_mode, self.settings.float_tolerance)
                rows.append({
                    "m": m,
                    "inverse_sum": str(report.inverse_sum),
                    "expected_inverse_sum": str(report.expected_inverse_sum),
                    "real_part_sum": str(report.real_part_sum),
                    "expected_real_part_sum": str(report.expected_real_part_sum),
                    "match": report.ok,
                })
            chebyshev = [chebyshev_helpers(s) for s in range(1, CHEBYSHEV_MAX_S + 1)]
            failed_s = [c.s for c in chebyshev if not c.ok]
            series = generating_function_check()
            match = all(row["match"] for row in rows) and not failed_s and series["classical"]
            logger.info("Identity suite up to m = %d: match=%s", top, match)
            return {
                "rows": rows,
                "chebyshev": {"max_s": CHEBYSHEV_MAX_S, "failed": failed_s},
                "generating_function": series,
                "match": match,
                "success": True,
            }
        except HurwitzError as e:
            return {"success": False, "error": e.to_dict()}
        except Exception as e:
            logger.exception("verify identities failed")
            return {"success": False, "error": {"code": "INTERNAL_ERROR", "message": str(e)}}

    def poset(
        self,
        family: Optional[str] = None,
        preset: Optional[str] = None,
        roots: Optional[str] = None,
        dot_path: Optional[str] = None,
    ) -> Dict:
        """
        Prefix poset of minimum-length full factorizations of the identity.

        Args:
            dot_path: Where to write the DOT rendering, if given.
        """
        try:
            group = resolve_group(self.settings, family, preset, roots)
            result = prefix_poset(group, lattice_for(self.settings, group))
            data = result.to_dict()
            data["middle_rank"] = [
                {"element": group.element_text(x), "subgroup": mask} for x, mask in result.middle_rank()
            ]
            if dot_path:
                path = Path(dot_path)
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(result.to_dot(), encoding="utf-8")
                data["dot"] = str(path)
            return {**data, "match": result.prefix_lengths_hold, "success": True}
        except HurwitzError as e:
            return {"success": False, "error": e.to_dict()}
        except Exception as e:
            logger.exception("poset failed")
            return {"success": False, "error": {"code": "INTERNAL_ERROR", "message": str(e)}}
