"""
Parameter Validation Tools

Parses and validates command-line inputs: group families, presets, element
JSON, partitions and genera.
"""

import json
from typing import Any, List, Optional

from .errors import ElementParseError, InvalidParameterError


def parse_int_list(text: str, what: str) -> List[int]:
    """Parse "a,b,c" into positive integers."""
    if not isinstance(text, str) or not text.strip():
        raise InvalidParameterError(f"{what} must be a comma-separated list of integers")
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError as e:
        raise InvalidParameterError(
            f"{what} must be a comma-separated list of integers, got {text!r}",
            suggestion="Example: 3,1,2",
        ) from e
    if any(v < 1 for v in values):
        raise InvalidParameterError(f"{what} entries must be positive, got {values}")
    return values


def parse_family(text: str):
    """
    Parse "m,p,n" into a GroupSpec.

    Raises:
        InvalidParameterError: Malformed text, p not dividing m, or the trivial G(m,m,1).
    """
    from ..services.wreath_core import GroupSpec

    values = parse_int_list(text, "--family")
    if len(values) != 3:
        raise InvalidParameterError(f"--family needs exactly three integers m,p,n, got {text!r}")
    m, p, n = values
    if n == 1 and p == m and m > 1:
        raise InvalidParameterError(
            f"G({m},{m},1) is the trivial group",
            suggestion="Use n >= 2 for G(m,m,n).",
        )
    return GroupSpec(m, p, n)


def validate_group_source(family: Optional[str], preset: Optional[str], roots: Optional[str] = None) -> str:
    """
    Exactly one of --family, --preset, --roots.

    Returns:
        "family", "preset" or "roots".
    """
    given = [name for name, value in (("family", family), ("preset", preset), ("roots", roots)) if value]
    if len(given) != 1:
        raise InvalidParameterError(
            "Give exactly one of --family, --preset or --roots",
            suggestion="Mixed addressing is rejected; presets and G(m,p,n) use different element forms.",
        )
    return given[0]


def parse_root_vectors(text: str) -> List[List[Any]]:
    """Parse a JSON list of simple-root coordinate vectors."""
    try:
        vectors = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParameterError(f"--roots is not valid JSON: {e.msg}") from e
    if not isinstance(vectors, list) or not all(isinstance(v, list) for v in vectors):
        raise InvalidParameterError("--roots must be a JSON list of lists")
    return vectors


def parse_element_json(text: Optional[str]) -> Optional[dict]:
    """
    Parse element JSON.

    None, "", "id" and "identity" all mean the identity and return None.
    """
    if text is None or text.strip().lower() in ("", "id", "identity"):
        return None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ElementParseError(text, f"invalid JSON ({e.msg})") from e
    if not isinstance(data, dict):
        raise ElementParseError(text, "expected a JSON object")
    return data


def resolve_element(group, text: Optional[str]) -> int:
    """
    Element id in group from its JSON form.

    G(m,p,n) takes {"perm": [...], "colors": [...]}; orbit groups take
    {"word": [...]} in the simple reflections, 1-indexed.
    """
    from ..services.real_orbit_group import OrbitGroup
    from ..services.wreath_core import WreathGroup, make_element

    data = parse_element_json(text)
    if data is None:
        return group.identity
    if isinstance(group, WreathGroup):
        if "word" in data:
            raise ElementParseError(text, "G(m,p,n) elements use perm/colors, not word")
        if "perm" not in data:
            raise ElementParseError(text, "missing 'perm'")
        element = make_element(data["perm"], data.get("colors"), group.spec)
        return group.id_of_element(element)
    if isinstance(group, OrbitGroup):
        if "perm" in data:
            raise ElementParseError(text, "preset elements use word, not perm/colors")
        word = data.get("word")
        if not isinstance(word, list):
            raise ElementParseError(text, "missing 'word' list")
        return group.element_from_word(word)
    raise ElementParseError(text, f"unsupported group {group.name}")


def parse_lambda(text: str) -> List[int]:
    return parse_int_list(text, "--lambda")


def validate_genus(genus: Any) -> int:
    try:
        value = int(genus)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"genus must be 0 or 1, got {genus!r}") from e
    if value not in (0, 1):
        raise InvalidParameterError(f"genus must be 0 or 1, got {value}", suggestion="Higher genera are not supported.")
    return value


def validate_max_m(max_m: Any, limit: int = 2000) -> int:
    try:
        value = int(max_m)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"--max-m must be an integer, got {max_m!r}") from e
    if not 2 <= value <= limit:
        raise InvalidParameterError(f"--max-m must lie in 2..{limit}, got {value}")
    return value


def validate_length(length: Any, maximum: int) -> int:
    try:
        value = int(length)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"length must be an integer, got {length!r}") from e
    if not 0 <= value <= maximum:
        raise InvalidParameterError(
            f"length must lie in 0..{maximum}, got {value}",
            suggestion="Raise budget.max_full_length in config/config.yaml for longer walks.",
        )
    return value
