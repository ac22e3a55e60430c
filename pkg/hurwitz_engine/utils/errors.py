"""
Custom Error Classes

Defines the coded exception types raised by the computational services and
surfaced by the tool facades and the CLI.
"""

from typing import Optional


class HurwitzError(Exception):
    """Base class for all library errors"""

    def __init__(self, message: str, code: str = "HURWITZ_ERROR", suggestion: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.suggestion = suggestion

    def to_dict(self) -> dict:
        """Convert to dictionary format"""
        error_dict = {
            "code": self.code,
            "message": self.message
        }
        if self.suggestion:
            error_dict["suggestion"] = self.suggestion
        return error_dict


class InvalidParameterError(HurwitzError):
    """Invalid parameter error"""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="INVALID_PARAMETER",
            suggestion=suggestion or "Please check if the parameter format is correct."
        )


class ElementParseError(HurwitzError):
    """Element text could not be turned into a group element"""

    def __init__(self, text: str, reason: str):
        super().__init__(
            message=f"Failed to parse element {text!r}: {reason}",
            code="ELEMENT_PARSE_ERROR",
            suggestion='Use {"perm": [...], "colors": [...]} for G(m,p,n) or {"word": [...]} for presets.'
        )


class DimensionMismatchError(HurwitzError):
    """Operands live in groups of different rank"""

    def __init__(self, left: int, right: int):
        super().__init__(
            message=f"Dimension mismatch: {left} != {right}",
            code="DIMENSION_MISMATCH",
            suggestion="Both elements must act on the same number of coordinates."
        )


class UnknownPresetError(HurwitzError):
    """Preset not supported error"""

    def __init__(self, preset: str, supported: Optional[str] = None):
        super().__init__(
            message=f"Preset '{preset}' is not supported",
            code="UNKNOWN_PRESET",
            suggestion=f"Supported presets: {supported or 'A1-A4, B2-B4, D4, H3, I2(m)'}"
        )


class BudgetExceededError(HurwitzError):
    """A configured ceiling was hit"""

    def __init__(self, what: str, limit: int):
        super().__init__(
            message=f"{what} exceeds the configured budget of {limit}",
            code="BUDGET_EXCEEDED",
            suggestion="Raise the matching budget in config/config.yaml or pick a smaller group."
        )


class NotWellGeneratedError(HurwitzError):
    """Theorem-level operation requested on a group that is not well generated"""

    def __init__(self, group: str):
        super().__init__(
            message=f"{group} is not well generated",
            code="NOT_WELL_GENERATED",
            suggestion="G(m,p,n) is well generated only for p = 1 or p = m."
        )


class NotPqcError(HurwitzError):
    """Element is not parabolic quasi-Coxeter"""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="NOT_PQC",
            suggestion=suggestion or "Only parabolic quasi-Coxeter elements have a closed form."
        )


class NonCrystallographicError(HurwitzError):
    """Connection index requested for non-rational root data"""

    def __init__(self, group: str):
        super().__init__(
            message=f"{group} has no rational root data; connection index is undefined",
            code="NON_CRYSTALLOGRAPHIC",
            suggestion="Use the complex (Grammian) path instead of the Weyl path."
        )


class ConfigurationError(HurwitzError):
    """Configuration error"""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            code="CONFIGURATION_ERROR",
            suggestion=suggestion or "Please check if the configuration file is correct."
        )
