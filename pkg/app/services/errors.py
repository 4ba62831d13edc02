from typing import Optional


class PrecuError(Exception):
    """Base error of the toolkit. `code` is the stable name used in reports and HTTP bodies."""

    code = "PrecuError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


class MixedFamily(PrecuError):
    code = "MixedFamily"


class UnknownFamily(PrecuError):
    code = "UnknownFamily"


class NoRule(PrecuError):
    code = "NoRule"


class NoApproximant(PrecuError):
    code = "NoApproximant"


class NotMonotone(PrecuError):
    code = "NotMonotone"


class NotIncreasing(PrecuError):
    code = "NotIncreasing"


class UnboundedChain(PrecuError):
    code = "UnboundedChain"


class NotAMap(PrecuError):
    code = "NotAMap"


class NotEmbedding(PrecuError):
    code = "NotEmbedding"


class SupFailed(PrecuError):
    code = "SupFailed"


class CarrierTooLarge(PrecuError):
    code = "CarrierTooLarge"


class SearchSpaceTooLarge(PrecuError):
    code = "SearchSpaceTooLarge"


class ModelMismatch(PrecuError):
    code = "ModelMismatch"


class GridExhausted(PrecuError):
    code = "GridExhausted"


class NotAllCompact(PrecuError):
    code = "NotAllCompact"


class SystemMismatch(PrecuError):
    code = "SystemMismatch"


class UncertifiedMaps(PrecuError):
    code = "UncertifiedMaps"


class FragmentTooLarge(PrecuError):
    code = "FragmentTooLarge"


class UnknownCommand(PrecuError):
    code = "UnknownCommand"


class BudgetExhausted(PrecuError):
    """A lazy generator could not produce the requested term within its budget."""

    code = "BudgetExhausted"


class Undecided(PrecuError):
    """A boolean interface was asked for a verdict that is Unknown at the current budget."""

    code = "Undecided"


class ParseError(PrecuError):
    code = "ParseError"

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.detail = message

    def to_dict(self) -> dict:
        return {"code": self.code, "line": self.line, "col": self.col, "message": self.detail}


class ValidationError(PrecuError):
    code = "ValidationError"

    def __init__(self, obj: str, reason: str, line: Optional[int] = None):
        super().__init__(f"{obj}: {reason}")
        self.obj = obj
        self.reason = reason
        self.line = line

    def to_dict(self) -> dict:
        return {"code": self.code, "object": self.obj, "reason": self.reason, "line": self.line}
