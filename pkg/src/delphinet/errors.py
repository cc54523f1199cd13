"""Error hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP layer can
surface failures without string matching on messages.
"""

from __future__ import annotations


class DelphinetError(Exception):
    """Base class for all domain errors."""

    code = "ERROR"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context


# --- network construction ---------------------------------------------------

class DuplicateNameError(DelphinetError):
    code = "DUPLICATE_NAME"


class InvalidStatesError(DelphinetError):
    code = "INVALID_STATES"


class UnknownVariableError(DelphinetError):
    code = "UNKNOWN_VARIABLE"


class UnknownStateError(DelphinetError):
    code = "UNKNOWN_STATE"


class SelfLoopError(DelphinetError):
    code = "SELF_LOOP"


class DuplicateArrowError(DelphinetError):
    code = "DUPLICATE_ARROW"


class CycleError(DelphinetError):
    """Raised when an arrow would close a directed cycle.

    ``cycle`` lists the variable ids along the offending path, starting and
    ending with the same id.
    """

    code = "CYCLE"

    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message, cycle=cycle)
        self.cycle = cycle


class RowOverflowError(DelphinetError):
    code = "ROW_OVERFLOW"


class RowSumError(DelphinetError):
    code = "ROW_SUM"


class OutOfRangeError(DelphinetError):
    code = "OUT_OF_RANGE"


class IncompleteCptError(DelphinetError):
    code = "INCOMPLETE_CPT"


class NetworkFormatError(DelphinetError):
    code = "NETWORK_FORMAT"


# --- inference ----------------------------------------------------------------

class ImpossibleEvidenceError(DelphinetError):
    code = "IMPOSSIBLE_EVIDENCE"


class NetworkTooLargeError(DelphinetError):
    code = "NETWORK_TOO_LARGE"


class ResourceLimitError(DelphinetError):
    code = "RESOURCE_LIMIT"


# --- verbal probability -------------------------------------------------------

class ParseError(DelphinetError):
    code = "PARSE"

    def __init__(self, message: str, position: int = 0):
        super().__init__(message, position=position)
        self.position = position


class UnknownDescriptorError(DelphinetError):
    code = "UNKNOWN_DESCRIPTOR"


# --- scenarios ------------------------------------------------------------------

class NameCollisionError(DelphinetError):
    code = "NAME_COLLISION"


class VersionMismatchError(DelphinetError):
    code = "VERSION_CONFLICT"


class StaleExplanationError(DelphinetError):
    code = "STALE_EXPLANATION"


# --- workflow / collaboration ---------------------------------------------------

class RoleError(DelphinetError):
    code = "ROLE"


class GateClosedError(DelphinetError):
    """A Delphi gate denied the action; ``reason`` says which gate."""

    code = "DELPHI_GATE"

    def __init__(self, message: str, reason: str = "not_shared"):
        super().__init__(message, reason=reason)
        self.reason = reason


class EmptyContentError(DelphinetError):
    code = "EMPTY_CONTENT"


class IncompatibleSelectionError(DelphinetError):
    code = "INCOMPATIBLE_SELECTION"


class FacilitatorSingularityError(DelphinetError):
    code = "FACILITATOR_SINGULARITY"


class FrozenProblemError(DelphinetError):
    code = "DEADLINE"


class UnknownEntityError(DelphinetError):
    code = "UNKNOWN_ENTITY"


# --- reporting -------------------------------------------------------------------

class NoRatedReportsError(DelphinetError):
    code = "NO_RATED_REPORTS"


class AlreadySubmittedError(DelphinetError):
    code = "ALREADY_SUBMITTED"


# --- persistence -------------------------------------------------------------------

class CorruptLogError(DelphinetError):
    code = "CORRUPT_LOG"
