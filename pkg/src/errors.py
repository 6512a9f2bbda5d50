"""
Exception hierarchy for channel analysis.

User errors (bad input, violated hypotheses) and internal failures
(numerical breakdowns, disagreeing algorithms) are kept apart so that
the command line can map them to distinct exit codes.
"""

from typing import Any, Dict, Optional


# Error messages shared across modules
ERROR_NOT_SQUARE = "matrix must be square, got shape {shape}"
ERROR_DIM_MISMATCH = "dimension mismatch: expected {expected}, got {got}"
ERROR_NOT_FINITE = "matrix contains NaN or Inf entries"
ERROR_NOT_UNITAL_TP = ("channel must be unital and trace preserving "
                       "(tp residual {tp:.3e}, unital residual {unital:.3e}); "
                       "use the ucp analyses for general unital CP maps")
ERROR_NOT_UNITAL = "map must be unital (unital residual {unital:.3e})"
ERROR_DIM_CAP = "dimension {dim} exceeds the configured cap {cap}"


class ChannelError(Exception):
    """
    Base class of every error raised by the analyzer.
    """


class ShapeError(ChannelError, ValueError):
    """
    Wrong matrix shape or mismatched dimensions.
    """


class PreconditionError(ChannelError, ValueError):
    """
    Input violates a hypothesis of the requested analysis.

    :param message: Human readable description
    :param residual_name: Name of the violated residual (e.g. 'tp')
    :param residual: Value of that residual
    """

    def __init__(self, message: str, residual_name: Optional[str] = None,
                 residual: Optional[float] = None) -> None:
        super().__init__(message)
        self.residual_name = residual_name
        self.residual = residual


class NotCompletelyPositiveError(PreconditionError):
    """
    Choi matrix has a negative eigenvalue beyond tolerance.
    """


class NumericError(ChannelError, RuntimeError):
    """
    An iteration did not converge or a randomized step kept degenerating.

    :param message: Human readable description
    :param diagnostics: Extra numbers describing the failure
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = diagnostics or {}


class ConsistencyError(ChannelError, RuntimeError):
    """
    Two independent computations of the same object disagree.

    :param message: Human readable description
    :param diagnostics: Dimensions / residuals of both sides
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = diagnostics or {}


class NotAnAlgebraError(ConsistencyError):
    """
    Subspace expected to be a *-algebra is not closed.
    """


class ResourceError(ChannelError):
    """
    Dimension cap exceeded.
    """


class ChannelParseError(ChannelError, ValueError):
    """
    Malformed channel input (JSON wire format or builtin name).

    :param message: Human readable description
    :param field: Path of the offending field, e.g. 'kraus[2]'
    :param line: Line number in the input file, when known
    """

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None) -> None:
        location = []
        if field is not None:
            location.append(f"field {field}")
        if line is not None:
            location.append(f"line {line}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.field = field
        self.line = line
