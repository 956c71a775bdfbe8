"""Exception hierarchy.

Every error raised by the library derives from :class:`QCError`.  Parameter
problems also subclass :class:`ValueError` and numerical breakdowns subclass
:class:`ArithmeticError`, so callers that only know the builtin types still
catch them.  The CLI maps the two families onto different exit codes.
"""


class QCError(Exception):
    """Base class for library errors."""


class InvalidParameterError(QCError, ValueError):
    pass


class InvalidInputError(InvalidParameterError):
    pass


class DomainError(InvalidParameterError):
    pass


class NotBilipschitzError(InvalidParameterError):
    pass


class InsufficientRegularityError(InvalidParameterError):
    pass


class InvalidCenterError(InvalidParameterError):
    pass


class TopologyError(InvalidParameterError):
    pass


class ParseError(InvalidParameterError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(QCError, ArithmeticError):
    pass


class DivergenceError(NumericalError):
    pass


class RangeError(NumericalError):
    pass


class BranchPointError(NumericalError):
    pass


class OnCurveError(NumericalError):
    pass


class DegenerateDerivativeError(NumericalError):
    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class InfiniteDistortionError(NumericalError):
    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NoCenterError(NumericalError):
    pass


class DegenerateRingError(NumericalError):
    pass


class ResolutionError(NumericalError):
    pass


class SolverError(NumericalError):
    pass


class GluingError(NumericalError):
    def __init__(self, message, max_jump=None):
        super().__init__(message)
        self.max_jump = max_jump
