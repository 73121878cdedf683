"""Exception hierarchy shared by every module of the package."""


class PrimcohError(Exception):
    """Base class for all errors raised by primcoh."""


class ShapeError(PrimcohError, ValueError):
    pass


class SingularMatrixError(PrimcohError, ArithmeticError):
    pass


class DegreeError(PrimcohError, ValueError):
    pass


class RankError(PrimcohError, ValueError):
    pass


class ModelFormatError(PrimcohError, ValueError):
    """Structurally malformed model; ``offending`` lists the bad terms."""

    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = list(offending)


class ModelParseError(PrimcohError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(PrimcohError, ValueError):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class ComplexError(PrimcohError):
    """Raised when the assembled operator does not square to zero."""


class CocycleError(PrimcohError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PreconditionError(PrimcohError):
    pass


class VanishingFailure(PrimcohError):
    """An invertible endomorphism came with nonzero cohomology."""
