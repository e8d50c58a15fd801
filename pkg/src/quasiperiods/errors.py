"""Exception types shared across the package."""


class ToleranceUnreachable(ArithmeticError):
    """The requested truncation tolerance needs more q-powers than allowed."""


class InvalidWeight(ValueError):
    pass


class InvalidRoot(ValueError):
    pass


class DegenerateLattice(ValueError):
    pass


class PoleError(ZeroDivisionError):
    """Evaluation point sits on (or numerically at) a pole."""


class IterationLimit(RuntimeError):
    pass


class InvalidBracket(ValueError):
    pass


class NotFound(RuntimeError):
    """A root search finished without any verified solution."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class OutOfRegime(ValueError):
    """Input lies outside the region where the direct series are used."""


class SingularPoint(ValueError):
    pass


class CoincidentPoints(ValueError):
    pass


class NotALune(ValueError):
    pass


class WrongAngles(ValueError):
    pass


class AmbiguousWinding(ArithmeticError):
    pass


class CapTooLow(ValueError):
    """Truncation cap does not separate the target value from infinity."""
