"""Exception hierarchy shared by all modules."""


class AlleeRickerError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AlleeRickerError, ValueError):
    """A parameter or state lies outside the model's admissible domain."""


class NumericalError(AlleeRickerError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer."""


class InvalidBracket(NumericalError):
    """The function values at the bracket ends do not change sign."""


class BracketError(NumericalError):
    """An expanding bracket search gave up before finding a sign change."""


class SolveError(NumericalError):
    """A scan-based solver found an inconsistent number of roots."""


class DegenerateDerivative(NumericalError):
    """A derivative used as a divisor vanishes (e.g. at a critical point)."""


class NotFound(NumericalError):
    """No crossing exists in the searched parameter interval."""


class NonUnique(NumericalError):
    """A quantity assumed unique turned out to have several candidates."""
