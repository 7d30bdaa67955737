"""Exception hierarchy shared by every layer of the toolkit.

Each error carries the process exit code the command-line frontend uses,
so library callers and shell pipelines see the same failure classes.
"""

from __future__ import annotations


class FuchsError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class CoefficientDomainError(FuchsError, TypeError):
    """Operands live over different coefficient fields."""


class EmptyInputError(FuchsError, ValueError):
    pass


class ParseError(FuchsError, ValueError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path


class NeedMoreTermsError(FuchsError):
    """A computation needs a longer series (or more samples) than supplied."""

    exit_code = 3

    def __init__(self, message: str, needed: int | None = None, available: int | None = None,
                 model=None):
        super().__init__(message)
        self.needed = needed
        self.available = available
        self.model = model

    @property
    def shortfall(self) -> int | None:
        if self.needed is None or self.available is None:
            return None
        return max(0, self.needed - self.available)


class BadPrimeError(FuchsError, ArithmeticError):
    """The chosen prime divides a quantity that must be invertible."""

    exit_code = 4


class ReconstructionError(FuchsError):
    """CRT / rational reconstruction could not certify an exact value."""

    exit_code = 5

    def __init__(self, message: str, coefficient=None, modulus: int | None = None,
                 bits_short: int | None = None):
        super().__init__(message)
        self.coefficient = coefficient
        self.modulus = modulus
        self.bits_short = bits_short


class NotAnExponentError(FuchsError, ValueError):
    pass


class DegenerateExponentError(FuchsError, ValueError):
    pass


class IrregularSingularityError(FuchsError, ValueError):
    pass


class AmbiguousLiftError(FuchsError, ValueError):
    pass


class ParityError(FuchsError, ValueError):
    pass


class AlignmentError(FuchsError, ValueError):
    pass


class TruncationError(FuchsError, ValueError):
    pass


class NoOdeFoundError(FuchsError):
    pass


class ModelError(FuchsError, ValueError):
    """Samples do not determine, or contradict, the linear ODE-size model."""


class IntegralityError(FuchsError, ValueError):
    pass
