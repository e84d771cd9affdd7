"""Exception taxonomy shared by all modules."""


class CodesError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(CodesError):
    """The requested characteristic is not a prime number."""


class Reducible(CodesError):
    """The supplied modulus factors over GF(p)."""


class TooLarge(CodesError):
    """A table or enumeration would exceed the configured resource cap."""


class FieldMismatch(CodesError):
    """Operands belong to different fields."""


class DivisionByZero(CodesError, ZeroDivisionError):
    """Division by the zero element."""


class BothZero(CodesError):
    """gcd(0, 0) is undefined."""


class ShapeError(CodesError):
    """Matrix dimensions do not fit the requested operation."""


class RankDeficient(CodesError):
    """A matrix that must have full row rank does not."""


class NotBasic(CodesError):
    """The maximal minors of the generator matrix share a non-constant factor."""


class OutsideParameterSpace(CodesError):
    """The evaluation points and coefficient vector violate the family's
    non-degeneracy conditions."""


class PreconditionViolated(CodesError):
    """An operation-specific precondition does not hold."""


class DegeneratePoint(CodesError):
    """The new evaluation point collides with an existing one or sits at
    infinity (zero leading coordinate)."""


class F2Zero(CodesError):
    """The recursion for the h-sequence needs a nonzero leading coefficient."""


class BaseNotMds(CodesError):
    """Length extension requires the base code to be MDS."""


class HypothesisFailed(CodesError):
    """A named hypothesis of the extension certificate does not hold."""

    def __init__(self, condition: str, message: str = ""):
        self.condition = condition
        super().__init__(message or condition)


class ParseError(CodesError):
    """Malformed textual input; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
