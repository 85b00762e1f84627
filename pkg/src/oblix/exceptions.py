"""Exception hierarchy for oblix."""


class OblixError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(OblixError, ValueError):
    pass


class ParseError(InvalidInput):
    """Malformed matrix or subspace file. Carries the offending location."""

    def __init__(self, message, *, path=None, line=None, field=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{': '.join(where)}: {message}" if where else message)
        self.path = path
        self.line = line
        self.field = field


class AmbientMismatch(OblixError, ValueError):
    pass


class InvalidWeight(OblixError, ValueError):
    pass


class InvalidParameter(OblixError, ValueError):
    pass


class NotFullRank(OblixError, ValueError):
    pass


class NotAFrame(OblixError, ValueError):
    pass


class PreconditionFailed(OblixError, ValueError):
    pass


class TooLarge(OblixError, ValueError):
    pass


class SingularGram(OblixError, ArithmeticError):
    pass


class DegenerateAngle(OblixError, ArithmeticError):
    pass


class NumericalUnderflow(OblixError, ArithmeticError):
    pass


class Incompatible(OblixError):
    pass


class IdentityViolation(OblixError, AssertionError):
    """A mathematical identity failed beyond its tolerance.

    ``identity`` names the identity and ``witness`` holds whatever is needed
    to reproduce the failing instance.
    """

    def __init__(self, identity, message, witness=None):
        super().__init__(f"{identity}: {message}")
        self.identity = identity
        self.witness = witness if witness is not None else {}
