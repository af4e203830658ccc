"""Exception hierarchy shared by every module.

Each class carries the exit code the command-line front end reports for it.
"""


class AlgebraError(Exception):
    """Base class for all failures raised by the library"""

    exit_code = 1


# Validation failures (exit code 2)

class ValidationError(AlgebraError):
    exit_code = 2


class NotPrimeError(ValidationError):
    pass


class RingMismatchError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class NotArtinianError(ValidationError):
    pass


class ZeroDivisorArgumentError(ValidationError):
    """Raised when a colon or saturation is asked for by an element that is zero in R"""


class TowerValidationError(ValidationError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ContainmentError(ValidationError):
    """A required containment between ideals does not hold"""

    def __init__(self, containment, detail=""):
        message = f"containment {containment} fails"
        if detail:
            message += f": {detail}"
        super().__init__(message)
        self.containment = containment


class CapTooSmallError(ValidationError):
    pass


class ExtrapolationError(ValidationError):
    pass


class IdentityMismatchError(ValidationError):
    pass


# Resource limits (exit code 3)

class ResourceLimitError(AlgebraError):
    exit_code = 3


class ExponentOverflowError(ResourceLimitError):
    pass


# Parsing (exit code 4)

class ParseError(AlgebraError):
    exit_code = 4

    def __init__(self, message, position=None, line=None, column=None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        elif position is not None:
            location.append(f"position {position}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.position = position
        self.line = line
        self.column = column


class PolynomialSyntaxError(ParseError):
    pass


class UnknownVariableError(ParseError):
    def __init__(self, name, position=None):
        super().__init__(f"unknown variable {name!r}", position=position)
        self.name = name


class RingFileError(ParseError):
    pass


# Arithmetic

class FieldDivisionError(AlgebraError, ZeroDivisionError):
    pass


class ColonCertificateError(AlgebraError):
    """A computed colon generator failed its membership certificate"""
