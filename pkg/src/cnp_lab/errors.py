"""Exception hierarchy shared by every cnp_lab module."""


class CnpLabError(Exception):
    """Base class for all cnp_lab errors."""


class NumericalHardError(CnpLabError):
    """A numerical precondition failed in a way that invalidates the run."""


class NonHermitianInput(NumericalHardError, ValueError):
    pass


class VanishingKernelValue(NumericalHardError, ValueError):
    pass


class ZeroConstantTerm(CnpLabError, ZeroDivisionError):
    pass


class NotNormalized(CnpLabError, ValueError):
    pass


class DomainViolation(CnpLabError, ValueError):
    pass


class DivisionNearZero(CnpLabError, ZeroDivisionError):
    pass


class BadParameter(CnpLabError, ValueError):
    pass


class DimensionMismatch(CnpLabError, ValueError):
    pass


class VanishingAtBasePoint(CnpLabError, ValueError):
    pass


class ConstraintViolation(CnpLabError, ValueError):
    pass


class NotRadial(CnpLabError, ValueError):
    """The kernel has no one-variable diagonal symbol k(z w̄)."""


class UnknownScenario(CnpLabError, KeyError):
    pass


class SchemaError(CnpLabError, ValueError):
    """Malformed kernel, expression or scenario description."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
