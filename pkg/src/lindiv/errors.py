"""Exception types shared across the package."""


class LindivError(Exception):
    """Base class for all library errors."""


class InvalidArgument(LindivError, ValueError):
    pass


class UnsupportedField(LindivError):
    pass


class UnsupportedSplittingField(LindivError):
    """Characteristic polynomial does not split over a supported field.

    ``fallback`` holds (g, ell) when the offending factor is g(x**ell).
    """

    def __init__(self, msg, fallback=None):
        super().__init__(msg)
        self.fallback = fallback


class NoRecurrenceDetected(LindivError):
    pass


class DependenceUndecided(LindivError):
    pass


class InvariantViolation(LindivError, ValueError):
    pass


class DegenerateParameters(LindivError, ValueError):
    pass


class NonIntegralResult(LindivError):
    pass


class NotAnLDS(LindivError):
    pass


class VerificationFailed(LindivError):
    def __init__(self, msg, n=None):
        super().__init__(msg)
        self.n = n


class PreconditionViolation(LindivError, ValueError):
    pass


class MalformedBinomial(LindivError, ValueError):
    pass


class RepeatedPoint(LindivError, ValueError):
    pass


class PDividesGamma(LindivError, ValueError):
    pass


class SchemaError(LindivError, ValueError):
    def __init__(self, msg, pointer=""):
        super().__init__(f"{pointer or '/'}: {msg}")
        self.pointer = pointer
