"""Exception types shared across the package."""


class PolarizationError(Exception):
    """Base class; ``code`` is the machine-readable reason used by the CLI."""

    code = "ERROR"


class SingularGauge(PolarizationError, ValueError):
    """The gauge vector is (anti)parallel to a wavevector, so I x k vanishes."""

    code = "SINGULAR_GAUGE"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TransversalityViolation(PolarizationError, ValueError):
    code = "TRANSVERSALITY"


class AllZeroField(PolarizationError, ValueError):
    code = "ALL_ZERO_FIELD"


class FieldFormatError(PolarizationError, ValueError):
    code = "FORMAT"
