"""Exception hierarchy shared by every module in the package."""


class RisDasError(Exception):
    """Base class for all errors raised by ris_das."""


class DimensionError(RisDasError, ValueError):
    """Vector lengths disagree or a vector is empty."""


class DomainError(RisDasError, ValueError):
    """A value lies outside its admissible set (e.g. a phase index >= L)."""


class MisuseError(RisDasError):
    """An operation was applied to an object of the wrong provenance."""


class DegeneracyError(RisDasError, ValueError):
    """A matrix expected to be rank one is not."""

    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio


class GeometryError(RisDasError, ValueError):
    """Positions or grid shapes are inconsistent."""


class BudgetExceededError(RisDasError):
    """The exhaustive oracle refuses instances beyond its enumeration cap."""


class UnsupportedSchemeError(RisDasError, ValueError):
    """The quantization scheme is not supported by the requested operation."""


class PlanError(RisDasError, ValueError):
    """An experiment plan failed validation."""
