"""Exception hierarchy shared across the package."""


class FDualityError(Exception):
    """Base class for every error raised by this package."""


class InputError(FDualityError, ValueError):
    """Malformed or out-of-domain input (CLI exit code 2)."""


class CapExceeded(FDualityError):
    """A configured search bound was hit (CLI exit code 3)."""


class InvariantViolation(FDualityError):
    """A claimed structural identity failed at runtime (CLI exit code 4)."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or {}


class RankDeficient(InputError):
    pass


class ZeroVector(InputError):
    pass


class Singular(InputError):
    pass


class Unbounded(InputError):
    pass


class Empty(InputError):
    pass


class EmptyLattice(InputError):
    pass


class OriginNotInterior(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class PositivizationFailed(FDualityError):
    """No non-negative basis of an integer kernel was found within the search bound."""


class ConventionViolated(InputError):
    pass


class NotRank1(InputError):
    pass


class NoIntegerFactorization(InvariantViolation):
    pass


class ValidationFailed(InvariantViolation):
    pass


class NegativeExponent(InvariantViolation):
    pass


class PartitionInvalid(InvariantViolation):
    pass


class AssumptionFailed(InvariantViolation):
    pass


class DegreeOutOfRange(InputError):
    pass


class SearchSpaceTooLarge(CapExceeded):
    pass


class DegreeTooSmall(DegreeOutOfRange):
    """Canonical mirror needs ``d >= n + 1``; smaller degrees go through the LG construction."""


class AllZeroFraming(InputError):
    """A weak framing must have at least one positive entry."""
