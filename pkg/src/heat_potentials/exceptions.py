class HeatPotentialsError(Exception):
    """Base class for every error raised by the library."""


class UnsupportedOrder(HeatPotentialsError):
    pass


class AccuracyNotMet(HeatPotentialsError):
    pass


class NonPositiveTime(HeatPotentialsError):
    pass


class UnsortedInput(HeatPotentialsError):
    pass


class DegeneratePiece(HeatPotentialsError):
    pass


class TimeTooLarge(HeatPotentialsError):
    pass


class TargetOutOfDomain(HeatPotentialsError):
    pass


class TargetOutOfCell(HeatPotentialsError):
    pass


class RegionMismatch(HeatPotentialsError):
    pass


class InvalidSpec(HeatPotentialsError):
    """NaN inputs or violated pre-conditions of a quadrature spec."""


class SingularSystem(HeatPotentialsError):
    pass


class PanelPlanGap(HeatPotentialsError):
    pass


class OutOfRange(HeatPotentialsError):
    pass


class OnBoundary(HeatPotentialsError):
    pass


class DepthExceeded(HeatPotentialsError):
    pass


class SdcDivergence(HeatPotentialsError):
    pass


class ConfigInvalid(HeatPotentialsError):
    pass
