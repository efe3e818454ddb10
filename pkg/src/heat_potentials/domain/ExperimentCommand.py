try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)


class ExperimentCommand(StrEnum):
    FGT_BENCH = "fgt-bench"
    VOLTERRA_CONV = "volterra-conv"
    PERIODIC_HEAT = "periodic-heat"
    DIRICHLET_HEAT = "dirichlet-heat"
    STEFAN = "stefan"
