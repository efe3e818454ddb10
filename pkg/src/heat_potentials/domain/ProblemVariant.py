try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)


class ProblemVariant(StrEnum):
    PERIODIC_FORCED = "periodic-forced"
    DIRICHLET_MOVING = "dirichlet-moving"
    STEFAN = "stefan"
