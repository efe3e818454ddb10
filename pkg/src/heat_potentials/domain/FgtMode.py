try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)


class FgtMode(StrEnum):
    PERIODIC = "periodic"
    NONPERIODIC = "nonperiodic"
