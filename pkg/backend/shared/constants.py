from enum import Enum, IntEnum

# Fock levels kept above any analyzed level; q⁴ couples n to n±4
TRUNCATION_MARGIN = 5


class ExitCode(IntEnum):
    SUCCESS = 0
    ACCEPTANCE_FAILURE = 1
    CONFIG_ERROR = 2
    NUMERICAL_FAILURE = 3


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
