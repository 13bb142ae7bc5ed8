from enum import Enum

CONFIG_STDIN = "-"


class TaskKind(str, Enum):
    REPORT = "report"
    SCAN = "scan"
    EVOLVE = "evolve"
    NULLSPACE = "nullspace"
    SPECTRUM = "spectrum"
    REPRODUCE = "reproduce-paper"


class InitialStateKind(str, Enum):
    FOCK = "fock"
    SUPERPOSITION = "superposition"
    MAXIMALLY_MIXED = "maximally_mixed"
    RANDOM = "random"


class ReproduceGroup(str, Enum):
    """Groups of acceptance checks run by reproduce-paper."""

    SPECTRUM = "spectrum"
    NLO = "nlo"
    COSINE = "cosine"
    LINDBLAD = "lindblad"
    FOLD = "fold"
    SCAN = "scan"
    SIGN = "sign"
    CONSERVATION = "conservation"
    KERNEL = "kernel"
    CALCULUS = "calculus"

    @classmethod
    def all_types(cls):
        return [group.value for group in cls]
