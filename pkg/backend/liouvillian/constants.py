from enum import Enum

# γ must equal βm²ω² to this tolerance for the spectral nlo form
NLO_GAMMA_TOL = 1e-12

DEFAULT_DELTA_DIVISOR = 4

DEFAULT_VERIFY_SAMPLES = 50


class ModelKind(str, Enum):
    """Generators that can be assembled from a config."""

    HARMONIC = "harmonic"
    NLO = "nlo"
    COSINE = "cosine"
    LINDBLAD = "lindblad_hpoly"
    FOLD = "fold"
