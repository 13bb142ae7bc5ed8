from enum import Enum

# |λ| below this is a double root
TANGENCY_TOL = 1e-12

# |E_root - E_n| < MATCH_TOL·ħω flags level n
DEFAULT_MATCH_TOL = 1e-9

POTENTIALITY_TOL = 1e-12

DEFAULT_SEARCH_BOX = (-5.0, 5.0)
GRID_STARTS_PER_AXIS = 21
GRADIENT_TOL = 1e-9
DEDUP_TOL = 1e-8


class LambdaConvention(str, Enum):
    """Sign of the unfolding parameter of the fold normal form.

    CORRECTED makes x² - λ = 0 equivalent to N(E, E) = 0; PRINTED is its
    negative, (4α₀α₂ - α₁²)/(4α₂²).
    """

    CORRECTED = "corrected"
    PRINTED = "printed"


class BranchKind(str, Enum):
    NONE = "none"
    TANGENCY = "tangency"
    PAIR = "pair"


class CatastropheFamily(str, Enum):
    A_PLUS = "A_plus_n"
    A_MINUS = "A_minus_n"
    D_PLUS = "D_plus_n"
    D_MINUS = "D_minus_n"
    E6_PLUS = "E6_plus"
    E6_MINUS = "E6_minus"
    E7 = "E7"
    E8 = "E8"
