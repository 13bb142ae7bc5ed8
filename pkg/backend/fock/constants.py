MIN_DIM = 4

DENSITY_HERMITICITY_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-12
DENSITY_MIN_EIGENVALUE = -1e-10

# Gauss-Hermite nodes used for wavefunction overlaps
DEFAULT_QUADRATURE_ORDER = 64
