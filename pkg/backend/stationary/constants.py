# RK4 steps are rejected once |Tr ρ - 1| exceeds this
MAX_TRACE_DRIFT = 1e-6

# exact propagator is only formed for dim² up to this size
EXACT_PROPAGATOR_MAX_SIZE = 1024

# dense decompositions are supported up to dim = 64
MAX_SUPEROPERATOR_SIZE = 4096

DEFAULT_ZERO_TOL = 1e-9
