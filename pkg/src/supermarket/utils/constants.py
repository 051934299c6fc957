"""Numerical tolerances and defaults shared across the supermarket-ph toolkit."""

STOCHASTIC_TOL = 1e-9
"""Allowed deviation of alpha sums and T*e + T0 row sums."""

PHASE_VECTOR_SLACK = 1e-12
"""Allowed excess of a phase vector's total mass over one."""

UNDERFLOW_FLOOR = 1e-300
"""Fixed-point magnitudes below this are stored as exact zeros."""

DEFAULT_TAIL_EPS = 1e-16
"""Fixed-point tables stop once the aggregate tail drops below this."""

MEAN_FIELD_TAIL_EPS = 1e-12
"""Default truncation depth of the mean-field state: pi_K * e below this."""

MAX_TABLE_LEVELS = 100_000
"""Hard cap on fixed-point table length (reached only for d = 1 near rho = 1)."""

SOJOURN_TERM_EPS = 1e-14
"""The sojourn series is truncated once a term drops below this."""

RESIDUAL_TOL = 1e-10
"""Relative (to lambda) tolerance under which a balance residual counts as zero."""

ORDERING_SLACK = 1e-9
"""Componentwise slack when comparing mean-field states."""

NEGATIVE_CLAMP = 1e-12
"""Negative integration noise of at most this magnitude is set to zero."""

DEFAULT_STEP_SCALE = 0.01
"""Default RK4 step is DEFAULT_STEP_SCALE / (lambda + mu * m)."""

REFINEMENT_TOL = 1e-8
"""Step halving stops once two refinements agree to this in sup norm."""

STATIONARY_TOL = 1e-10
"""Sup norm of the derivative under which a state counts as stationary."""

A4_BOUNDARY_MARGIN = 1e-6
"""Relative distance kept above the unattainable c_X^2 > 1 lower bound on m3."""

DEFAULT_WARMUP_FRACTION = 0.1
DEFAULT_SIM_HORIZON = 20_000.0
DEFAULT_MAX_LEVEL = 32
"""Deepest queue level whose occupancy the simulator census tracks."""

DEFAULT_SIGNIFICANT_DIGITS = 6
