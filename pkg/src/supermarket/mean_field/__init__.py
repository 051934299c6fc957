"""Mean-field dynamics of the supermarket model with PH service."""

from supermarket.mean_field.dynamics import derivative, level0_balance
from supermarket.mean_field.integrator import (
    IntegratorConfig,
    integrate,
    stationary_solve,
)
from supermarket.mean_field.lyapunov import DecayFit, log_decay_fit, lyapunov_distance
from supermarket.mean_field.state import (
    MeanFieldState,
    Trajectory,
    check_state_invariants,
    count_ordering_violations,
    default_depth,
    empty_state,
    ordering_holds,
    state_from_document,
    state_from_table,
)


__all__ = [
    'DecayFit',
    'IntegratorConfig',
    'MeanFieldState',
    'Trajectory',
    'check_state_invariants',
    'count_ordering_violations',
    'default_depth',
    'derivative',
    'empty_state',
    'integrate',
    'level0_balance',
    'log_decay_fit',
    'lyapunov_distance',
    'ordering_holds',
    'state_from_document',
    'state_from_table',
    'stationary_solve',
]
