"""Closed-form fixed point, balance diagnostics and mean sojourn times."""

from supermarket.analysis.fixed_point import (
    BalanceResiduals,
    FixedPointTable,
    balance_residuals,
    doubly_exponential_ratio,
    exponent_pair,
    fixed_point_table,
    fixed_point_vector,
    queue_tail,
)
from supermarket.analysis.sojourn import (
    expected_sojourn,
    exponential_sojourn,
    matched_exponential,
    mph1_sojourn,
    residual_mean,
)


__all__ = [
    'BalanceResiduals',
    'FixedPointTable',
    'balance_residuals',
    'doubly_exponential_ratio',
    'expected_sojourn',
    'exponent_pair',
    'exponential_sojourn',
    'fixed_point_table',
    'fixed_point_vector',
    'matched_exponential',
    'mph1_sojourn',
    'queue_tail',
    'residual_mean',
]
