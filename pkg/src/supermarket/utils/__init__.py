"""Shared errors, constants and tracing helpers."""

from supermarket.utils.errors import (
    InfeasibleMomentsError,
    InvalidDistributionError,
    NumericalFailureError,
    ReducibleRepresentationError,
    ShapeMismatchError,
    SupermarketError,
    UnstableModelError,
)


__all__ = [
    'InfeasibleMomentsError',
    'InvalidDistributionError',
    'NumericalFailureError',
    'ReducibleRepresentationError',
    'ShapeMismatchError',
    'SupermarketError',
    'UnstableModelError',
]
