"""Phase-type service laws: validation, derived quantities and constructors.

Moment fitting lives in `supermarket.phase_type.fitting`.
"""

from supermarket.phase_type.constructors import (
    NAMED_FIXTURES,
    coxian2,
    erlang,
    exponential,
    hyper_exponential,
    named_fixture,
)
from supermarket.phase_type.distribution import (
    PHDistribution,
    PhaseKernel,
    PhaseVector,
    check_phase_vector,
    validate,
)


__all__ = [
    'NAMED_FIXTURES',
    'PHDistribution',
    'PhaseKernel',
    'PhaseVector',
    'check_phase_vector',
    'coxian2',
    'erlang',
    'exponential',
    'hyper_exponential',
    'named_fixture',
    'validate',
]
