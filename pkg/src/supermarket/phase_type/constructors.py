"""Factory functions for the standard phase-type families."""

import math

from collections.abc import Callable, Sequence

import numpy as np

from supermarket.phase_type.distribution import PHDistribution, validate
from supermarket.utils.constants import STOCHASTIC_TOL
from supermarket.utils.errors import InvalidDistributionError


def exponential(mu: float) -> PHDistribution:
    """Creates the order-1 exponential law with rate `mu`.

    Args:
        mu: The service rate.

    Returns:
        A `PHDistribution` with alpha = (1) and T = [[-mu]].
    """
    _require_positive('mu', mu)
    return validate([1.0], [[-mu]])


def erlang(m: int, eta: float) -> PHDistribution:
    """Creates the m-stage Erlang law with per-stage rate `eta`.

    Args:
        m: Number of stages.
        eta: Rate of every stage.

    Returns:
        A `PHDistribution` with alpha = (1, 0, ..., 0) and upper-bidiagonal T.
    """
    if int(m) != m or m < 1:
        raise InvalidDistributionError(f'Erlang order must be a positive integer, got {m}')
    _require_positive('eta', eta)
    m = int(m)
    T = -eta * np.eye(m)
    for i in range(m - 1):
        T[i, i + 1] = eta
    alpha = np.zeros(m)
    alpha[0] = 1.0
    return validate(alpha, T)


def hyper_exponential(weights: Sequence[float], rates: Sequence[float]) -> PHDistribution:
    """Creates a mixture of exponentials.

    Args:
        weights: Branch probabilities; must form a distribution.
        rates: Branch rates, one per weight.

    Returns:
        A `PHDistribution` with alpha = weights and T = diag(-rates).
    """
    weights_array = np.asarray(weights, dtype=float)
    rates_array = np.asarray(rates, dtype=float)
    if weights_array.shape != rates_array.shape or weights_array.ndim != 1:
        raise InvalidDistributionError(
            f'{weights_array.size} weights given for {rates_array.size} rates'
        )
    if np.any(rates_array <= 0):
        raise InvalidDistributionError(f'rates must be positive, got {rates_array.tolist()}')
    if np.any(weights_array < 0) or abs(weights_array.sum() - 1.0) > STOCHASTIC_TOL:
        raise InvalidDistributionError(
            f'weights must form a distribution, got {weights_array.tolist()}'
        )
    return validate(weights_array, np.diag(-rates_array))


def coxian2(eta: float, xi1: float, xi2: float) -> PHDistribution:
    """Creates the canonical order-2 acyclic PH law.

    Starts in phase 1 with probability `eta` (rate `xi1`, then phase 2) and
    in phase 2 otherwise (rate `xi2`, then absorption).

    Args:
        eta: Probability of starting in phase 1, in [0, 1].
        xi1: Rate of phase 1.
        xi2: Rate of phase 2; must not be smaller than `xi1`.

    Returns:
        A `PHDistribution` with alpha = (eta, 1 - eta) and T = [[-xi1, xi1], [0, -xi2]].
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidDistributionError(f'eta must lie in [0, 1], got {eta}')
    _require_positive('xi1', xi1)
    _require_positive('xi2', xi2)
    if xi1 > xi2:
        raise InvalidDistributionError(f'canonical form needs xi1 <= xi2, got {xi1} > {xi2}')
    return validate([eta, 1.0 - eta], [[-xi1, xi1], [0.0, -xi2]])


def _require_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise InvalidDistributionError(f'{name} must be positive and finite, got {value}')


NAMED_FIXTURES: dict[str, Callable[[], PHDistribution]] = {
    'T1': lambda: validate([0.5, 0.5], [[-4.0, 3.0], [2.0, -7.0]]),
    'T2': lambda: validate([0.5, 0.5], [[-5.0, 3.0], [2.0, -7.0]]),
    'T3': lambda: validate([0.5, 0.5], [[-4.0, 4.0], [2.0, -7.0]]),
    'order3-uniform': lambda: validate(
        [1 / 3, 1 / 3, 1 / 3],
        [[-10.0, 2.0, 4.0], [3.0, -7.0, 4.0], [0.0, 2.0, -5.0]],
    ),
    'order3-skewed': lambda: validate(
        [1 / 12, 7 / 12, 1 / 3],
        [[-10.0, 2.0, 4.0], [3.0, -7.0, 4.0], [0.0, 2.0, -5.0]],
    ),
    'hyperexp3': lambda: hyper_exponential([0.5, 0.25, 0.25], [2.0, 0.5, 1.0]),
}
"""PH laws used by the published numerical examples, by short name."""


def named_fixture(name: str) -> PHDistribution:
    """Returns one of the `NAMED_FIXTURES` distributions.

    Raises:
        InvalidDistributionError: If the name is unknown.
    """
    try:
        factory = NAMED_FIXTURES[name]
    except KeyError:
        known = ', '.join(sorted(NAMED_FIXTURES))
        raise InvalidDistributionError(f'unknown fixture {name!r}; known: {known}') from None
    return factory()
