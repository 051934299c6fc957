"""Mean sojourn time of a customer in the supermarket model."""

import logging
import math

import numpy as np
import scipy.linalg

from supermarket.analysis.fixed_point import exponent_pair
from supermarket.phase_type.constructors import exponential
from supermarket.phase_type.distribution import PHDistribution
from supermarket.types import ModelParams
from supermarket.utils.constants import MAX_TABLE_LEVELS, SOJOURN_TERM_EPS
from supermarket.utils.errors import UnstableModelError


logger = logging.getLogger(__name__)


def residual_mean(ph: PHDistribution) -> float:
    """E[X_R] = omega (-T)^-1 e, the mean of the residual service law."""
    return float(ph.omega @ scipy.linalg.solve(-ph.T, np.ones(ph.order)))


def _tail_series(log_theta: float, log_rho: float, d: int) -> float:
    """sum_{k>=1} theta^B_k rho^(d B_k), truncated once a term is negligible."""
    if d == 1:
        # theta = 1 at d = 1 and the series is geometric.
        ratio = math.exp(log_rho)
        return ratio / (1.0 - ratio)
    total = 0.0
    for k in range(1, MAX_TABLE_LEVELS + 1):
        _, b_exp = exponent_pair(k, d)
        log_term = b_exp * log_theta + d * b_exp * log_rho
        term = math.exp(log_term) if log_term > -745.0 else 0.0
        total += term
        if term < SOJOURN_TERM_EPS:
            break
    return total


def expected_sojourn(params: ModelParams) -> float:
    """Returns the mean sojourn time E[T_d] at the fixed point.

    E[T_d] = rho^d theta (E[X_R] - E[X]) + E[X] (1 + sum_{k>=1} theta^B_k rho^(d B_k)).

    Raises:
        UnstableModelError: If rho >= 1.
    """
    params.require_stable()
    ph = params.ph
    d = params.d
    rho = params.rho
    theta = ph.theta(d)
    mean = ph.mean()
    series = _tail_series(math.log(theta), math.log(rho), d)
    sojourn = rho**d * theta * (residual_mean(ph) - mean) + mean * (1.0 + series)
    logger.debug('E[T_%s] = %s (rho=%s, theta=%s, series=%s)', d, sojourn, rho, theta, series)
    return sojourn


def exponential_sojourn(mu: float, lam: float, d: int) -> float:
    """Mean sojourn with exponential service: (1/mu) sum_{k>=0} rho^((d^(k+1) - d)/(d - 1)).

    At d = 1 this is the M/M/1 value 1 / (mu - lambda).
    """
    if d < 1:
        raise ValueError(f'probe count d must be >= 1, got {d}')
    rho = lam / mu
    if not rho < 1.0:
        raise UnstableModelError(rho)
    return (1.0 + _tail_series(0.0, math.log(rho), d)) / mu


def mph1_sojourn(ph: PHDistribution, lam: float) -> float:
    """Exact M/PH/1 mean sojourn by Pollaczek-Khinchine: E[X] + lambda E[X^2] / (2 (1 - rho))."""
    mean = ph.mean()
    rho = lam * mean
    if not rho < 1.0:
        raise UnstableModelError(rho)
    return mean + lam * ph.moment(2) / (2.0 * (1.0 - rho))


def matched_exponential(ph: PHDistribution) -> PHDistribution:
    """Returns the exponential law with the same mean as `ph`."""
    return exponential(ph.service_rate())
