"""Distance of a mean-field state from the fixed point, and its decay rate."""

import logging

from dataclasses import dataclass

import numpy as np
import scipy.stats

from supermarket.analysis.fixed_point import FixedPointTable
from supermarket.mean_field.state import MeanFieldState, Trajectory
from supermarket.utils.errors import ShapeMismatchError


logger = logging.getLogger(__name__)

LOG_FLOOR = 1e-13


def lyapunov_distance(state: MeanFieldState, table: FixedPointTable) -> float:
    """Returns sum_k (pi_k - S_k) e with unit weights.

    Levels where S_k exceeds pi_k contribute negatively; see
    `count_ordering_violations`.
    """
    if state.shape != table.pi.shape:
        raise ShapeMismatchError(table.pi.shape, state.shape)
    return float(np.sum(table.pi - state.levels))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through log Phi(t) over a trajectory tail."""

    slope: float
    intercept: float
    r_squared: float
    points: int


def log_decay_fit(
    trajectory: Trajectory, table: FixedPointTable, tail_fraction: float = 0.5
) -> DecayFit:
    """Fits log Phi(t) = intercept + slope * t over the last `tail_fraction` of samples.

    Samples whose distance is below LOG_FLOOR are dropped since their logarithm
    is dominated by rounding.
    """
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f'tail_fraction must lie in (0, 1], got {tail_fraction}')
    start = int(len(trajectory) * (1.0 - tail_fraction))
    times = []
    logs = []
    for sample in trajectory.samples[start:]:
        distance = lyapunov_distance(sample, table)
        if distance > LOG_FLOOR:
            times.append(sample.t)
            logs.append(np.log(distance))
    if len(times) < 3:
        raise ValueError(f'only {len(times)} samples above {LOG_FLOOR}; shorten the horizon')
    fit = scipy.stats.linregress(times, logs)
    logger.debug('log Phi decay slope %s (r=%s)', fit.slope, fit.rvalue)
    return DecayFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        points=len(times),
    )
