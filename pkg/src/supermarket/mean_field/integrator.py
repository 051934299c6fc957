"""Fixed-step fourth-order Runge-Kutta integration of the mean-field equations."""

import dataclasses
import logging
import math

import numpy as np
import scipy.optimize

from supermarket.mean_field.dynamics import derivative_array
from supermarket.mean_field.state import MeanFieldState, Trajectory, empty_state
from supermarket.phase_type.distribution import FloatArray
from supermarket.types import ModelParams
from supermarket.utils.constants import (
    DEFAULT_STEP_SCALE,
    NEGATIVE_CLAMP,
    REFINEMENT_TOL,
    STATIONARY_TOL,
)
from supermarket.utils.errors import NumericalFailureError
from supermarket.utils.telemetry import model_attributes, trace_function


logger = logging.getLogger(__name__)


@dataclasses.dataclass
class IntegratorConfig:
    """Step control for `integrate` and `stationary_solve`."""

    step_scale: float = DEFAULT_STEP_SCALE
    """The base step is step_scale / (lambda + mu * m)."""
    step: float | None = None
    """Explicit base step; overrides `step_scale`."""
    refine: bool = True
    """Halve the step until two successive runs agree at the horizon."""
    refinement_tol: float = REFINEMENT_TOL
    """Sup-norm agreement required between successive refinements."""
    max_halvings: int = 6
    """Upper bound on step halvings."""
    samples: int = 200
    """Approximate number of snapshots kept in a trajectory."""
    polish: bool = True
    """Let `stationary_solve` finish with a nonlinear root solve."""
    polish_threshold: float = 1e-6
    """Derivative sup norm below which the root solve is attempted."""

    def base_step(self, params: ModelParams) -> float:
        if self.step is not None:
            if self.step <= 0:
                raise ValueError(f'step must be positive, got {self.step}')
            return self.step
        return self.step_scale / (params.lambda_ + params.mu * params.ph.order)


def _rk4_step(levels: FloatArray, h: float, params: ModelParams) -> FloatArray:
    k1 = derivative_array(levels, params)
    k2 = derivative_array(levels + 0.5 * h * k1, params)
    k3 = derivative_array(levels + 0.5 * h * k2, params)
    k4 = derivative_array(levels + h * k3, params)
    updated = levels + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    noise = (updated < 0.0) & (updated >= -NEGATIVE_CLAMP)
    updated[noise] = 0.0
    return updated


def _run(
    initial: MeanFieldState,
    params: ModelParams,
    horizon: float,
    h: float,
    samples: int,
) -> Trajectory:
    n_steps = max(1, math.ceil(horizon / h))
    h = horizon / n_steps
    stride = max(1, n_steps // max(samples, 1))
    trajectory = Trajectory(params=params)
    trajectory.append(initial)
    levels = np.array(initial.levels, dtype=float)
    for step in range(1, n_steps + 1):
        levels = _rk4_step(levels, h, params)
        if step % stride == 0 or step == n_steps:
            if not np.all(np.isfinite(levels)):
                raise NumericalFailureError(
                    f'state became non-finite at t={initial.t + step * h:.6g} with step {h:.3g}'
                )
            trajectory.append(MeanFieldState(levels=levels.copy(), t=initial.t + step * h))
    return trajectory


@trace_function(attribute_extractor=model_attributes)
def integrate(
    initial: MeanFieldState,
    params: ModelParams,
    horizon: float,
    config: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrates the mean-field equations from `initial` over `horizon`.

    Runs classic RK4 at the base step, then halves the step until two
    successive runs agree at the horizon within the refinement tolerance.
    The finest run is returned.

    Args:
        initial: The starting state; its depth K fixes the truncation.
        params: The model.
        horizon: Integration length, > 0.
        config: Step control; defaults to `IntegratorConfig()`.

    Returns:
        The sampled `Trajectory`, starting with `initial`.

    Raises:
        NumericalFailureError: If the state becomes non-finite.
    """
    if horizon <= 0:
        raise ValueError(f'horizon must be positive, got {horizon}')
    config = config or IntegratorConfig()
    h = config.base_step(params)
    trajectory = _run(initial, params, horizon, h, config.samples)
    if not config.refine:
        return trajectory
    for _ in range(config.max_halvings):
        h /= 2.0
        finer = _run(initial, params, horizon, h, config.samples)
        change = float(np.max(np.abs(finer.final.levels - trajectory.final.levels)))
        logger.debug('Step %s changed the horizon state by %s', h, change)
        trajectory = finer
        if change < config.refinement_tol:
            return trajectory
    logger.warning(
        'Step refinement did not reach %s after %s halvings', config.refinement_tol, config.max_halvings
    )
    return trajectory


def _advance(levels: FloatArray, params: ModelParams, duration: float, h: float) -> FloatArray:
    n_steps = max(1, math.ceil(duration / h))
    h = duration / n_steps
    for _ in range(n_steps):
        levels = _rk4_step(levels, h, params)
    if not np.all(np.isfinite(levels)):
        raise NumericalFailureError('state became non-finite during the stationary search')
    return levels


def _polish(levels: FloatArray, params: ModelParams, tol: float) -> FloatArray | None:
    shape = levels.shape

    def residual(flat: FloatArray) -> FloatArray:
        return derivative_array(flat.reshape(shape), params).ravel()

    solution = scipy.optimize.root(residual, levels.ravel(), method='hybr', tol=tol * 1e-2)
    polished = solution.x.reshape(shape)
    polished[(polished < 0.0) & (polished >= -NEGATIVE_CLAMP)] = 0.0
    if (
        solution.success
        and np.all(polished >= 0.0)
        and float(np.max(np.abs(residual(polished.ravel())))) < tol
    ):
        return polished
    logger.debug('Root polishing rejected: %s', solution.message)
    return None


@trace_function(attribute_extractor=model_attributes)
def stationary_solve(
    params: ModelParams,
    tol: float = STATIONARY_TOL,
    K: int | None = None,  # noqa: N803
    config: IntegratorConfig | None = None,
) -> MeanFieldState:
    """Integrates from the empty state until the derivative vanishes.

    Once the derivative sup norm falls below the polish threshold a root
    solve finishes the search; the polished point is kept only if it is
    nonnegative and its derivative is below `tol`.

    Raises:
        UnstableModelError: If rho >= 1.
        NumericalFailureError: If the derivative is still above `tol` at
            time 1e4 / (lambda + mu).
    """
    params.require_stable()
    config = config or IntegratorConfig()
    state = empty_state(params, K)
    h = config.base_step(params)
    rate = params.lambda_ + params.mu
    chunk = 20.0 / rate
    max_time = 1e4 / rate
    levels = state.levels.copy()
    t = 0.0
    while t < max_time:
        levels = _advance(levels, params, chunk, h)
        t += chunk
        norm = float(np.max(np.abs(derivative_array(levels, params))))
        if norm < tol:
            logger.debug('Stationary after integrating to t=%s (norm %s)', t, norm)
            return MeanFieldState(levels=levels, t=t)
        if config.polish and norm < config.polish_threshold:
            polished = _polish(levels, params, tol)
            if polished is not None:
                logger.debug('Stationary point polished at t=%s', t)
                return MeanFieldState(levels=polished, t=t)
    raise NumericalFailureError(
        f'no stationary state within t={max_time:.6g}; derivative norm {norm:.3g}'
    )
