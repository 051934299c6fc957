"""Closed-form fixed point of the supermarket model with PH service.

At the fixed point the fraction of servers holding at least ``k`` customers,
split by the phase of the customer in service, is

    pi_k = theta^A_k * rho^B_k * omega,   A_k = sum_{j<k-1} d^j,  B_k = sum_{j<k} d^j,

with pi_0 = 1. Magnitudes are evaluated in log space since the exponents grow
like d^k.
"""

import logging
import math

from dataclasses import dataclass, field

import numpy as np

from supermarket.phase_type.distribution import FloatArray, PhaseVector, check_phase_vector
from supermarket.types import ModelParams
from supermarket.utils.constants import (
    DEFAULT_TAIL_EPS,
    MAX_TABLE_LEVELS,
    UNDERFLOW_FLOOR,
)
from supermarket.utils.telemetry import model_attributes, trace_function


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointTable:
    """The levels pi_1..pi_K of the fixed point together with its ingredients."""

    pi: FloatArray
    """K x m array; row k-1 holds pi_k."""
    omega: PhaseVector
    """Stationary phase vector of T + T0 alpha."""
    theta: float
    """sum_i omega_i^d."""
    rho: float
    """Offered load lambda / mu."""
    mu: float
    """Service rate omega T0."""
    d: int
    """Probe count."""
    lambda_: float
    """Per-server arrival rate."""
    truncated: bool = field(default=False)
    """True when MAX_TABLE_LEVELS stopped the table before the tail threshold."""

    @property
    def K(self) -> int:  # noqa: N802
        """Truncation level."""
        return self.pi.shape[0]

    @property
    def order(self) -> int:
        return self.pi.shape[1]

    @property
    def tails(self) -> FloatArray:
        """pi_k e for k = 1..K."""
        return self.pi.sum(axis=1)

    def level(self, k: int) -> PhaseVector:
        """Returns pi_k for 1 <= k <= K."""
        if not 1 <= k <= self.K:
            raise ValueError(f'level {k} outside 1..{self.K}')
        return self.pi[k - 1]


@dataclass(frozen=True)
class BalanceResiduals:
    """Left-hand sides of the level balance equations evaluated at a table."""

    level0: float
    """-lambda + pi_1 T0."""
    scalar: FloatArray
    """Per-level residual vectors post-multiplied by e, k = 1..K."""
    vector: FloatArray
    """K x m per-level residual vectors."""

    def max_scalar(self) -> float:
        return float(max(abs(self.level0), np.max(np.abs(self.scalar), initial=0.0)))

    def max_vector(self) -> float:
        return float(np.max(np.abs(self.vector), initial=0.0))


def exponent_pair(k: int, d: int) -> tuple[float, float]:
    """Returns (A_k, B_k) = (sum_{j=0}^{k-2} d^j, sum_{j=0}^{k-1} d^j).

    The sums are accumulated directly, so d = 1 gives (k - 1, k) and huge
    exponents overflow to ``inf`` instead of raising.
    """
    if k < 1 or d < 1:
        raise ValueError(f'exponent_pair needs k >= 1 and d >= 1, got k={k}, d={d}')
    if d == 1:
        return float(k - 1), float(k)
    a_exp = 0.0
    term = 1.0
    for _ in range(k - 1):
        a_exp += term
        term *= d
    return a_exp, a_exp + term


def _log_magnitude(a_exp: float, b_exp: float, log_theta: float, log_rho: float) -> float:
    # 0 * inf would be nan when theta == 1.
    theta_part = 0.0 if log_theta == 0.0 else a_exp * log_theta
    return theta_part + b_exp * log_rho


def _magnitude(k: int, d: int, log_theta: float, log_rho: float) -> float:
    a_exp, b_exp = exponent_pair(k, d)
    log_mag = _log_magnitude(a_exp, b_exp, log_theta, log_rho)
    magnitude = math.exp(log_mag) if log_mag > -745.0 else 0.0
    return magnitude if magnitude >= UNDERFLOW_FLOOR else 0.0


def fixed_point_vector(params: ModelParams, k: int) -> PhaseVector:
    """Returns pi_k = theta^A_k rho^B_k omega for k >= 1.

    pi_0 is the scalar 1 and is not a phase vector; use `queue_tail` for it.

    Raises:
        UnstableModelError: If rho >= 1.
        ValueError: If k < 1.
    """
    params.require_stable()
    if k < 1:
        raise ValueError(f'phase-vector levels start at k=1, got {k}')
    ph = params.ph
    magnitude = _magnitude(k, params.d, math.log(ph.theta(params.d)), math.log(params.rho))
    vector = magnitude * ph.omega
    check_phase_vector(vector)
    return vector


@trace_function(attribute_extractor=model_attributes)
def fixed_point_table(
    params: ModelParams,
    tail_eps: float | None = None,
    k_max: int | None = None,
) -> FixedPointTable:
    """Computes pi_1, pi_2, ... until the tail is negligible.

    The table stops at the first level whose aggregate pi_k e drops below
    `tail_eps` (that level is included) or at level `k_max`. Given only
    `k_max`, exactly `k_max` levels are produced; given neither, `tail_eps`
    defaults to DEFAULT_TAIL_EPS.

    Args:
        params: A stable model.
        tail_eps: Tail threshold.
        k_max: Maximum number of levels.

    Returns:
        The `FixedPointTable`.

    Raises:
        UnstableModelError: If rho >= 1.
    """
    params.require_stable()
    if k_max is not None and k_max < 1:
        raise ValueError(f'k_max must be >= 1, got {k_max}')
    if tail_eps is None and k_max is None:
        tail_eps = DEFAULT_TAIL_EPS

    ph = params.ph
    d = params.d
    theta = ph.theta(d)
    rho = params.rho
    log_theta = math.log(theta)
    log_rho = math.log(rho)
    limit = min(k_max or MAX_TABLE_LEVELS, MAX_TABLE_LEVELS)

    magnitudes: list[float] = []
    for k in range(1, limit + 1):
        magnitude = _magnitude(k, d, log_theta, log_rho)
        magnitudes.append(magnitude)
        if tail_eps is not None and magnitude < tail_eps:
            break
    truncated = (
        tail_eps is not None and magnitudes[-1] >= tail_eps and len(magnitudes) == MAX_TABLE_LEVELS
    )
    if truncated:
        logger.warning(
            'Fixed-point table capped at %s levels with tail %s', MAX_TABLE_LEVELS, magnitudes[-1]
        )
    logger.debug('Fixed-point table: d=%s rho=%s theta=%s K=%s', d, rho, theta, len(magnitudes))
    pi = np.outer(magnitudes, ph.omega)
    pi.setflags(write=False)
    return FixedPointTable(
        pi=pi,
        omega=ph.omega,
        theta=theta,
        rho=rho,
        mu=params.mu,
        d=d,
        lambda_=params.lambda_,
        truncated=truncated,
    )


def balance_residuals(table: FixedPointTable, params: ModelParams) -> BalanceResiduals:
    """Evaluates the level balance equations at the fixed point.

    Level 0 is the scalar -lambda + pi_1 T0. For k >= 1 the residual vector is

        lambda pi_{k-1}^d - lambda pi_k^d + pi_k T + (pi_{k+1} T0) alpha

    with pi_0^d read as alpha at k = 1 and pi_{K+1} taken from the closed
    form. The scalar residual is that vector times e.
    """
    ph = params.ph
    lam = params.lambda_
    d = params.d
    T = ph.T
    exit_vector = ph.exit_vector
    alpha = ph.alpha_vector

    levels = np.vstack([table.pi, fixed_point_vector(params, table.K + 1)])
    powered = levels**d
    vector = np.empty_like(table.pi)
    for index in range(table.K):
        inflow = alpha if index == 0 else powered[index - 1]
        vector[index] = (
            lam * inflow
            - lam * powered[index]
            + levels[index] @ T
            + float(levels[index + 1] @ exit_vector) * alpha
        )
    level0 = -lam + float(levels[0] @ exit_vector)
    return BalanceResiduals(level0=level0, scalar=vector.sum(axis=1), vector=vector)


def queue_tail(table: FixedPointTable, k: int) -> float:
    """Returns the fraction of queues with at least k customers, pi_k e (1 at k = 0)."""
    if k == 0:
        return 1.0
    return float(table.level(k).sum())


def doubly_exponential_ratio(table: FixedPointTable) -> list[float]:
    """Returns log(pi_{k+1} e) / log(pi_k e) for consecutive positive tails.

    The ratio approaches d as k grows.
    """
    tails = table.tails
    ratios = []
    for current, following in zip(tails[:-1], tails[1:]):
        if current <= 0 or following <= 0 or current >= 1:
            break
        ratios.append(math.log(following) / math.log(current))
    return ratios
