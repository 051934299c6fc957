"""Phase-type distribution algebra.

A phase-type (PH) law is the absorption time of a finite Markov chain with
initial phase law ``alpha`` and transient generator ``T``; the exit vector is
``T0 = -T e``. Everything the fixed point, the mean-field equations and the
simulator need from the service law is computed here.
"""

import logging
import math

from functools import cached_property
from typing import Any

import numpy as np
import scipy.linalg

from numpy.typing import NDArray
from pydantic import ConfigDict, Field, field_validator, model_validator
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components
from typing_extensions import Self

from supermarket._base import SupermarketBaseModel
from supermarket.utils.constants import PHASE_VECTOR_SLACK, STOCHASTIC_TOL
from supermarket.utils.errors import (
    InvalidDistributionError,
    ReducibleRepresentationError,
)


logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

PhaseVector = FloatArray
"""Nonnegative row vector of length m; sub-probability mass per service phase."""


def _frozen(values: Any) -> FloatArray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class PhaseKernel:
    """Precomputed jump tables of a PH law for event-by-event simulation.

    Row ``i`` of `cumulative` holds the cumulative probabilities of leaving
    phase ``i`` towards phases ``0..m-1`` followed by absorption in the last
    column, so one uniform draw picks the next phase.
    """

    def __init__(self, alpha: FloatArray, T: FloatArray, exit_vector: FloatArray):
        m = T.shape[0]
        self.order = m
        self.rates = -np.diag(T)
        jumps = np.empty((m, m + 1))
        jumps[:, :m] = T - np.diag(np.diag(T))
        jumps[:, m] = np.maximum(exit_vector, 0.0)
        jumps /= self.rates[:, None]
        cumulative = np.cumsum(jumps, axis=1)
        cumulative /= cumulative[:, -1:]
        self.cumulative = cumulative
        initial = np.cumsum(np.maximum(alpha, 0.0))
        self.initial_cumulative = initial / initial[-1]
        # Plain lists keep the per-event lookups in the simulator cheap.
        self.rate_list: list[float] = self.rates.tolist()
        self.cumulative_rows: list[list[float]] = cumulative.tolist()
        self.initial_list: list[float] = self.initial_cumulative.tolist()

    def initial_phase(self, u: float) -> int:
        """Returns the starting phase selected by a uniform draw ``u``."""
        for phase, bound in enumerate(self.initial_list):
            if u < bound:
                return phase
        return self.order - 1

    def next_phase(self, phase: int, u: float) -> int:
        """Returns the phase entered after leaving ``phase``, or -1 on absorption."""
        row = self.cumulative_rows[phase]
        for target, bound in enumerate(row):
            if u < bound:
                return target if target < self.order else -1
        return -1


class PHDistribution(SupermarketBaseModel):
    """A validated irreducible PH representation (alpha, T) of order m.

    Serializes to the PH model JSON document ``{"alpha": [...], "T": [[...]]}``.
    Instances are immutable; derived quantities are computed once on first use.
    """

    model_config = ConfigDict(frozen=True)

    alpha: tuple[float, ...]
    """Initial phase law, a probability row vector of length m."""
    t_matrix: tuple[tuple[float, ...], ...] = Field(alias='T')
    """Transient generator T (rates, time^-1)."""

    @field_validator('alpha', mode='before')
    @classmethod
    def _coerce_alpha(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(np.asarray(value, dtype=float).ravel().tolist())
        return value

    @field_validator('t_matrix', mode='before')
    @classmethod
    def _coerce_matrix(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(tuple(row) for row in np.atleast_2d(value).astype(float).tolist())
        return value

    @model_validator(mode='after')
    def _check_representation(self) -> Self:
        alpha = np.asarray(self.alpha, dtype=float)
        T = np.asarray(self.t_matrix, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise InvalidDistributionError(f'T must be a non-empty square matrix, got shape {T.shape}')
        m = T.shape[0]
        if alpha.shape != (m,):
            raise InvalidDistributionError(
                f'alpha has length {alpha.size} but T has dimension {m}'
            )
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(T))):
            raise InvalidDistributionError('alpha and T must be finite')
        if np.any(alpha < -STOCHASTIC_TOL) or abs(alpha.sum() - 1.0) > STOCHASTIC_TOL:
            raise InvalidDistributionError(
                f'alpha must be a probability vector, sums to {alpha.sum():.12g}'
            )
        diagonal = np.diag(T)
        if np.any(diagonal >= 0):
            raise InvalidDistributionError('diagonal entries of T must be strictly negative')
        if np.any(T - np.diag(diagonal) < 0):
            raise InvalidDistributionError('off-diagonal entries of T must be nonnegative')
        exit_vector = -T.sum(axis=1)
        scale = float(np.max(np.abs(diagonal)))
        if np.any(exit_vector < -STOCHASTIC_TOL * scale):
            raise InvalidDistributionError(
                f'exit vector -T*e has negative entries: {exit_vector.tolist()}'
            )
        if not np.any(exit_vector > STOCHASTIC_TOL * scale):
            raise InvalidDistributionError('exit vector -T*e has no positive entry')
        if np.linalg.cond(T) > 1.0 / np.finfo(float).eps:
            raise InvalidDistributionError('T is singular')
        reachable = _reachable_irreducible(alpha, T, exit_vector)
        _solve_stationary(T + np.outer(np.maximum(exit_vector, 0.0), alpha), reachable)
        return self

    @cached_property
    def order(self) -> int:
        """Number of phases m."""
        return len(self.alpha)

    @cached_property
    def alpha_vector(self) -> FloatArray:
        return _frozen(self.alpha)

    @cached_property
    def T(self) -> FloatArray:  # noqa: N802
        return _frozen(self.t_matrix)

    @cached_property
    def exit_vector(self) -> FloatArray:
        """T0 = -T e."""
        return _frozen(-self.T.sum(axis=1))

    @cached_property
    def generator(self) -> FloatArray:
        """The phase generator T + T0 alpha of a continuously busy server."""
        return _frozen(self.T + np.outer(self.exit_vector, self.alpha_vector))

    @cached_property
    def reachable_phases(self) -> NDArray[np.bool_]:
        """Boolean mask of phases reachable from the support of alpha."""
        mask = _reachable_irreducible(self.alpha_vector, self.T, self.exit_vector)
        mask.setflags(write=False)
        return mask

    @cached_property
    def kernel(self) -> PhaseKernel:
        return PhaseKernel(self.alpha_vector, self.T, self.exit_vector)

    @cached_property
    def omega(self) -> PhaseVector:
        return _frozen(_solve_stationary(self.generator, self.reachable_phases))

    def mean(self) -> float:
        """Expected service time 1/mu = -alpha T^-1 e."""
        return self.moment(1)

    def moment(self, n: int) -> float:
        """Returns the n-th raw moment n! alpha (-T)^-n e."""
        if n < 1:
            raise ValueError(f'moment order must be >= 1, got {n}')
        vector = np.ones(self.order)
        for _ in range(n):
            vector = scipy.linalg.solve(-self.T, vector)
        return float(math.factorial(n) * self.alpha_vector @ vector)

    def variance(self) -> float:
        m1 = self.moment(1)
        return self.moment(2) - m1 * m1

    def scv(self) -> float:
        """Squared coefficient of variation."""
        return self.variance() / self.moment(1) ** 2

    def stationary_phase_vector(self) -> PhaseVector:
        """Returns omega with omega (T + T0 alpha) = 0 and omega e = 1.

        Phases that cannot be reached from alpha get zero mass.
        """
        return self.omega

    def service_rate(self) -> float:
        """Returns mu = omega T0."""
        return float(self.omega @ self.exit_vector)

    def theta(self, d: int) -> float:
        """Returns the phase-mixing factor sum_i omega_i^d."""
        if d < 1:
            raise ValueError(f'probe count d must be >= 1, got {d}')
        return float(np.sum(self.omega**d))

    def to_document(self) -> dict[str, Any]:
        """Returns the PH model JSON document ``{"alpha": [...], "T": [[...]]}``."""
        return self.model_dump(mode='json', by_alias=True)

    @classmethod
    def from_document(cls, document: str | bytes | dict[str, Any]) -> 'PHDistribution':
        """Parses and validates a PH model JSON document."""
        if isinstance(document, dict):
            return cls.model_validate(document)
        return cls.model_validate_json(document)

    def residual_representation(self) -> 'PHDistribution':
        """Returns the PH law (omega, T) of the residual service time."""
        return PHDistribution(alpha=self.omega, T=self.T)

    def sample(self, rng: np.random.Generator) -> float:
        """Draws one service time by exact phase-jump simulation."""
        kernel = self.kernel
        phase = kernel.initial_phase(rng.random())
        total = 0.0
        while phase >= 0:
            total += rng.standard_exponential() / kernel.rate_list[phase]
            phase = kernel.next_phase(phase, rng.random())
        return total

    def sample_many(self, rng: np.random.Generator, size: int) -> FloatArray:
        """Draws `size` independent service times, vectorised over draws."""
        kernel = self.kernel
        m = self.order
        phase = np.minimum(
            np.searchsorted(kernel.initial_cumulative, rng.random(size), side='right'),
            m - 1,
        )
        totals = np.zeros(size)
        active = np.arange(size)
        while active.size:
            current = phase[active]
            totals[active] += rng.standard_exponential(active.size) / kernel.rates[current]
            u = rng.random(active.size)
            nxt = (kernel.cumulative[current] <= u[:, None]).sum(axis=1)
            alive = nxt < m
            active = active[alive]
            phase[active] = nxt[alive]
        return totals


def validate(alpha: Any, T: Any) -> PHDistribution:
    """Checks (alpha, T) and returns the validated distribution.

    Raises:
        InvalidDistributionError: alpha is not stochastic, T has the wrong sign
            pattern or is singular, or lengths disagree.
        ReducibleRepresentationError: T + T0 alpha is reducible on the phases
            reachable from alpha.
    """
    return PHDistribution(
        alpha=np.asarray(alpha, dtype=float), T=np.atleast_2d(np.asarray(T, dtype=float))
    )


def check_phase_vector(vector: FloatArray, slack: float = PHASE_VECTOR_SLACK) -> None:
    """Raises ValueError unless `vector` is a valid sub-probability phase vector."""
    if np.any(vector < -slack) or vector.sum() > 1.0 + slack:
        raise ValueError(f'not a phase vector: {vector.tolist()}')


def _reachable_irreducible(
    alpha: FloatArray, T: FloatArray, exit_vector: FloatArray
) -> NDArray[np.bool_]:
    m = T.shape[0]
    generator = T + np.outer(np.maximum(exit_vector, 0.0), alpha)
    adjacency = generator.copy()
    np.fill_diagonal(adjacency, 0.0)
    graph = csr_matrix(adjacency > 0)
    reachable = np.zeros(m, dtype=bool)
    for start in np.flatnonzero(alpha > 0):
        reachable[breadth_first_order(graph, start, directed=True, return_predecessors=False)] = True
    sub = graph[reachable][:, reachable]
    n_components, _ = connected_components(sub, directed=True, connection='strong')
    if n_components != 1:
        raise ReducibleRepresentationError(
            f'T + T0*alpha has {n_components} communicating classes on the reachable phases'
        )
    return reachable


def _solve_stationary(generator: FloatArray, reachable: NDArray[np.bool_]) -> FloatArray:
    sub = generator[np.ix_(reachable, reachable)]
    size = sub.shape[0]
    system = sub.T.copy()
    system[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    try:
        solution = scipy.linalg.solve(system, rhs)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise ReducibleRepresentationError(f'stationary phase equations are singular: {e}') from e
    if not np.all(np.isfinite(solution)) or np.any(solution <= 0):
        raise ReducibleRepresentationError(
            f'stationary phase vector is not positive on reachable phases: {solution.tolist()}'
        )
    omega = np.zeros(generator.shape[0])
    omega[reachable] = solution
    check_phase_vector(omega)
    logger.debug('Stationary phase vector %s', omega.tolist())
    return omega
