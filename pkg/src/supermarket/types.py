"""Wire models of the supermarket-ph toolkit.

Every document read from or written to disk (PH models, fit outcomes,
simulation configurations and statistics, CLI results) is one of these
pydantic models, so each round-trips losslessly through JSON.
"""

from __future__ import annotations

import math

from enum import Enum
from typing import Any

from pydantic import ConfigDict, Field, model_validator
from typing_extensions import Self

from supermarket._base import SupermarketBaseModel
from supermarket.phase_type.distribution import PHDistribution
from supermarket.utils.constants import (
    DEFAULT_MAX_LEVEL,
    DEFAULT_SIM_HORIZON,
    DEFAULT_WARMUP_FRACTION,
)
from supermarket.utils.errors import UnstableModelError


class ClampRule(str, Enum):
    """
    Feasibility repairs applied to a moment triple before PH(2) fitting.
    """

    a1 = 'a1'
    """m2 raised to 1.5 m1^2."""
    a2 = 'a2'
    """m3 raised to the lower edge of its band (0.5 <= c_X^2 <= 1)."""
    a3 = 'a3'
    """m3 lowered to the upper edge of its band (0.5 <= c_X^2 <= 1)."""
    a4 = 'a4'
    """m3 raised above the lower bound for c_X^2 > 1."""


class MomentTriple(SupermarketBaseModel):
    """
    The first three raw moments of a service time.
    """

    model_config = ConfigDict(frozen=True)

    m1: float
    """E[X] (time)."""
    m2: float
    """E[X^2] (time^2)."""
    m3: float
    """E[X^3] (time^3)."""

    @property
    def scv(self) -> float:
        """Squared coefficient of variation m2 / m1^2 - 1."""
        return self.m2 / self.m1**2 - 1.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.m1, self.m2, self.m3)


class FitOutcome(SupermarketBaseModel):
    """
    The canonical PH(2) matched to a (clamped) moment triple.
    """

    raw: MomentTriple
    """The moments as supplied."""
    clamped: MomentTriple
    """The moments actually matched, after feasibility repairs."""
    clamp_flags: list[ClampRule] = Field(default_factory=list)
    """The repairs that fired, in application order."""
    eta: float
    """Probability of starting in phase 1, in [0, 1]."""
    xi1: float
    """Rate of phase 1."""
    xi2: float
    """Rate of phase 2, xi1 <= xi2."""
    distribution: PHDistribution
    """The fitted canonical PH(2)."""
    max_relative_error: float | None = None
    """Largest relative gap between fitted and clamped moments, once verified."""


class ModelParams(SupermarketBaseModel):
    """
    A supermarket model: PH service, per-server Poisson rate and probe count.
    """

    model_config = ConfigDict(frozen=True)

    ph: PHDistribution
    """Service time law."""
    lambda_: float = Field(gt=0)
    """Per-server arrival rate; the system receives n * lambda."""
    d: int = Field(ge=1)
    """Number of servers probed per arrival."""

    @property
    def mu(self) -> float:
        """Service rate omega T0 = 1 / E[X]."""
        return self.ph.service_rate()

    @property
    def rho(self) -> float:
        """Offered load per server, lambda / mu."""
        return self.lambda_ / self.mu

    def require_stable(self) -> None:
        """Raises UnstableModelError unless rho < 1."""
        rho = self.rho
        if not rho < 1.0:
            raise UnstableModelError(rho)


class StateDocument(SupermarketBaseModel):
    """
    A mean-field state on disk: ``{"levels": [[...], ...], "t": 0.0}``.
    """

    levels: list[list[float]]
    """S_1..S_K, one phase vector per level."""
    t: float = 0.0


class SimConfig(SupermarketBaseModel):
    """
    One simulation scenario of the finite-n supermarket model.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    """Number of servers."""
    d: int = Field(ge=1)
    """Probe count, 1 <= d <= n."""
    lambda_: float = Field(gt=0)
    """Per-server arrival rate."""
    ph: PHDistribution
    """Service time law."""
    horizon: float = Field(default=DEFAULT_SIM_HORIZON, gt=0)
    """Simulated time per replication."""
    warmup: float | None = Field(default=None, ge=0)
    """Discarded prefix; defaults to 10% of the horizon."""
    seed: int = 0
    """Master seed; replications use spawned child streams."""
    replications: int = Field(default=1, ge=1)
    """Number of independent replications."""
    max_level: int = Field(default=DEFAULT_MAX_LEVEL, ge=1)
    """Deepest queue level tracked by the tail census."""

    @model_validator(mode='after')
    def _check_scenario(self) -> Self:
        if self.d > self.n:
            raise ValueError(f'probe count d={self.d} exceeds server count n={self.n}')
        if self.effective_warmup >= self.horizon:
            raise ValueError(f'warmup {self.effective_warmup} must be below horizon {self.horizon}')
        return self

    @property
    def effective_warmup(self) -> float:
        if self.warmup is None:
            return DEFAULT_WARMUP_FRACTION * self.horizon
        return self.warmup


class SimStats(SupermarketBaseModel):
    """
    Measured output of one replication, or of an aggregate over replications.
    """

    model_config = ConfigDict(ser_json_inf_nan='constants')

    mean_response: float
    """Mean sojourn time of customers arriving after warmup."""
    ci_half_width: float = math.inf
    """95% confidence half-width; infinite for a single replication."""
    tail_fractions: list[float]
    """Time-averaged fraction of queues with at least k customers, k = 0..K."""
    tail_fractions_by_phase: list[list[float]]
    """Same, split by the phase of the customer in service, k = 1..K."""
    customers_served: int
    """Completed sojourns counted in `mean_response`."""
    mean_queue_length: float
    """Time-averaged number of customers per server."""
    little_check: float
    """mean_queue_length / (lambda * mean_response); near 1 when stable."""
    overloaded: bool = False
    """True when lambda / mu >= 1."""
    replication_means: list[float] = Field(default_factory=list)
    """Per-replication mean responses (aggregates only)."""


class Provenance(SupermarketBaseModel):
    """
    Where a results document came from.
    """

    tool: str = 'supermarket-ph'
    version: str
    seed: int | None = None
    timestamp: str | None = None


class ResultsTable(SupermarketBaseModel):
    """
    One named table of output rows.
    """

    name: str
    columns: list[str]
    rows: list[list[Any]]


class ResultsDocument(SupermarketBaseModel):
    """
    The full output of one CLI command.
    """

    model_config = ConfigDict(ser_json_inf_nan='constants')

    command: str
    """Subcommand name."""
    parameters: dict[str, Any] = Field(default_factory=dict)
    """Echo of the validated inputs."""
    tables: list[ResultsTable] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    """Scalar results keyed by name."""
    notes: list[str] = Field(default_factory=list)
    """Flags and diagnostics worth a reader's attention."""
    provenance: Provenance
