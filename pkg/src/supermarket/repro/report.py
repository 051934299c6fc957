"""Recomputation of published tables and deviation flagging.

Fixed-point tables are recomputed from the closed form. Response-time tables
are re-simulated at the published system size.
"""

import logging
import math

from collections.abc import Iterable
from dataclasses import dataclass, field
from decimal import Decimal

from supermarket.analysis.fixed_point import fixed_point_table
from supermarket.repro.reference import (
    REFERENCE_TABLES,
    RESPONSE_TIME_LAWS,
    RESPONSE_TIME_N,
    RESPONSE_TIME_REL_TOL,
    RESPONSE_TIMES,
    ReferenceTable,
)
from supermarket.simulation.aggregate import ReplicationPlan, run_replications
from supermarket.types import ModelParams, SimConfig
from supermarket.utils.constants import DEFAULT_SIM_HORIZON


logger = logging.getLogger(__name__)


def printed_unit(printed: str) -> float:
    """One unit in the last printed digit of a number, e.g. 1e-4 for '0.0093'."""
    exponent = Decimal(printed.strip()).as_tuple().exponent
    if not isinstance(exponent, int):
        raise ValueError(f'not a finite number: {printed!r}')
    return 10.0**exponent


@dataclass(frozen=True)
class ReproCell:
    scenario: str
    level: int
    phase: int | None
    """Phase index, or None when the published value is the aggregate pi_k e."""
    published: str
    computed: float
    tolerance: float

    @property
    def deviation(self) -> float:
        return abs(self.computed - float(self.published))

    @property
    def flagged(self) -> bool:
        return self.deviation > self.tolerance


@dataclass
class ReproReport:
    table: ReferenceTable
    cells: list[ReproCell] = field(default_factory=list)

    @property
    def flagged(self) -> list[ReproCell]:
        return [cell for cell in self.cells if cell.flagged]


def reproduce(name: str) -> ReproReport:
    """Recomputes the named reference table from the closed form.

    Each printed cell is compared with the computed value; a cell is flagged
    when they differ by more than one unit in the last printed digit (or by
    the table's relative tolerance).

    Raises:
        KeyError: If `name` is not a known table.
    """
    table = REFERENCE_TABLES[name]
    report = ReproReport(table=table)
    for scenario in table.scenarios:
        params = ModelParams(ph=scenario.ph(), lambda_=scenario.lambda_, d=scenario.d)
        computed = fixed_point_table(params, k_max=len(scenario.levels))
        for level, printed_row in enumerate(scenario.levels, start=1):
            pi_k = computed.level(level)
            aggregate = len(printed_row) == 1
            for phase, printed in enumerate(printed_row):
                value = float(pi_k.sum()) if aggregate else float(pi_k[phase])
                if table.rel_tol is not None:
                    tolerance = table.rel_tol * abs(float(printed))
                else:
                    tolerance = printed_unit(printed)
                report.cells.append(
                    ReproCell(
                        scenario=scenario.label,
                        level=level,
                        phase=None if aggregate else phase,
                        published=printed,
                        computed=value,
                        tolerance=tolerance,
                    )
                )
    for cell in report.flagged:
        logger.warning(
            '%s %s pi_%s[%s]: published %s, computed %.4g',
            name,
            cell.scenario,
            cell.level,
            'e' if cell.phase is None else cell.phase,
            cell.published,
            cell.computed,
        )
    return report


@dataclass(frozen=True)
class ResponseTimeCell:
    dist: str
    d: int
    lambda_: float
    published: float
    simulated: float
    ci_half_width: float
    rel_tol: float = RESPONSE_TIME_REL_TOL

    @property
    def gap(self) -> float:
        """Relative gap (simulated - published) / published."""
        return (self.simulated - self.published) / self.published

    @property
    def flagged(self) -> bool:
        return abs(self.gap) > self.rel_tol


@dataclass
class ResponseTimeReport:
    n: int
    cells: list[ResponseTimeCell] = field(default_factory=list)

    @property
    def flagged(self) -> list[ResponseTimeCell]:
        return [cell for cell in self.cells if cell.flagged]


def published_response_time(dist: str, d: int, lambda_: float) -> float | None:
    """The published n = 100 response time for a DistSpec, or None if not tabulated."""
    for (listed_d, listed_lambda), value in RESPONSE_TIMES.get(dist, {}).items():
        if listed_d == d and math.isclose(listed_lambda, lambda_):
            return value
    return None


def response_time_keys(dists: Iterable[str] | None = None) -> list[tuple[str, int, float]]:
    """Every tabulated (dist, d, lambda), optionally restricted to some laws.

    Raises:
        KeyError: If a requested law has no published response times.
    """
    names = list(RESPONSE_TIMES) if dists is None else list(dists)
    return [(name, d, lam) for name in names for d, lam in RESPONSE_TIMES[name]]


def reproduce_response_times(
    keys: Iterable[tuple[str, int, float]] | None = None,
    *,
    horizon: float = DEFAULT_SIM_HORIZON,
    warmup: float | None = None,
    seed: int = 0,
    replications: int = 10,
    plan: ReplicationPlan | None = None,
    rel_tol: float = RESPONSE_TIME_REL_TOL,
) -> ResponseTimeReport:
    """Re-simulates published mean response times at n = 100.

    Every cell uses the same master seed, so cells are reproducible one by
    one. A cell is flagged when the simulated mean misses the published value
    by more than `rel_tol` relative.

    Args:
        keys: (dist, d, lambda) triples to run; all tabulated cells by default.

    Raises:
        KeyError: If a triple is not tabulated.
    """
    report = ResponseTimeReport(n=RESPONSE_TIME_N)
    for dist, d, lambda_ in response_time_keys() if keys is None else keys:
        published = published_response_time(dist, d, lambda_)
        if published is None:
            raise KeyError(f'no published response time for {dist} at d={d}, lambda={lambda_}')
        config = SimConfig(
            n=RESPONSE_TIME_N,
            d=d,
            lambda_=lambda_,
            ph=RESPONSE_TIME_LAWS[dist](),
            horizon=horizon,
            warmup=warmup,
            seed=seed,
            replications=replications,
        )
        stats = run_replications(config, plan)
        cell = ResponseTimeCell(
            dist=dist,
            d=d,
            lambda_=lambda_,
            published=published,
            simulated=stats.mean_response,
            ci_half_width=stats.ci_half_width,
            rel_tol=rel_tol,
        )
        logger.info(
            'Response time %s d=%s lambda=%s: published %s, simulated %.6g',
            dist,
            d,
            lambda_,
            published,
            cell.simulated,
        )
        report.cells.append(cell)
    for cell in report.flagged:
        logger.warning(
            'response time %s d=%s lambda=%s: published %s, simulated %.4g (gap %+.1f%%)',
            cell.dist,
            cell.d,
            cell.lambda_,
            cell.published,
            cell.simulated,
            100 * cell.gap,
        )
    return report
