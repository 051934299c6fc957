"""Independent replications and their aggregation into confidence intervals."""

import dataclasses
import logging
import math

from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy.stats

from numpy.random import SeedSequence

from supermarket.simulation.simulator import run
from supermarket.simulation.streams import RandomStream, spawn_seeds
from supermarket.types import SimConfig, SimStats
from supermarket.utils.telemetry import model_attributes, trace_function


logger = logging.getLogger(__name__)

CONFIDENCE_LEVEL = 0.95


@dataclasses.dataclass
class ReplicationPlan:
    """How replications of a scenario are executed."""

    workers: int = 1
    """Worker processes; 1 runs replications in the calling process."""
    confidence: float = CONFIDENCE_LEVEL
    """Two-sided confidence level of the reported half-width."""


def aggregate(stats: Sequence[SimStats], confidence: float = CONFIDENCE_LEVEL) -> SimStats:
    """Folds replication statistics into one `SimStats`.

    The mean response is the average of the replication means, with a
    Student-t confidence half-width over them. A single replication is
    returned as a point estimate with an infinite half-width.
    """
    if not stats:
        raise ValueError('aggregate needs at least one replication')
    means = np.array([item.mean_response for item in stats])
    count = len(stats)
    mean = float(np.mean(means))
    if count == 1:
        logger.warning('Single replication: confidence interval is unavailable')
        half_width = math.inf
    else:
        quantile = scipy.stats.t.ppf(0.5 + confidence / 2.0, df=count - 1)
        half_width = float(quantile * np.std(means, ddof=1) / math.sqrt(count))

    depth = min(len(item.tail_fractions) for item in stats)
    tails = np.mean([item.tail_fractions[:depth] for item in stats], axis=0)
    by_phase = np.mean([item.tail_fractions_by_phase[: depth - 1] for item in stats], axis=0)
    return SimStats(
        mean_response=mean,
        ci_half_width=half_width,
        tail_fractions=tails.tolist(),
        tail_fractions_by_phase=by_phase.tolist(),
        customers_served=sum(item.customers_served for item in stats),
        mean_queue_length=float(np.mean([item.mean_queue_length for item in stats])),
        little_check=float(np.mean([item.little_check for item in stats])),
        overloaded=any(item.overloaded for item in stats),
        replication_means=means.tolist(),
    )


def _run_child(config: SimConfig, seed: SeedSequence) -> SimStats:
    return run(config, RandomStream(seed))


@trace_function(
    span_name='simulation.replications', attribute_extractor=model_attributes
)
def run_replications(config: SimConfig, plan: ReplicationPlan | None = None) -> SimStats:
    """Runs ``config.replications`` independent replications and aggregates them.

    Replication i draws from the i-th child of ``SeedSequence(config.seed)``,
    so results do not depend on the number of workers.
    """
    plan = plan or ReplicationPlan()
    seeds = spawn_seeds(config.seed, config.replications)
    if plan.workers > 1 and config.replications > 1:
        logger.debug('Running %s replications on %s workers', config.replications, plan.workers)
        with ProcessPoolExecutor(max_workers=plan.workers) as executor:
            results = list(executor.map(_run_child, [config] * len(seeds), seeds))
    else:
        results = [_run_child(config, seed) for seed in seeds]
    return aggregate(results, plan.confidence)
