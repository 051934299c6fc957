"""Event-driven simulation of the finite-n supermarket model.

Customers arrive as a Poisson process of rate n * lambda, probe d distinct
servers uniformly at random and join the probed server holding the fewest
customers. Each server serves FCFS; the customer in service moves through the
PH phases with exponential holding times, so every busy server has exactly
one pending PHASE_END event.
"""

import logging
import math

from collections import deque

import numpy as np

from supermarket.phase_type.distribution import FloatArray
from supermarket.simulation.census import Census
from supermarket.simulation.event_queue import EventKind, EventQueue
from supermarket.simulation.streams import RandomStream
from supermarket.types import SimConfig, SimStats
from supermarket.utils.telemetry import trace_class


logger = logging.getLogger(__name__)


def sample_choices(n: int, d: int, rng: np.random.Generator) -> list[int]:
    """Returns d distinct server indices drawn uniformly from range(n)."""
    if not 1 <= d <= n:
        raise ValueError(f'cannot probe d={d} distinct servers out of n={n}')
    return rng.choice(n, size=d, replace=False).tolist()


class ProbeSampler:
    """Draws uniform d-subsets of servers by partial Fisher-Yates shuffles.

    The permutation is kept between calls; each draw reshuffles only its
    first d slots, which yields a uniformly random ordered d-subset whatever
    the current permutation is.
    """

    def __init__(self, n: int, d: int, stream: RandomStream):
        if not 1 <= d <= n:
            raise ValueError(f'cannot probe d={d} distinct servers out of n={n}')
        self.n = n
        self.d = d
        self._stream = stream
        self._permutation = list(range(n))

    def sample(self) -> list[int]:
        permutation = self._permutation
        n = self.n
        uniform = self._stream.uniform
        for i in range(self.d):
            j = i + int(uniform() * (n - i))
            if j >= n:
                j = n - 1
            permutation[i], permutation[j] = permutation[j], permutation[i]
        return permutation[: self.d]


@trace_class(include_list=['run'])
class SupermarketSimulator:
    """One replication of the supermarket model.

    Drive it with `run`, or with `start` / `step` / `finish` to inspect the
    state between events.
    """

    def __init__(self, config: SimConfig, stream: RandomStream):
        self.config = config
        self.stream = stream
        self.kernel = config.ph.kernel
        self.warmup = config.effective_warmup
        self.horizon = config.horizon
        n = config.n
        self.lengths = [0] * n
        self.phases = [-1] * n
        self.arrivals: list[deque[float]] = [deque() for _ in range(n)]
        self.events = EventQueue()
        self.census = Census(n, config.ph.order, config.max_level, self.warmup)
        self.sampler = ProbeSampler(n, config.d, stream)
        self.now = 0.0
        self.in_system = 0
        self._arrival_rate = n * config.lambda_
        self._system_area = 0.0
        self._system_since = 0.0
        self._sojourn_total = 0.0
        self._served = 0

    def start(self) -> None:
        self.events.enqueue_event(self.stream.exponential(self._arrival_rate), EventKind.ARRIVAL)

    def step(self) -> bool:
        """Processes the next event; returns False once the horizon is reached."""
        if self.events.peek_time() > self.horizon:
            return False
        event = self.events.dequeue_event()
        self._account(event.time)
        self.now = event.time
        if event.kind == EventKind.ARRIVAL:
            self._arrive()
        else:
            self._leave_phase(event.server)
        return True

    def finish(self) -> SimStats:
        """Closes the time integrals at the horizon and returns the replication statistics."""
        self._account(self.horizon)
        self.now = self.horizon
        self.census.flush(self.horizon)
        config = self.config
        measured = self.horizon - self.warmup
        by_phase = self.census.time_averages(measured)
        mean_queue_length = self._system_area / (config.n * measured)
        if self._served:
            mean_response = self._sojourn_total / self._served
            little_check = mean_queue_length / (config.lambda_ * mean_response)
        else:
            mean_response = math.nan
            little_check = math.nan
        rho = config.lambda_ / config.ph.service_rate()
        overloaded = rho >= 1.0
        if overloaded:
            logger.warning('Simulated an overloaded system (rho=%s); statistics are transient', rho)
        logger.debug(
            'Replication done: served=%s mean_response=%s little=%s',
            self._served,
            mean_response,
            little_check,
        )
        return SimStats(
            mean_response=mean_response,
            tail_fractions=[1.0, *by_phase.sum(axis=1).tolist()],
            tail_fractions_by_phase=by_phase.tolist(),
            customers_served=self._served,
            mean_queue_length=mean_queue_length,
            little_check=little_check,
            overloaded=overloaded,
            replication_means=[mean_response],
        )

    def run(self) -> SimStats:
        self.start()
        while self.step():
            pass
        return self.finish()

    def snapshot(self) -> FloatArray:
        """Current per-(level, phase) fractions of servers."""
        return self.census.snapshot()

    def _account(self, now: float) -> None:
        if now > self.warmup:
            self._system_area += self.in_system * (now - max(self._system_since, self.warmup))
        self._system_since = now

    def _schedule_phase_end(self, server: int, phase: int) -> None:
        holding = self.stream.standard_exponential() / self.kernel.rate_list[phase]
        self.events.enqueue_event(self.now + holding, EventKind.PHASE_END, server)

    def _arrive(self) -> None:
        now = self.now
        lengths = self.lengths
        # Probe order is uniformly random, so the first minimum is a uniform tie-break.
        server = -1
        shortest = -1
        for candidate in self.sampler.sample():
            length = lengths[candidate]
            if shortest < 0 or length < shortest:
                server = candidate
                shortest = length
        self.arrivals[server].append(now)
        self.in_system += 1
        if shortest == 0:
            phase = self.kernel.initial_phase(self.stream.uniform())
            self.phases[server] = phase
            lengths[server] = 1
            self.census.grow(1, phase, now)
            self._schedule_phase_end(server, phase)
        else:
            lengths[server] = shortest + 1
            self.census.grow(shortest + 1, self.phases[server], now)
        self.events.enqueue_event(
            now + self.stream.exponential(self._arrival_rate), EventKind.ARRIVAL
        )

    def _leave_phase(self, server: int) -> None:
        now = self.now
        phase = self.phases[server]
        length = self.lengths[server]
        following = self.kernel.next_phase(phase, self.stream.uniform())
        if following >= 0:
            self.census.move(length, phase, following, now)
            self.phases[server] = following
            self._schedule_phase_end(server, following)
            return

        arrived = self.arrivals[server].popleft()
        if arrived >= self.warmup:
            self._sojourn_total += now - arrived
            self._served += 1
        self.in_system -= 1
        self.census.shrink(length, phase, now)
        length -= 1
        self.lengths[server] = length
        if length == 0:
            self.phases[server] = -1
            return
        started = self.kernel.initial_phase(self.stream.uniform())
        self.census.move(length, phase, started, now)
        self.phases[server] = started
        self._schedule_phase_end(server, started)


def run(config: SimConfig, stream: RandomStream | None = None) -> SimStats:
    """Runs one replication of `config`.

    Args:
        config: The scenario.
        stream: Random stream; defaults to one seeded with ``config.seed``.

    Returns:
        The replication's `SimStats` (infinite CI half-width).
    """
    logger.debug('Simulating n=%s d=%s lambda=%s', config.n, config.d, config.lambda_)
    return SupermarketSimulator(config, stream or RandomStream(config.seed)).run()
