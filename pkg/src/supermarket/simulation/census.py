"""Occupancy census of the servers, split by queue level and service phase.

``count[k][i]`` is the number of servers with at least ``k`` customers whose
customer in service is in phase ``i`` (k = 1..max_level). Time integrals of
the counts are accumulated lazily: a cell is only touched when its count
changes, and all cells are flushed once at the end of a run.
"""

from collections.abc import Sequence

import numpy as np

from supermarket.phase_type.distribution import FloatArray


class Census:
    """Exact per-(level, phase) server counts and their post-warmup time integrals."""

    def __init__(self, n: int, order: int, max_level: int, warmup: float):
        self.n = n
        self.order = order
        self.max_level = max_level
        self.warmup = warmup
        # Row 0 is unused so that row k is level k.
        self.count = [[0] * order for _ in range(max_level + 1)]
        self._area = [[0.0] * order for _ in range(max_level + 1)]
        self._since = [[0.0] * order for _ in range(max_level + 1)]

    def _shift(self, level: int, phase: int, delta: int, now: float) -> None:
        start = self._since[level][phase]
        if now > self.warmup:
            self._area[level][phase] += self.count[level][phase] * (now - max(start, self.warmup))
        self._since[level][phase] = now
        self.count[level][phase] += delta

    def grow(self, length: int, phase: int, now: float) -> None:
        """A server in `phase` went from `length - 1` to `length` customers."""
        if length <= self.max_level:
            self._shift(length, phase, 1, now)

    def shrink(self, length: int, phase: int, now: float) -> None:
        """A server in `phase` went from `length` to `length - 1` customers."""
        if length <= self.max_level:
            self._shift(length, phase, -1, now)

    def move(self, length: int, old_phase: int, new_phase: int, now: float) -> None:
        """The customer in service at a server holding `length` customers changed phase."""
        for level in range(1, min(length, self.max_level) + 1):
            self._shift(level, old_phase, -1, now)
            self._shift(level, new_phase, 1, now)

    def flush(self, now: float) -> None:
        """Brings every integral up to `now`."""
        for level in range(1, self.max_level + 1):
            for phase in range(self.order):
                self._shift(level, phase, 0, now)

    def snapshot(self) -> FloatArray:
        """Current fractions, a max_level x m array (row k-1 is level k)."""
        return np.array(self.count[1:], dtype=float) / self.n

    def time_averages(self, measured: float) -> FloatArray:
        """Post-warmup time-averaged fractions; call `flush` first."""
        return np.array(self._area[1:], dtype=float) / (self.n * measured)


def tail_fractions_snapshot(census: Census) -> FloatArray:
    """Fractions of servers with at least k customers in each phase, k = 1..max_level."""
    return census.snapshot()


def recount(
    lengths: Sequence[int], phases: Sequence[int], order: int, max_level: int
) -> FloatArray:
    """Rebuilds the census fractions from raw per-server lengths and phases."""
    n = len(lengths)
    counts = np.zeros((max_level, order))
    for length, phase in zip(lengths, phases):
        for level in range(1, min(length, max_level) + 1):
            counts[level - 1, phase] += 1
    return counts / n
