import heapq
import logging

from enum import IntEnum
from typing import NamedTuple


logger = logging.getLogger(__name__)


class EventKind(IntEnum):
    """Kinds of simulation events."""

    ARRIVAL = 0
    PHASE_END = 1
    """The customer in service at a server leaves its current phase."""


class Event(NamedTuple):
    time: float
    sequence: int
    kind: EventKind
    server: int


class EventQueue:
    """Time-ordered pending events of one simulation.

    Events at equal times leave in insertion order: a monotone counter breaks
    ties so runs are deterministic.
    """

    def __init__(self) -> None:
        self._heap: list[Event] = []
        self._counter = 0

    def enqueue_event(self, time: float, kind: EventKind, server: int = -1) -> None:
        """Schedules an event at `time`."""
        heapq.heappush(self._heap, Event(time, self._counter, kind, server))
        self._counter += 1

    def dequeue_event(self) -> Event:
        """Removes and returns the earliest event.

        Raises:
            IndexError: If no event is pending.
        """
        return heapq.heappop(self._heap)

    def peek_time(self) -> float:
        """Time of the earliest pending event, or infinity when empty."""
        return self._heap[0].time if self._heap else float('inf')

    def __len__(self) -> int:
        return len(self._heap)

    def clear(self) -> None:
        logger.debug('Dropping %s pending events', len(self._heap))
        self._heap.clear()
