"""Discrete-event simulation of the finite-n supermarket model."""

from supermarket.simulation.aggregate import ReplicationPlan, aggregate, run_replications
from supermarket.simulation.census import Census, recount, tail_fractions_snapshot
from supermarket.simulation.event_queue import Event, EventKind, EventQueue
from supermarket.simulation.simulator import (
    ProbeSampler,
    SupermarketSimulator,
    run,
    sample_choices,
)
from supermarket.simulation.streams import RandomStream, spawn_seeds


__all__ = [
    'Census',
    'Event',
    'EventKind',
    'EventQueue',
    'ProbeSampler',
    'RandomStream',
    'ReplicationPlan',
    'SupermarketSimulator',
    'aggregate',
    'recount',
    'run',
    'run_replications',
    'sample_choices',
    'spawn_seeds',
    'tail_fractions_snapshot',
]
