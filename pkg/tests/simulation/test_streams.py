import numpy as np
import pytest

from supermarket.simulation import RandomStream, spawn_seeds


def test_same_seed_same_draws():
    a = RandomStream(42)
    b = RandomStream(42)
    assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]
    assert [a.standard_exponential() for _ in range(10)] == [
        b.standard_exponential() for _ in range(10)
    ]


def test_different_seeds_differ():
    assert RandomStream(1).uniform() != RandomStream(2).uniform()


def test_buffer_refill_continues_the_sequence():
    small = RandomStream(7, buffer_size=3)
    large = RandomStream(7, buffer_size=100)
    assert [small.uniform() for _ in range(10)] == [large.uniform() for _ in range(10)]
    assert all(0.0 <= large.uniform() < 1.0 for _ in range(250))


def test_exponential_mean():
    stream = RandomStream(3)
    draws = [stream.exponential(4.0) for _ in range(50_000)]
    assert min(draws) > 0
    assert np.mean(draws) == pytest.approx(0.25, rel=0.03)


def test_spawned_seeds_are_distinct_and_reproducible():
    first = [RandomStream(seed).uniform() for seed in spawn_seeds(11, 3)]
    again = [RandomStream(seed).uniform() for seed in spawn_seeds(11, 3)]
    assert first == again
    assert len(set(first)) == 3


def test_spawned_seeds_differ_from_master():
    child = spawn_seeds(11, 1)[0]
    assert RandomStream(child).uniform() != RandomStream(11).uniform()
