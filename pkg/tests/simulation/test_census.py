import pytest

from supermarket.simulation import Census, recount, tail_fractions_snapshot


def test_time_averages_of_one_queue():
    census = Census(n=2, order=1, max_level=3, warmup=0.0)
    census.grow(1, 0, 0.0)
    census.grow(2, 0, 2.0)
    census.shrink(2, 0, 4.0)
    census.flush(5.0)
    averages = census.time_averages(5.0)
    assert averages[:, 0].tolist() == pytest.approx([0.5, 0.2, 0.0])
    assert census.snapshot()[:, 0].tolist() == [0.5, 0.0, 0.0]


def test_warmup_is_excluded():
    census = Census(n=1, order=1, max_level=2, warmup=1.0)
    census.grow(1, 0, 0.0)
    census.flush(3.0)
    assert census.time_averages(2.0)[0, 0] == pytest.approx(1.0)


def test_phase_change_moves_every_level():
    census = Census(n=1, order=2, max_level=3, warmup=0.0)
    census.grow(1, 0, 0.0)
    census.grow(2, 0, 0.0)
    census.move(2, 0, 1, 1.0)
    assert census.count[1] == [0, 1]
    assert census.count[2] == [0, 1]
    assert census.count[3] == [0, 0]
    census.flush(2.0)
    averages = census.time_averages(2.0)
    assert averages[0].tolist() == pytest.approx([0.5, 0.5])
    assert averages[1].tolist() == pytest.approx([0.5, 0.5])


def test_levels_beyond_max_level_are_not_tracked():
    census = Census(n=1, order=1, max_level=2, warmup=0.0)
    for length in (1, 2, 3):
        census.grow(length, 0, 0.0)
    census.move(3, 0, 0, 1.0)
    census.shrink(3, 0, 1.0)
    assert tail_fractions_snapshot(census)[:, 0].tolist() == [1.0, 1.0]


def test_recount():
    fractions = recount([0, 2, 1, 3], [-1, 1, 0, 1], order=2, max_level=3)
    assert fractions.tolist() == [[0.25, 0.5], [0.0, 0.5], [0.0, 0.25]]
