import math

from collections import Counter

import numpy as np
import pytest

from supermarket.analysis import fixed_point_table, mph1_sojourn
from supermarket.mean_field import stationary_solve
from supermarket.phase_type import erlang, exponential, named_fixture
from supermarket.repro.reference import RESPONSE_TIMES
from supermarket.simulation import (
    ProbeSampler,
    RandomStream,
    ReplicationPlan,
    SupermarketSimulator,
    recount,
    run,
    run_replications,
    sample_choices,
)
from supermarket.types import ModelParams, SimConfig


def make_config(**overrides) -> SimConfig:
    values = {
        'n': 20,
        'd': 2,
        'lambda_': 0.7,
        'ph': named_fixture('T1'),
        'horizon': 200.0,
        'seed': 1,
    }
    values.update(overrides)
    return SimConfig(**values)


class TestProbeSampling:
    def test_sample_choices_are_distinct(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            choices = sample_choices(10, 3, rng)
            assert len(set(choices)) == 3
            assert all(0 <= c < 10 for c in choices)

    def test_sample_choices_rejects_too_many_probes(self):
        with pytest.raises(ValueError):
            sample_choices(3, 4, np.random.default_rng(0))

    def test_probe_sampler_is_uniform(self):
        sampler = ProbeSampler(5, 2, RandomStream(9))
        counts = Counter()
        for _ in range(20_000):
            choice = sampler.sample()
            assert len(set(choice)) == 2
            counts.update(choice)
        for server in range(5):
            assert counts[server] / 20_000 == pytest.approx(0.4, abs=0.02)

    def test_probe_sampler_with_all_servers(self):
        sampler = ProbeSampler(4, 4, RandomStream(0))
        assert sorted(sampler.sample()) == [0, 1, 2, 3]

    def test_probe_sampler_rejects_zero_probes(self):
        with pytest.raises(ValueError):
            ProbeSampler(4, 0, RandomStream(0))


class TestSimulatorState:
    def test_census_matches_recount_between_events(self):
        config = make_config()
        simulator = SupermarketSimulator(config, RandomStream(config.seed))
        simulator.start()
        for _ in range(2000):
            assert simulator.step()
        expected = recount(simulator.lengths, simulator.phases, 2, config.max_level)
        assert simulator.snapshot().tolist() == expected.tolist()

    def test_one_pending_phase_end_per_busy_server(self):
        config = make_config()
        simulator = SupermarketSimulator(config, RandomStream(config.seed))
        simulator.start()
        for _ in range(1500):
            simulator.step()
        busy = sum(1 for length in simulator.lengths if length > 0)
        assert len(simulator.events) == busy + 1
        assert simulator.in_system == sum(simulator.lengths)
        assert [len(queue) for queue in simulator.arrivals] == simulator.lengths
        assert all(
            (phase >= 0) == (length > 0)
            for phase, length in zip(simulator.phases, simulator.lengths)
        )

    def test_step_stops_at_horizon(self):
        config = make_config(horizon=5.0)
        simulator = SupermarketSimulator(config, RandomStream(0))
        simulator.start()
        while simulator.step():
            assert simulator.now <= 5.0
        assert simulator.events.peek_time() > 5.0


class TestRun:
    def test_same_seed_same_statistics(self):
        config = make_config()
        assert run(config).model_dump() == run(config).model_dump()

    def test_default_stream_uses_config_seed(self):
        config = make_config(seed=17)
        assert run(config).mean_response == run(config, RandomStream(17)).mean_response

    def test_different_seeds_differ(self):
        assert run(make_config(seed=1)).mean_response != run(make_config(seed=2)).mean_response

    def test_statistics_shape(self):
        config = make_config(max_level=8)
        stats = run(config)
        assert len(stats.tail_fractions) == 9
        assert stats.tail_fractions[0] == 1.0
        assert len(stats.tail_fractions_by_phase) == 8
        assert all(len(row) == 2 for row in stats.tail_fractions_by_phase)
        assert stats.tail_fractions[1:] == pytest.approx(
            [sum(row) for row in stats.tail_fractions_by_phase]
        )
        assert math.isinf(stats.ci_half_width)
        assert stats.customers_served > 0
        assert not stats.overloaded

    def test_busy_fraction_is_the_load(self):
        config = make_config(n=50, lambda_=1.0, horizon=1000.0)
        stats = run(config)
        assert stats.tail_fractions[1] == pytest.approx(1.0 / 2.75, rel=0.03)

    def test_little_law(self):
        config = make_config(n=50, lambda_=0.8, ph=exponential(1.0), horizon=1000.0)
        stats = run(config)
        assert 0.98 <= stats.little_check <= 1.02

    def test_overload_is_flagged(self, caplog):
        config = make_config(lambda_=1.2, ph=exponential(1.0), horizon=50.0)
        stats = run(config)
        assert stats.overloaded
        assert 'overloaded' in caplog.text


@pytest.mark.slow
class TestAgainstAnalysis:
    def test_single_choice_matches_mph1(self):
        ph = erlang(2, 2.0)
        config = SimConfig(n=50, d=1, lambda_=0.6, ph=ph, horizon=4000.0, seed=3, replications=4)
        stats = run_replications(config)
        assert stats.mean_response == pytest.approx(mph1_sojourn(ph, 0.6), rel=0.03)

    @pytest.mark.parametrize(
        ('dist', 'ph'),
        [('exp:1', exponential(1.0)), ('erlang:2,2', erlang(2, 2.0))],
    )
    def test_published_response_times(self, dist, ph):
        expected = RESPONSE_TIMES[dist][(2, 0.9)]
        config = SimConfig(n=100, d=2, lambda_=0.9, ph=ph, horizon=5000.0, seed=5, replications=4)
        stats = run_replications(config)
        assert stats.mean_response == pytest.approx(expected, rel=0.03)

    def test_large_system_tails_approach_mean_field(self):
        ph = named_fixture('T1')
        params = ModelParams(ph=ph, lambda_=2.2, d=2)
        config = SimConfig(n=1000, d=2, lambda_=2.2, ph=ph, horizon=200.0, seed=8)
        stats = run(config)
        table = fixed_point_table(params)
        stationary = stationary_solve(params, K=table.K)
        assert stats.tail_fractions[1] == pytest.approx(params.rho, rel=0.02)
        assert stats.tail_fractions[2] == pytest.approx(stationary.tails[1], rel=0.05)

    def test_large_exponential_system_tails_match_fixed_point(self):
        params = ModelParams(ph=exponential(1.0), lambda_=0.9, d=2)
        config = SimConfig(
            n=1000, d=2, lambda_=0.9, ph=params.ph, horizon=2000.0, seed=15, replications=2
        )
        stats = run_replications(config, ReplicationPlan(workers=2))
        table = fixed_point_table(params, k_max=4)
        assert table.tails.tolist() == pytest.approx([0.9 ** (2**k - 1) for k in range(1, 5)])
        assert stats.tail_fractions[1:5] == pytest.approx(table.tails.tolist(), abs=0.01)

    @pytest.mark.parametrize(
        ('ph', 'd', 'lam'),
        [
            (named_fixture('hyperexp3'), 2, 0.7),
            (named_fixture('hyperexp3'), 3, 0.9),
            (erlang(3, 3.0), 3, 0.8),
            (erlang(3, 3.0), 5, 0.9),
            (exponential(1.0), 5, 0.9),
        ],
    )
    def test_scenarios_are_consistent(self, ph, d, lam):
        config = SimConfig(n=100, d=d, lambda_=lam, ph=ph, horizon=2000.0, seed=21, replications=2)
        stats = run_replications(config, ReplicationPlan(workers=2))
        assert 0.98 <= stats.little_check <= 1.02
        assert stats.tail_fractions[1] == pytest.approx(lam * ph.mean(), rel=0.02)
        assert ph.mean() < stats.mean_response < mph1_sojourn(ph, lam)
        assert stats.tail_fractions[1:] == sorted(stats.tail_fractions[1:], reverse=True)

    def test_more_probes_shorten_the_response_time(self):
        ph = named_fixture('hyperexp3')
        means = [
            run_replications(
                SimConfig(n=100, d=d, lambda_=0.9, ph=ph, horizon=2000.0, seed=22, replications=2)
            ).mean_response
            for d in (2, 3, 5)
        ]
        assert means == sorted(means, reverse=True)
        assert means[0] - means[-1] > 0.5

    def test_worker_count_does_not_change_results(self):
        config = make_config(replications=3, horizon=300.0)
        serial = run_replications(config, ReplicationPlan(workers=1))
        parallel = run_replications(config, ReplicationPlan(workers=2))
        assert serial.replication_means == parallel.replication_means
        assert serial.tail_fractions == parallel.tail_fractions
