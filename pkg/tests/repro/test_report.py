import pytest

from supermarket.repro import (
    REFERENCE_TABLES,
    RESPONSE_TIME_LAWS,
    RESPONSE_TIMES,
    ReproCell,
    ResponseTimeCell,
    printed_unit,
    published_response_time,
    reproduce,
    reproduce_response_times,
    response_time_keys,
)
from supermarket.simulation import ReplicationPlan
from supermarket.types import SimStats


@pytest.mark.parametrize(
    ('printed', 'unit'),
    [
        ('0.0093', 1e-4),
        ('0.1667', 1e-4),
        ('2.858e-05', 1e-8),
        ('1.410e-98', 1e-101),
        ('3', 1.0),
    ],
)
def test_printed_unit(printed, unit):
    assert printed_unit(printed) == pytest.approx(unit)


def test_printed_unit_rejects_non_finite():
    with pytest.raises(ValueError):
        printed_unit('inf')


def test_cell_flagging():
    cell = ReproCell(
        scenario='x', level=1, phase=0, published='0.1667', computed=0.16675, tolerance=1e-4
    )
    assert cell.deviation == pytest.approx(5e-5)
    assert not cell.flagged
    far = ReproCell(
        scenario='x', level=1, phase=0, published='0.1667', computed=0.0167, tolerance=1e-4
    )
    assert far.flagged


def test_every_table_has_cells_for_every_printed_value():
    for name, table in REFERENCE_TABLES.items():
        report = reproduce(name)
        expected = sum(len(row) for scenario in table.scenarios for row in scenario.levels)
        assert len(report.cells) == expected


def test_erlang_matches_closed_form():
    assert reproduce('erlang').flagged == []


def test_exponential_with_t1_mean_matches():
    report = reproduce('exponential')
    assert [cell for cell in report.flagged if cell.scenario == 'mu=2.7500'] == []


def test_exponential_deep_levels_for_t3_mean_are_flagged():
    report = reproduce('exponential')
    flagged = [cell.level for cell in report.flagged if cell.scenario == 'mu=2.3529']
    assert flagged == [4, 5]
    deep = {cell.level: cell.computed for cell in report.cells if cell.scenario == 'mu=2.3529'}
    assert deep[4] == pytest.approx((17 / 40) ** 15)
    assert deep[5] == pytest.approx((17 / 40) ** 31)


def test_t1_first_level_matches():
    report = reproduce('ph2')
    first = [cell for cell in report.cells if cell.scenario == 'T(1)' and cell.level == 1]
    assert [cell.flagged for cell in first] == [False, False]
    assert [cell.computed for cell in first] == pytest.approx([0.5625 / 2.75, 0.4375 / 2.75])


def test_misprinted_cells_are_flagged(caplog):
    report = reproduce('hyperexp-alpha')
    flagged = [(cell.scenario, cell.level, cell.phase) for cell in report.flagged]
    assert ('alpha=(0.5,0.5)', 1, 1) in flagged
    assert 'published 0.1667' in caplog.text

    order3 = reproduce('order3')
    assert ('alpha=(1/3,1/3,1/3)', 2, 1) in [
        (cell.scenario, cell.level, cell.phase) for cell in order3.flagged
    ]


def test_unknown_table():
    with pytest.raises(KeyError):
        reproduce('missing')


def fake_stats(mean_response: float) -> SimStats:
    return SimStats(
        mean_response=mean_response,
        ci_half_width=0.01,
        tail_fractions=[1.0, 0.5],
        tail_fractions_by_phase=[[0.5]],
        customers_served=1000,
        mean_queue_length=0.5 * mean_response,
        little_check=1.0,
    )


class TestResponseTimes:
    def test_published_lookup(self):
        assert published_response_time('exp:1', 2, 0.9) == pytest.approx(2.721852)
        assert published_response_time('hyperexp3', 3, 0.9) == pytest.approx(2.476718)
        assert published_response_time('exp:1', 4, 0.9) is None
        assert published_response_time('T1', 2, 0.9) is None

    def test_keys_cover_every_tabulated_cell(self):
        keys = response_time_keys()
        assert len(keys) == sum(len(cells) for cells in RESPONSE_TIMES.values())
        assert set(RESPONSE_TIME_LAWS) == set(RESPONSE_TIMES)
        assert response_time_keys(['erlang:3,3'])[-1] == ('erlang:3,3', 5, 0.9)

    def test_unknown_law_is_rejected(self):
        with pytest.raises(KeyError):
            response_time_keys(['T1'])
        with pytest.raises(KeyError):
            reproduce_response_times([('exp:1', 4, 0.9)])

    def test_laws_match_their_names(self):
        assert RESPONSE_TIME_LAWS['exp:1']().mean() == pytest.approx(1.0)
        assert RESPONSE_TIME_LAWS['erlang:3,3']().order == 3
        assert RESPONSE_TIME_LAWS['erlang:3,3']().mean() == pytest.approx(1.0)

    def test_cell_gap_and_flag(self):
        cell = ResponseTimeCell(
            dist='exp:1',
            d=2,
            lambda_=0.5,
            published=1.395977,
            simulated=1.2688,
            ci_half_width=0.002,
        )
        assert cell.gap == pytest.approx(-0.0911, abs=1e-4)
        assert cell.flagged
        close = ResponseTimeCell(
            dist='exp:1', d=2, lambda_=0.9, published=2.721852, simulated=2.70, ci_half_width=0.01
        )
        assert not close.flagged

    def test_flags_follow_the_simulated_means(self, mocker, caplog):
        simulated = {(2, 0.5): 1.2688, (2, 0.9): 2.71}
        run = mocker.patch(
            'supermarket.repro.report.run_replications',
            side_effect=lambda config, plan: fake_stats(simulated[(config.d, config.lambda_)]),
        )
        report = reproduce_response_times(
            [('exp:1', 2, 0.5), ('exp:1', 2, 0.9)], horizon=100.0, replications=2, seed=4
        )
        assert run.call_count == 2
        config = run.call_args.args[0]
        assert (config.n, config.horizon, config.replications, config.seed) == (100, 100.0, 2, 4)
        assert [(cell.d, cell.lambda_) for cell in report.flagged] == [(2, 0.5)]
        assert 'gap -9.1%' in caplog.text


@pytest.mark.slow
def test_published_response_times_flagged_and_reproduced():
    keys = [
        ('exp:1', 2, 0.5),
        ('hyperexp3', 2, 0.5),
        ('erlang:3,3', 5, 0.9),
        ('exp:1', 2, 0.9),
        ('erlang:2,2', 2, 0.9),
    ]
    report = reproduce_response_times(
        keys, horizon=5000.0, replications=4, seed=5, plan=ReplicationPlan(workers=2)
    )
    flagged = {(cell.dist, cell.d, cell.lambda_) for cell in report.flagged}
    assert flagged == set(keys[:3])
    assert all(cell.gap < -0.05 for cell in report.flagged)
