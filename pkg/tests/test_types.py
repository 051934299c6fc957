import math

import pytest

from pydantic import ValidationError

from supermarket.phase_type import exponential, named_fixture
from supermarket.types import (
    ClampRule,
    ModelParams,
    MomentTriple,
    Provenance,
    ResultsDocument,
    ResultsTable,
    SimConfig,
    SimStats,
    StateDocument,
)
from supermarket.utils.errors import UnstableModelError


MINIMAL_SIM_CONFIG = {
    'n': 10,
    'd': 2,
    'lambda': 0.5,
    'ph': {'alpha': [1.0], 'T': [[-1.0]]},
}


def test_moment_triple_scv():
    triple = MomentTriple(m1=2.0, m2=12.0, m3=1.0)
    assert triple.scv == pytest.approx(2.0)
    assert triple.as_tuple() == (2.0, 12.0, 1.0)


def test_moment_triple_is_frozen():
    triple = MomentTriple(m1=1.0, m2=2.0, m3=6.0)
    with pytest.raises(ValidationError):
        triple.m1 = 3.0


def test_clamp_rule_values():
    assert [rule.value for rule in ClampRule] == ['a1', 'a2', 'a3', 'a4']


def test_model_params_derived_quantities():
    params = ModelParams(ph=named_fixture('T1'), lambda_=1.0, d=2)
    assert params.mu == pytest.approx(2.75)
    assert params.rho == pytest.approx(1.0 / 2.75)
    params.require_stable()


def test_model_params_accepts_wire_alias():
    params = ModelParams.model_validate(
        {'ph': {'alpha': [1.0], 'T': [[-2.0]]}, 'lambda': 1.5, 'd': 3}
    )
    assert params.lambda_ == 1.5
    assert params.model_dump(mode='json')['lambda'] == 1.5


def test_model_params_unstable():
    params = ModelParams(ph=exponential(1.0), lambda_=1.0, d=2)
    with pytest.raises(UnstableModelError) as excinfo:
        params.require_stable()
    assert excinfo.value.rho == pytest.approx(1.0)


@pytest.mark.parametrize(('lambda_', 'd'), [(0.0, 2), (-1.0, 2), (0.5, 0)])
def test_model_params_rejects_bad_values(lambda_, d):
    with pytest.raises(ValidationError):
        ModelParams(ph=exponential(1.0), lambda_=lambda_, d=d)


def test_sim_config_defaults():
    config = SimConfig.model_validate(MINIMAL_SIM_CONFIG)
    assert config.horizon == 20_000.0
    assert config.effective_warmup == pytest.approx(2_000.0)
    assert config.replications == 1
    assert config.max_level == 32


def test_sim_config_explicit_warmup():
    config = SimConfig.model_validate({**MINIMAL_SIM_CONFIG, 'horizon': 100.0, 'warmup': 0.0})
    assert config.effective_warmup == 0.0


def test_sim_config_rejects_d_above_n():
    with pytest.raises(ValidationError, match='exceeds server count'):
        SimConfig.model_validate({**MINIMAL_SIM_CONFIG, 'd': 11})


def test_sim_config_rejects_warmup_past_horizon():
    with pytest.raises(ValidationError, match='warmup'):
        SimConfig.model_validate({**MINIMAL_SIM_CONFIG, 'horizon': 10.0, 'warmup': 10.0})


def test_sim_stats_serializes_infinite_half_width():
    stats = SimStats(
        mean_response=1.0,
        tail_fractions=[1.0, 0.5],
        tail_fractions_by_phase=[[0.5]],
        customers_served=3,
        mean_queue_length=0.5,
        little_check=1.0,
    )
    assert math.isinf(stats.ci_half_width)
    text = stats.model_dump_json()
    assert '"ciHalfWidth":Infinity' in text
    assert SimStats.model_validate_json(text).ci_half_width == math.inf


def test_state_document_round_trip():
    document = StateDocument(levels=[[0.5, 0.1], [0.05, 0.01]], t=2.0)
    assert StateDocument.model_validate_json(document.model_dump_json()) == document


def test_results_document_defaults():
    document = ResultsDocument(command='fit', provenance=Provenance(version='1.0'))
    dumped = document.model_dump(mode='json')
    assert dumped['tables'] == []
    assert dumped['provenance'] == {
        'tool': 'supermarket-ph',
        'version': '1.0',
        'seed': None,
        'timestamp': None,
    }


def test_results_table_rows():
    table = ResultsTable(name='t', columns=['k', 'v'], rows=[[1, 0.5], [2, 0.25]])
    assert table.rows[1] == [2, 0.25]
