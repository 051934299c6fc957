import pytest

from supermarket.analysis import (
    expected_sojourn,
    exponential_sojourn,
    matched_exponential,
    mph1_sojourn,
    residual_mean,
)
from supermarket.phase_type import erlang, exponential, named_fixture
from supermarket.types import ModelParams
from supermarket.utils.errors import UnstableModelError


def test_residual_mean_of_exponential_is_the_mean():
    assert residual_mean(exponential(2.0)) == pytest.approx(0.5)


def test_residual_mean_of_erlang():
    # Uniform omega over the stages: (2 + 1) / (2 eta).
    assert residual_mean(erlang(2, 4.0)) == pytest.approx(1.5 / 4.0)


def test_residual_mean_matches_residual_representation():
    ph = named_fixture('T1')
    assert residual_mean(ph) == pytest.approx(ph.residual_representation().mean())


@pytest.mark.parametrize('d', [2, 3, 5])
@pytest.mark.parametrize('lam', [0.5, 0.7, 0.9])
def test_exponential_service_agrees_with_exponential_formula(d, lam):
    params = ModelParams(ph=exponential(1.0), lambda_=lam, d=d)
    assert expected_sojourn(params) == pytest.approx(exponential_sojourn(1.0, lam, d), rel=1e-12)


def test_two_choices_at_high_load():
    params = ModelParams(ph=exponential(1.0), lambda_=0.9, d=2)
    assert expected_sojourn(params) == pytest.approx(2.614057, abs=1e-6)


def test_single_choice_exponential_is_mm1():
    params = ModelParams(ph=exponential(1.0), lambda_=0.5, d=1)
    assert expected_sojourn(params) == pytest.approx(2.0)
    assert exponential_sojourn(1.0, 0.5, 1) == pytest.approx(2.0)
    assert mph1_sojourn(exponential(1.0), 0.5) == pytest.approx(2.0)


def test_more_choices_shorten_the_sojourn():
    ph = named_fixture('hyperexp3')
    values = [expected_sojourn(ModelParams(ph=ph, lambda_=0.9, d=d)) for d in (1, 2, 3, 5)]
    assert values == sorted(values, reverse=True)
    assert values[-1] > ph.mean()


def test_sojourn_grows_with_load():
    ph = erlang(2, 2.0)
    values = [expected_sojourn(ModelParams(ph=ph, lambda_=lam, d=2)) for lam in (0.3, 0.6, 0.9)]
    assert values == sorted(values)


def test_light_load_sojourn_approaches_service_mean():
    ph = named_fixture('T1')
    params = ModelParams(ph=ph, lambda_=1e-4, d=2)
    assert expected_sojourn(params) == pytest.approx(ph.mean(), rel=1e-3)


def test_unstable_models_raise():
    with pytest.raises(UnstableModelError):
        expected_sojourn(ModelParams(ph=exponential(1.0), lambda_=1.0, d=2))
    with pytest.raises(UnstableModelError):
        exponential_sojourn(1.0, 1.5, 2)
    with pytest.raises(UnstableModelError):
        mph1_sojourn(exponential(1.0), 1.0)


def test_exponential_sojourn_rejects_zero_probes():
    with pytest.raises(ValueError):
        exponential_sojourn(1.0, 0.5, 0)


def test_mph1_pollaczek_khinchine():
    ph = erlang(2, 2.0)
    # E[X] = 1, E[X^2] = 1.5.
    assert mph1_sojourn(ph, 0.5) == pytest.approx(1.0 + 0.5 * 1.5 / 1.0)


def test_matched_exponential_keeps_the_mean():
    ph = named_fixture('T3')
    matched = matched_exponential(ph)
    assert matched.order == 1
    assert matched.mean() == pytest.approx(ph.mean())
