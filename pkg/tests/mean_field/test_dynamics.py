import numpy as np
import pytest

from supermarket.analysis import fixed_point_table
from supermarket.mean_field import derivative, empty_state, level0_balance, state_from_table
from supermarket.mean_field.dynamics import derivative_array
from supermarket.phase_type import erlang, exponential, named_fixture
from supermarket.types import ModelParams


def test_empty_system_only_receives_arrivals():
    params = ModelParams(ph=named_fixture('T1'), lambda_=0.8, d=2)
    rates = derivative(empty_state(params, 4), params)
    assert rates[0].tolist() == pytest.approx([0.4, 0.4])
    assert not rates[1:].any()
    assert level0_balance(empty_state(params, 4), params) == pytest.approx(-0.8)


def test_exponential_fixed_point_is_stationary():
    params = ModelParams(ph=exponential(1.0), lambda_=0.7, d=2)
    state = state_from_table(fixed_point_table(params))
    assert np.max(np.abs(derivative(state, params))) < 1e-12
    assert level0_balance(state, params) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize('ph', [named_fixture('T1'), erlang(2, 3.0), named_fixture('order3-skewed')])
def test_aggregate_rates_vanish_at_closed_form(ph):
    params = ModelParams(ph=ph, lambda_=1.0, d=2)
    state = state_from_table(fixed_point_table(params))
    per_level = derivative(state, params).sum(axis=1)
    assert np.max(np.abs(per_level)) < 1e-12


def test_erlang_closed_form_is_not_componentwise_stationary():
    params = ModelParams(ph=erlang(2, 3.0), lambda_=1.0, d=2)
    state = state_from_table(fixed_point_table(params))
    assert derivative(state, params)[0].tolist() == pytest.approx([1 / 9, -1 / 9])


def test_single_level_state():
    params = ModelParams(ph=exponential(2.0), lambda_=1.0, d=2)
    levels = np.array([[0.5]])
    # S_0 = 1 in, S_2 = 0 beyond the truncation: 1 - 0.25 - 1.
    assert derivative_array(levels, params).tolist() == pytest.approx([[-0.25]])


def test_derivative_does_not_modify_input():
    params = ModelParams(ph=named_fixture('T1'), lambda_=1.0, d=3)
    levels = np.array([[0.3, 0.2], [0.05, 0.02]])
    before = levels.copy()
    derivative_array(levels, params)
    assert levels.tolist() == before.tolist()
