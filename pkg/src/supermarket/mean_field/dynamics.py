"""Right-hand side of the mean-field equations.

    d/dt S_1 = lambda alpha      - lambda S_1^d + S_1 T + (S_2 T0) alpha
    d/dt S_k = lambda S_{k-1}^d  - lambda S_k^d + S_k T + (S_{k+1} T0) alpha

Powers are entrywise, S_0 = 1 and S_{K+1} = 0.
"""

import numpy as np

from supermarket.mean_field.state import MeanFieldState
from supermarket.phase_type.distribution import FloatArray
from supermarket.types import ModelParams


def derivative_array(levels: FloatArray, params: ModelParams) -> FloatArray:
    """Rate of change of the K x m array `levels`."""
    ph = params.ph
    lam = params.lambda_
    powered = levels**params.d
    inflow = np.empty_like(levels)
    inflow[0] = ph.alpha_vector
    inflow[1:] = powered[:-1]
    exits = levels @ ph.exit_vector
    returns = np.zeros_like(exits)
    returns[:-1] = exits[1:]
    return lam * (inflow - powered) + levels @ ph.T + np.outer(returns, ph.alpha_vector)


def derivative(state: MeanFieldState, params: ModelParams) -> FloatArray:
    """Returns d/dt S_1..S_K stacked as a K x m array."""
    return derivative_array(state.levels, params)


def level0_balance(state: MeanFieldState, params: ModelParams) -> float:
    """-lambda + S_1 T0; zero only at equilibrium since S_0 is held at 1."""
    return -params.lambda_ + float(state.levels[0] @ params.ph.exit_vector)
