"""Published fixed-point and response-time tables, as printed.

Values are kept as the printed strings so that a comparison can use the
printed precision: one unit in the last printed digit.
"""

from collections.abc import Callable
from dataclasses import dataclass

from supermarket.phase_type.constructors import (
    erlang,
    exponential,
    hyper_exponential,
    named_fixture,
)
from supermarket.phase_type.distribution import PHDistribution


@dataclass(frozen=True)
class Scenario:
    """One column of a published fixed-point table."""

    label: str
    ph: Callable[[], PHDistribution]
    lambda_: float
    d: int
    levels: tuple[tuple[str, ...], ...]
    """Printed pi_1, pi_2, ... as tuples of per-phase strings."""


@dataclass(frozen=True)
class ReferenceTable:
    name: str
    title: str
    scenarios: tuple[Scenario, ...]
    rel_tol: float | None = None
    """Relative tolerance; None compares to one unit in the last printed digit."""


def _hyper(weights: tuple[float, float], rates: tuple[float, float]) -> Callable[[], PHDistribution]:
    return lambda: hyper_exponential(weights, rates)


def _exp(mu: float) -> Callable[[], PHDistribution]:
    return lambda: exponential(mu)


HYPEREXP_ETA = ReferenceTable(
    name='hyperexp-eta',
    title='Hyper-exponential service, alpha = (0.5, 0.5), rates varied',
    scenarios=(
        Scenario(
            'eta=(3,3)',
            _hyper((0.5, 0.5), (3.0, 3.0)),
            1.0,
            2,
            (
                ('0.1667', '0.1667'),
                ('0.0093', '0.0093'),
                ('2.858e-05', '2.858e-05'),
                ('2.722e-10', '2.722e-10'),
                ('2.470e-20', '2.470e-20'),
            ),
        ),
        Scenario(
            'eta=(3,10)',
            _hyper((0.5, 0.5), (3.0, 10.0)),
            1.0,
            2,
            (
                ('0.1667', '0.0500'),
                ('0.0050', '0.0015'),
                ('4.626e-06', '1.388e-06'),
                ('3.888e-12', '1.166e-12'),
                ('2.746e-24', '8.238e-25'),
            ),
        ),
        Scenario(
            'eta=(3,20)',
            _hyper((0.5, 0.5), (3.0, 20.0)),
            1.0,
            2,
            (
                ('0.1667', '0.0250'),
                ('0.0047', '0.0007'),
                ('3.819e-06', '5.728e-07'),
                ('2.485e-12', '3.728e-13'),
                ('1.053e-24', '1.579e-25'),
            ),
        ),
    ),
)

HYPEREXP_ALPHA = ReferenceTable(
    name='hyperexp-alpha',
    title='Hyper-exponential service, rates (3, 30), alpha varied',
    scenarios=(
        Scenario(
            'alpha=(0.5,0.5)',
            _hyper((0.5, 0.5), (3.0, 30.0)),
            1.0,
            2,
            (
                ('0.1667', '0.1667'),
                ('0.0047', '0.0005'),
                ('3.680e-06', '3.680e-07'),
                ('2.280e-12', '2.280e-13'),
                ('8.752e-25', '8.752e-26'),
            ),
        ),
        Scenario(
            'alpha=(0.2,0.8)',
            _hyper((0.2, 0.8), (3.0, 30.0)),
            1.0,
            2,
            (
                ('0.0667', '0.0267'),
                ('0.0003', '0.0001'),
                ('9.136e-09', '3.654e-09'),
                ('6.454e-18', '2.582e-18'),
                ('3.221e-36', '1.289e-36'),
            ),
        ),
        Scenario(
            'alpha=(0.8,0.2)',
            _hyper((0.8, 0.2), (3.0, 30.0)),
            1.0,
            2,
            (
                ('0.2667', '0.0067'),
                ('0.0190', '0.0005'),
                ('9.607e-05', '2.402e-06'),
                ('2.463e-09', '6.157e-11'),
                ('1.618e-18', '4.046e-20'),
            ),
        ),
    ),
)

PH2 = ReferenceTable(
    name='ph2',
    title='Order-2 PH service, alpha = (0.5, 0.5), T(1), T(2), T(3)',
    scenarios=(
        Scenario(
            'T(1)',
            lambda: named_fixture('T1'),
            1.0,
            2,
            (
                ('0.2045', '0.1591'),
                ('0.0137', '0.0107'),
                ('6.193e-05', '4.817e-05'),
                ('1.259e-09', '9.793e-10'),
                ('5.204e-19', '4.048e-19'),
            ),
        ),
        Scenario(
            'T(2)',
            lambda: named_fixture('T2'),
            1.0,
            2,
            (
                ('0.1410', '0.1026'),
                ('0.0043', '0.0031'),
                ('3.965e-06', '2.884e-06'),
                ('3.390e-12', '2.465e-12'),
                ('2.478e-24', '1.802e-24'),
            ),
        ),
        Scenario(
            'T(3)',
            lambda: named_fixture('T3'),
            1.0,
            2,
            (
                ('0.3125', '0.2500'),
                ('0.0500', '0.0400'),
                ('0.0013', '0.0010'),
                ('8.446e-07', '6.757e-07'),
                ('3.656e-13', '2.925e-13'),
            ),
        ),
    ),
)

EXPONENTIAL = ReferenceTable(
    name='exponential',
    title='Exponential service with the means of T(1), T(2), T(3)',
    scenarios=(
        Scenario(
            'mu=2.7500',
            _exp(2.75),
            1.0,
            2,
            (('0.3636',), ('0.0481',), ('8.408e-04',), ('2.571e-07',), ('2.402e-14',)),
        ),
        Scenario(
            'mu=3.4118',
            _exp(58.0 / 17.0),
            1.0,
            2,
            (('0.2931',), ('0.0252',), ('1.858e-04',), ('1.012e-08',), ('3.004e-17',)),
        ),
        Scenario(
            'mu=2.3529',
            _exp(40.0 / 17.0),
            1.0,
            2,
            (('0.4250',), ('0.0768',), ('0.0025',), ('2.667e-06',), ('3.030e-12',)),
        ),
    ),
)

ORDER3 = ReferenceTable(
    name='order3',
    title='Order-3 PH service, d = 5, two initial vectors',
    scenarios=(
        Scenario(
            'alpha=(1/3,1/3,1/3)',
            lambda: named_fixture('order3-uniform'),
            1.0,
            5,
            (
                ('0.0741', '0.1358', '0.2346'),
                ('5.619e-05', '1.030e-05', '1.779e-04'),
                ('1.411e-20', '2.587e-20', '4.469e-20'),
                ('1.410e-98', '2.586e-98', '4.466e-98'),
            ),
        ),
        Scenario(
            'alpha=(1/12,7/12,1/3)',
            lambda: named_fixture('order3-skewed'),
            1.0,
            5,
            (
                ('0.0602', '0.1728', '0.2531'),
                ('7.182e-05', '2.063e-04', '3.020e-04'),
                ('1.739e-19', '4.993e-19', '7.311e-19'),
                ('1.444e-92', '4.148e-92', '6.074e-92'),
            ),
        ),
    ),
)


def _erlang_closed_form(m: int, eta: float, k: int) -> str:
    # pi_k e for Erlang(m, eta), lambda = 1, d = 2.
    return repr(m ** (2 ** (k - 1)) * eta ** (1 - 2**k))


ERLANG = ReferenceTable(
    name='erlang',
    title='Erlang service, lambda = 1, d = 2, against the specialised closed form',
    scenarios=tuple(
        Scenario(
            f'm={m},eta={eta:g}',
            (lambda m=m, eta=eta: erlang(m, eta)),
            1.0,
            2,
            tuple((_erlang_closed_form(m, eta, k),) for k in range(1, 6)),
        )
        for m, eta in ((2, 3.0), (2, 5.0), (2, 10.0), (3, 5.0), (3, 10.0))
    ),
    rel_tol=1e-12,
)
"""Erlang rows hold the aggregate pi_k e at full precision rather than printed values."""

REFERENCE_TABLES: dict[str, ReferenceTable] = {
    table.name: table
    for table in (HYPEREXP_ETA, HYPEREXP_ALPHA, PH2, EXPONENTIAL, ORDER3, ERLANG)
}


RESPONSE_TIMES: dict[str, dict[tuple[int, float], float]] = {
    'exp:1': {
        (2, 0.5): 1.395977,
        (2, 0.7): 1.768194,
        (2, 0.8): 2.072020,
        (2, 0.9): 2.721852,
        (3, 0.5): 1.395320,
        (3, 0.7): 1.604113,
        (3, 0.8): 1.802933,
        (3, 0.9): 2.209601,
        (5, 0.9): 1.916280,
    },
    'erlang:2,2': {
        (2, 0.5): 1.353783,
        (2, 0.7): 1.599851,
        (2, 0.8): 1.829199,
        (2, 0.9): 2.298470,
        (3, 0.5): 1.325610,
        (3, 0.7): 1.492651,
        (3, 0.8): 1.639987,
        (3, 0.9): 1.941196,
        (5, 0.9): 1.739867,
    },
    'erlang:3,3': {
        (2, 0.5): 1.322544,
        (2, 0.7): 1.539621,
        (2, 0.8): 1.739972,
        (2, 0.9): 2.148191,
        (3, 0.5): 1.298863,
        (3, 0.7): 1.452785,
        (3, 0.8): 1.581663,
        (3, 0.9): 1.834704,
        (5, 0.9): 1.678233,
    },
    'hyperexp3': {
        (2, 0.5): 1.552282,
        (2, 0.7): 1.969132,
        (2, 0.8): 2.360255,
        (2, 0.9): 3.225117,
        (3, 0.5): 1.462128,
        (3, 0.7): 1.723764,
        (3, 0.8): 1.947548,
        (3, 0.9): 2.476718,
        (5, 0.9): 2.066462,
    },
}
"""Published mean response times at n = 100, keyed by DistSpec then (d, lambda)."""

RESPONSE_TIME_LAWS: dict[str, Callable[[], PHDistribution]] = {
    'exp:1': _exp(1.0),
    'erlang:2,2': lambda: erlang(2, 2.0),
    'erlang:3,3': lambda: erlang(3, 3.0),
    'hyperexp3': lambda: named_fixture('hyperexp3'),
}
"""Service law behind each `RESPONSE_TIMES` key."""

RESPONSE_TIME_N = 100
RESPONSE_TIME_REL_TOL = 0.05
"""Relative gap between simulated and published response time that flags a cell."""

RESPONSE_TIME_TABLE = 'response-times'
"""Name under which `RESPONSE_TIMES` is reproduced from the command line."""
