"""Three-moment matching with the canonical order-2 phase-type law.

The canonical PH(2) has alpha = (eta, 1 - eta) and T = [[-xi1, xi1], [0, -xi2]]
with 0 <= eta <= 1 and 0 < xi1 <= xi2. A moment triple is first moved into
the feasible region (rules a1..a4), then matched exactly.
"""

import logging
import math

from supermarket.phase_type.constructors import coxian2
from supermarket.types import ClampRule, FitOutcome, MomentTriple
from supermarket.utils.constants import A4_BOUNDARY_MARGIN
from supermarket.utils.errors import InfeasibleMomentsError
from supermarket.utils.telemetry import trace_function


logger = logging.getLogger(__name__)

C_ZERO_REL_TOL = 1e-12
A_NEGATIVE_REL_TOL = 1e-12
SCV_FLOOR_SLACK = 1e-12
"""m2 = 1.5 m1^2 can round to c_X^2 just under 0.5."""


def scv(m1: float, m2: float) -> float:
    """Squared coefficient of variation m2 / m1^2 - 1."""
    return m2 / m1**2 - 1.0


def m3_bounds(m1: float, m2: float) -> tuple[float, float]:
    """Returns the feasible (lower, upper) band of m3 for given m1, m2.

    For c_X^2 > 1 the lower bound is strict and the upper bound is infinite.

    Raises:
        InfeasibleMomentsError: If m2 < 1.5 m1^2, where no band exists.
    """
    cx2 = scv(m1, m2)
    if cx2 > 1.0:
        return 1.5 * m1**3 * (1.0 + cx2) ** 2, math.inf
    if abs(cx2 - 0.5) <= SCV_FLOOR_SLACK:
        # Erlang(2) point: the band collapses to m3 = 3 m1^3.
        return 3.0 * m1**3, 3.0 * m1**3
    if cx2 > 0.5:
        lower = 3.0 * m1**3 * (3.0 * cx2 - 1.0 + math.sqrt(2.0) * (1.0 - cx2) ** 1.5)
        return lower, 6.0 * m1**3 * cx2
    raise InfeasibleMomentsError(
        f'c_X^2 = {cx2:.6g} is below 0.5', {'m1': m1, 'm2': m2}
    )


def feasibility_clamp(raw: MomentTriple) -> tuple[MomentTriple, list[ClampRule]]:
    """Moves a moment triple into the PH(2) feasible region.

    Rules apply in order: a1 repairs the variance, c_X^2 is recomputed, then
    at most one of a2 / a3 / a4 repairs m3.

    Args:
        raw: The triple to repair; all moments must be positive.

    Returns:
        The repaired triple and the rules that fired.

    Raises:
        InfeasibleMomentsError: If a moment is not positive.
    """
    m1, m2, m3 = raw.as_tuple()
    for name, value in (('m1', m1), ('m2', m2), ('m3', m3)):
        if not (math.isfinite(value) and value > 0):
            raise InfeasibleMomentsError(
                f'{name} must be positive and finite, got {value}', raw.model_dump()
            )

    flags: list[ClampRule] = []
    if m2 < 1.5 * m1**2:
        m2 = 1.5 * m1**2
        flags.append(ClampRule.a1)
    cx2 = scv(m1, m2)
    lower, upper = m3_bounds(m1, m2)
    if cx2 <= 1.0:
        if m3 < lower:
            m3 = lower
            flags.append(ClampRule.a2)
        elif m3 > upper:
            m3 = upper
            flags.append(ClampRule.a3)
    elif m3 <= lower * (1.0 + A4_BOUNDARY_MARGIN / 2):
        # The bound itself belongs to a law with an atom at zero.
        m3 = lower * (1.0 + A4_BOUNDARY_MARGIN)
        flags.append(ClampRule.a4)

    if flags:
        logger.warning(
            'Moments %s clamped to (%s, %s, %s) by %s',
            raw.as_tuple(),
            m1,
            m2,
            m3,
            [flag.value for flag in flags],
        )
    return MomentTriple(m1=m1, m2=m2, m3=m3), flags


@trace_function
def fit_ph2(clamped: MomentTriple) -> FitOutcome:
    """Matches a feasible moment triple with the canonical PH(2).

    With c = 3 m2^2 - 2 m1 m3, d = 2 m1^2 - m2, b = 3 m1 m2 - m3 and
    a = b^2 - 6 c d, the sign of c selects the branch. The roots b -/+ sqrt(a)
    are evaluated as 6 c d / (b +/- sqrt(a)) wherever the direct form cancels.

    Raises:
        InfeasibleMomentsError: If a < 0 or the triple sits on the unattainable
            c_X^2 > 1 boundary.
    """
    m1, m2, m3 = clamped.as_tuple()
    c = 3.0 * m2**2 - 2.0 * m1 * m3
    d = 2.0 * m1**2 - m2
    b = 3.0 * m1 * m2 - m3
    a = b * b - 6.0 * c * d
    diagnostics = {'m1': m1, 'm2': m2, 'm3': m3, 'a': a, 'b': b, 'c': c, 'd': d}
    logger.debug('PH(2) fit quantities %s', diagnostics)

    if a < 0:
        if a < -A_NEGATIVE_REL_TOL * b * b:
            raise InfeasibleMomentsError('a = b^2 - 6cd is negative', diagnostics)
        a = 0.0
    root = math.sqrt(a)

    if abs(c) <= C_ZERO_REL_TOL * max(3.0 * m2**2, 2.0 * m1 * m3):
        if abs(scv(m1, m2) - 1.0) > 1e-9:
            raise InfeasibleMomentsError(
                'c = 0 with c_X^2 != 1 is only attained with an atom at zero', diagnostics
            )
        eta = 0.0
        xi2 = 1.0 / m1
        xi1 = xi2
    else:
        plus, minus = _stable_roots(b, root, c * d)
        if c > 0:
            eta = (6.0 * m1 * d - minus) / plus
            xi1 = minus / c
            xi2 = plus / c
        else:
            eta = (plus - 6.0 * m1 * d) / -minus
            xi1 = plus / c
            xi2 = minus / c

    eta = min(max(eta, 0.0), 1.0)
    if not (xi1 > 0 and xi2 > 0 and math.isfinite(xi1) and math.isfinite(xi2)):
        raise InfeasibleMomentsError(
            f'fit produced non-positive rates xi1={xi1}, xi2={xi2}', diagnostics
        )
    xi1 = min(xi1, xi2)
    distribution = coxian2(eta, xi1, xi2)
    return FitOutcome(
        raw=clamped,
        clamped=clamped,
        eta=eta,
        xi1=xi1,
        xi2=xi2,
        distribution=distribution,
    )


def _stable_roots(b: float, root: float, cd: float) -> tuple[float, float]:
    """Returns (b + root, b - root) using (b + root)(b - root) = 6 c d."""
    if b >= 0:
        plus = b + root
        minus = 6.0 * cd / plus if plus else 0.0
    else:
        minus = b - root
        plus = 6.0 * cd / minus
    return plus, minus


def verify_fit(outcome: FitOutcome) -> float:
    """Returns the largest relative error between fitted and clamped moments."""
    ph = outcome.distribution
    return max(
        abs(ph.moment(n) - target) / target
        for n, target in enumerate(outcome.clamped.as_tuple(), start=1)
    )


def fit_moments(raw: MomentTriple) -> FitOutcome:
    """Clamps `raw` into the feasible region and fits the canonical PH(2)."""
    clamped, flags = feasibility_clamp(raw)
    outcome = fit_ph2(clamped).model_copy(update={'raw': raw, 'clamp_flags': flags})
    return outcome.model_copy(update={'max_relative_error': verify_fit(outcome)})
