"""Mean-field state vectors S_1..S_K and trajectories.

S_k holds, per service phase, the fraction of servers with at least k
customers whose customer in service is in that phase. S_0 = 1 is implicit.
"""

import logging

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from supermarket.analysis.fixed_point import FixedPointTable, fixed_point_table
from supermarket.phase_type.distribution import FloatArray, check_phase_vector
from supermarket.types import ModelParams, StateDocument
from supermarket.utils.constants import MEAN_FIELD_TAIL_EPS, ORDERING_SLACK
from supermarket.utils.errors import ShapeMismatchError


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MeanFieldState:
    """The truncated fraction vectors at one instant."""

    levels: FloatArray
    """K x m array; row k-1 holds S_k."""
    t: float = 0.0
    """Time of the snapshot."""

    @property
    def K(self) -> int:  # noqa: N802
        return self.levels.shape[0]

    @property
    def order(self) -> int:
        return self.levels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.K, self.order)

    @property
    def tails(self) -> FloatArray:
        """S_k e for k = 1..K."""
        return self.levels.sum(axis=1)

    def to_document(self) -> StateDocument:
        return StateDocument(levels=self.levels.tolist(), t=self.t)


@dataclass(eq=False)
class Trajectory:
    """Time-ordered snapshots of one integration."""

    params: ModelParams
    samples: list[MeanFieldState] = field(default_factory=list)

    def append(self, state: MeanFieldState) -> None:
        """Adds a snapshot; times must increase strictly."""
        if self.samples and state.t <= self.samples[-1].t:
            raise ValueError(
                f'trajectory times must increase, got {state.t} after {self.samples[-1].t}'
            )
        self.samples.append(state)

    @property
    def times(self) -> FloatArray:
        return np.array([sample.t for sample in self.samples])

    @property
    def final(self) -> MeanFieldState:
        return self.samples[-1]

    def __len__(self) -> int:
        return len(self.samples)


def default_depth(params: ModelParams) -> int:
    """Truncation depth K: the first level whose fixed-point tail is below MEAN_FIELD_TAIL_EPS."""
    return fixed_point_table(params, tail_eps=MEAN_FIELD_TAIL_EPS).K


def empty_state(params: ModelParams, K: int | None = None) -> MeanFieldState:  # noqa: N803
    """The empty system: S_k = 0 for every k >= 1."""
    depth = default_depth(params) if K is None else K
    if depth < 1:
        raise ValueError(f'truncation depth must be >= 1, got {depth}')
    return MeanFieldState(levels=np.zeros((depth, params.ph.order)))


def state_from_table(table: FixedPointTable, K: int | None = None) -> MeanFieldState:  # noqa: N803
    """The closed-form fixed point as a state, padded with zero levels or cut to depth K."""
    depth = table.K if K is None else K
    levels = np.zeros((depth, table.order))
    rows = min(depth, table.K)
    levels[:rows] = table.pi[:rows]
    return MeanFieldState(levels=levels)


def state_from_document(source: Path | str | StateDocument, params: ModelParams) -> MeanFieldState:
    """Loads a state from a JSON document path or a parsed `StateDocument`.

    Raises:
        ShapeMismatchError: If the level width differs from the PH order.
        ValueError: If the levels violate the state invariants.
    """
    if isinstance(source, StateDocument):
        document = source
    else:
        document = StateDocument.model_validate_json(Path(source).read_text())
    levels = np.asarray(document.levels, dtype=float)
    if levels.ndim != 2 or levels.shape[1] != params.ph.order:
        raise ShapeMismatchError((len(document.levels), params.ph.order), levels.shape)
    state = MeanFieldState(levels=levels, t=document.t)
    check_state_invariants(state)
    return state


def check_state_invariants(state: MeanFieldState, slack: float = ORDERING_SLACK) -> None:
    """Checks that each S_k is a phase vector (S_k >= 0, S_k e <= 1) and S_k >= S_{k+1}.

    Raises:
        ValueError: On the first violated invariant.
    """
    levels = state.levels
    if not np.all(np.isfinite(levels)):
        raise ValueError('state has non-finite entries')
    for k, level in enumerate(levels, start=1):
        try:
            check_phase_vector(level, slack)
        except ValueError as e:
            raise ValueError(f'S_{k} is not a phase vector: {e}') from e
    if state.K > 1 and np.any(levels[1:] > levels[:-1] + slack):
        level = int(np.argmax(np.any(levels[1:] > levels[:-1] + slack, axis=1))) + 2
        raise ValueError(f'S_{level} exceeds S_{level - 1} in some phase')


def _require_same_shape(a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if a != b:
        raise ShapeMismatchError(a, b)


def ordering_holds(a: MeanFieldState, b: MeanFieldState, slack: float = ORDERING_SLACK) -> bool:
    """True when a <= b componentwise at every level, within `slack`."""
    _require_same_shape(a.shape, b.shape)
    return bool(np.all(a.levels <= b.levels + slack))


def count_ordering_violations(
    state: MeanFieldState, table: FixedPointTable, slack: float = ORDERING_SLACK
) -> int:
    """Number of levels k where S_k is not below pi_k componentwise."""
    _require_same_shape(state.shape, table.pi.shape)
    return int(np.sum(np.any(state.levels > table.pi + slack, axis=1)))
