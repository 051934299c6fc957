import pytest

from supermarket.utils.errors import (
    InfeasibleMomentsError,
    InvalidDistributionError,
    NumericalFailureError,
    ReducibleRepresentationError,
    ShapeMismatchError,
    SupermarketError,
    UnstableModelError,
)


class TestInvalidDistributionError:
    """Test cases for InvalidDistributionError."""

    def test_message(self):
        error = InvalidDistributionError('alpha must sum to one')
        assert error.message == 'alpha must sum to one'
        assert str(error) == 'Invalid distribution: alpha must sum to one'

    def test_inheritance(self):
        assert isinstance(InvalidDistributionError('x'), SupermarketError)
        assert isinstance(ReducibleRepresentationError('x'), InvalidDistributionError)


class TestInfeasibleMomentsError:
    """Test cases for InfeasibleMomentsError."""

    def test_diagnostics_default_to_empty(self):
        error = InfeasibleMomentsError('a < 0')
        assert error.diagnostics == {}
        assert str(error) == 'Infeasible moments: a < 0'

    def test_diagnostics_are_kept(self):
        error = InfeasibleMomentsError('a < 0', {'a': -1.0})
        assert error.diagnostics == {'a': -1.0}


class TestUnstableModelError:
    """Test cases for UnstableModelError."""

    def test_rho_in_message(self):
        error = UnstableModelError(1.25)
        assert error.rho == 1.25
        assert error.message == 'offered load rho=1.25 is not below 1'
        assert isinstance(error, SupermarketError)


class TestShapeMismatchError:
    """Test cases for ShapeMismatchError."""

    def test_shapes(self):
        error = ShapeMismatchError((5, 2), (4, 2))
        assert error.expected == (5, 2)
        assert error.actual == (4, 2)
        assert 'expected shape (5, 2), got (4, 2)' in str(error)


def test_numerical_failure_error():
    error = NumericalFailureError('state became non-finite')
    assert error.message == 'state became non-finite'
    with pytest.raises(SupermarketError):
        raise error
