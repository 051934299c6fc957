"""Custom exceptions raised by the supermarket-ph toolkit."""

from typing import Any


class SupermarketError(Exception):
    """Base exception for supermarket-ph errors."""


class InvalidDistributionError(SupermarketError):
    """Exception raised for a phase-type representation that fails validation."""

    def __init__(self, message: str):
        """Initializes the InvalidDistributionError.

        Args:
            message: A descriptive error message.
        """
        self.message = message
        super().__init__(f'Invalid distribution: {message}')


class ReducibleRepresentationError(InvalidDistributionError):
    """Exception raised when T + T0*alpha is reducible on the reachable phases."""


class InfeasibleMomentsError(SupermarketError):
    """Exception raised when a moment triple admits no order-2 PH fit."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        """Initializes the InfeasibleMomentsError.

        Args:
            message: A descriptive error message.
            diagnostics: Intermediate quantities of the fit (m1, m2, m3, a, b, c, d).
        """
        self.message = message
        self.diagnostics = diagnostics or {}
        super().__init__(f'Infeasible moments: {message}')


class UnstableModelError(SupermarketError):
    """Exception raised when an analytic result is requested for rho >= 1."""

    def __init__(self, rho: float):
        """Initializes the UnstableModelError.

        Args:
            rho: The offered load per server.
        """
        self.rho = rho
        self.message = f'offered load rho={rho:.6g} is not below 1'
        super().__init__(f'Unstable model: {self.message}')


class NumericalFailureError(SupermarketError):
    """Exception raised when an integration blows up or fails to converge."""

    def __init__(self, message: str):
        """Initializes the NumericalFailureError.

        Args:
            message: A descriptive error message.
        """
        self.message = message
        super().__init__(f'Numerical failure: {message}')


class ShapeMismatchError(SupermarketError):
    """Exception raised when two states or a state and a table disagree in shape."""

    def __init__(self, expected: tuple[int, ...], actual: tuple[int, ...]):
        """Initializes the ShapeMismatchError.

        Args:
            expected: The shape required by the operation.
            actual: The shape that was supplied.
        """
        self.expected = expected
        self.actual = actual
        self.message = f'expected shape {expected}, got {actual}'
        super().__init__(f'Shape mismatch: {self.message}')
