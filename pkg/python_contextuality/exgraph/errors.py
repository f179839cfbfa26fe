from __future__ import annotations

from probability_table import InvalidArgumentError


class SizeLimitError(ValueError):
    """Raised when an exact search would exceed its configured vertex cap."""

    def __init__(self, operation: str, n: int, cap: int) -> None:
        super().__init__(
            f"{operation}: graph has {n} vertices, above the exact-search cap of {cap}"
        )
        self.n = n
        self.cap = cap


class ConvergenceError(RuntimeError):
    """The SDP solver did not reach its tolerances within the iteration budget."""

    def __init__(self, primal: float, dual: float, iterations: int) -> None:
        super().__init__(
            f"Lovasz SDP did not converge after {iterations} iterations "
            f"(primal {primal:.10g}, dual {dual:.10g})"
        )
        self.primal = primal
        self.dual = dual
        self.iterations = iterations


__all__ = ["ConvergenceError", "InvalidArgumentError", "SizeLimitError"]
