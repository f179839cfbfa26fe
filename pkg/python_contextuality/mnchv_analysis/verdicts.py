from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.stats import norm

from probability_table import InvalidArgumentError

DEFAULT_SIGNIFICANCE = 3.0
# |S - bound| at or below this counts as equality, whatever the error.
DEFAULT_BOUND_TOLERANCE = 1e-6


class Verdict(Enum):
    EXCEEDS = "exceeds"
    CONSISTENT = "consistent"
    BELOW = "below"


def significance(
    s: float, bound: float, error: float, tol: float = DEFAULT_BOUND_TOLERANCE
) -> float:
    """One-sided z-score of S against ``bound``, in units of ``error``."""
    if error < 0.0:
        raise InvalidArgumentError(f"Error must be non-negative, got {error}")
    difference = s - bound
    if abs(difference) <= tol:
        return 0.0
    if error == 0.0:
        return math.inf if difference > 0 else -math.inf
    return difference / error


def verdict_for(z: float, threshold: float = DEFAULT_SIGNIFICANCE) -> Verdict:
    if threshold <= 0.0:
        raise InvalidArgumentError(
            f"Significance threshold must be > 0, got {threshold}"
        )
    if z >= threshold:
        return Verdict.EXCEEDS
    if z <= -threshold:
        return Verdict.BELOW
    return Verdict.CONSISTENT


@dataclass(frozen=True)
class BoundVerdict:
    bound: float
    verdict: Verdict
    significance: float

    @property
    def p_value(self) -> float:
        """Probability of a value at least this far above the bound by chance."""
        return float(norm.sf(self.significance))

    @classmethod
    def assess(
        cls,
        s: float,
        bound: float,
        error: float,
        threshold: float = DEFAULT_SIGNIFICANCE,
        tol: float = DEFAULT_BOUND_TOLERANCE,
    ) -> "BoundVerdict":
        z = significance(s, bound, error, tol)
        return cls(bound=bound, verdict=verdict_for(z, threshold), significance=z)


__all__ = [
    "DEFAULT_BOUND_TOLERANCE",
    "DEFAULT_SIGNIFICANCE",
    "BoundVerdict",
    "Verdict",
    "significance",
    "verdict_for",
]
