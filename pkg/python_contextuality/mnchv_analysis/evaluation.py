from __future__ import annotations

import math
from typing import List, Sequence, Tuple

from probability_table import (
    Context,
    Inequality,
    InvalidArgumentError,
    ProbabilityTable,
    standard_contexts,
)


class IncompleteTableError(ValueError):
    """A table lacks some of the contexts its inequality sums over."""

    def __init__(self, inequality: Inequality, missing: Sequence[Context]) -> None:
        labels = ", ".join(c.label for c in missing)
        super().__init__(f"{inequality.value} table is missing contexts: {labels}")
        self.missing: List[Context] = list(missing)


def require_complete(table: ProbabilityTable, inequality: Inequality) -> None:
    if table.inequality is not inequality:
        raise InvalidArgumentError(
            f"Expected a {inequality.value} table, got {table.inequality.value}"
        )
    missing = table.missing_contexts()
    if missing:
        raise IncompleteTableError(table.inequality, missing)
    for context in standard_contexts(inequality):
        found = table.row_for(context).context
        if found.target_measurement != context.target_measurement:
            raise InvalidArgumentError(
                f"Context {found.label} targets measurement "
                f"{found.target_measurement} with pattern {found.target_string}, "
                f"expected measurement {context.target_measurement}"
            )


def evaluate_S(table: ProbabilityTable) -> Tuple[float, float]:
    """Sum of the target probabilities and its error for independent contexts."""
    if table.inequality is Inequality.PRODUCT:
        raise InvalidArgumentError("Product values come from combine_product")
    require_complete(table, table.inequality)
    rows = [table.row_for(c) for c in standard_contexts(table.inequality)]
    s = 0.0
    variance = 0.0
    for row in rows:
        s += row.probability
        variance += row.variance
    return s, math.sqrt(variance)


__all__ = ["IncompleteTableError", "evaluate_S", "require_complete"]
