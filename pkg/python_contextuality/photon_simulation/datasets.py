"""Published experimental columns and count records reconstructed from them.

Only per-context target probabilities and their errors were published; the
count totals behind them were not. ``synthesize_counts`` infers each total from
the binomial error, N = p(1 - p) / error**2, and every table built that way is
marked as inferred.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from probability_table import (
    CYCLE_LENGTH,
    CountRecord,
    Inequality,
    InvalidArgumentError,
    ProbabilityTable,
    TableSource,
    completion_labels,
    standard_contexts,
)

from .sampling import probabilities_from_counts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PublishedColumn:
    name: str
    inequality: Inequality
    site: str
    encoding: str
    probabilities: Tuple[float, ...]
    errors: Tuple[float, ...]
    s_value: float
    s_error: float
    epsilon: float

    def __post_init__(self) -> None:
        if len(self.probabilities) != CYCLE_LENGTH or len(self.errors) != CYCLE_LENGTH:
            raise InvalidArgumentError(
                f"Dataset {self.name} must list {CYCLE_LENGTH} rows"
            )


PUBLISHED_COLUMNS: Dict[str, PublishedColumn] = {
    column.name: column
    for column in (
        PublishedColumn(
            name="chile-c7",
            inequality=Inequality.C7,
            site="Chile",
            encoding="linear transverse momentum",
            probabilities=(0.488, 0.455, 0.486, 0.467, 0.478, 0.476, 0.462),
            errors=(0.003,) * CYCLE_LENGTH,
            s_value=3.313,
            s_error=0.003,
            epsilon=0.0089,
        ),
        PublishedColumn(
            name="italy-c7",
            inequality=Inequality.C7,
            site="Italy",
            encoding="orbital angular momentum",
            probabilities=(0.462, 0.479, 0.458, 0.482, 0.449, 0.488, 0.513),
            errors=(0.007, 0.007, 0.008, 0.008, 0.011, 0.011, 0.008),
            s_value=3.332,
            s_error=0.011,
            epsilon=0.08,
        ),
        PublishedColumn(
            name="chile-c7bar",
            inequality=Inequality.C7BAR,
            site="Chile",
            encoding="linear transverse momentum",
            probabilities=(0.296, 0.306, 0.308, 0.295, 0.304, 0.309, 0.291),
            errors=(0.001,) * CYCLE_LENGTH,
            s_value=2.108,
            s_error=0.003,
            epsilon=0.041,
        ),
        PublishedColumn(
            name="italy-c7bar",
            inequality=Inequality.C7BAR,
            site="Italy",
            encoding="orbital angular momentum",
            probabilities=(0.317, 0.330, 0.315, 0.281, 0.261, 0.286, 0.327),
            errors=(0.006, 0.010, 0.006, 0.010, 0.006, 0.009, 0.009),
            s_value=2.118,
            s_error=0.011,
            epsilon=0.095,
        ),
    )
}


def published_column(name: str) -> PublishedColumn:
    try:
        return PUBLISHED_COLUMNS[name.lower()]
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown dataset '{name}'. Expected one of: "
            + ", ".join(sorted(PUBLISHED_COLUMNS))
        )


def inferred_total(probability: float, error: float) -> int:
    if error <= 0.0 or not 0.0 < probability < 1.0:
        raise InvalidArgumentError(
            f"Cannot infer a total from p={probability}, error={error}"
        )
    return int(round(probability * (1.0 - probability) / (error * error)))


def synthesize_counts(column: PublishedColumn) -> List[CountRecord]:
    """One count record per published row.

    Row i targets measurement i. The other measurements of a context click with
    the probability published for the row they target, scaled down when they
    would not fit beside the target clicks, so marginals only differ across
    contexts by rounding and that scaling.
    """
    click = {m: column.probabilities[m - 1] for m in range(1, CYCLE_LENGTH + 1)}
    records: List[CountRecord] = []
    for context, p, error in zip(
        standard_contexts(column.inequality), column.probabilities, column.errors
    ):
        total = inferred_total(p, error)
        target = context.target_measurement
        target_clicks = int(round(p * total))
        room = total - target_clicks
        others = {
            m: int(round(click[m] * total))
            for m in context.measurements
            if m != target
        }
        wanted = sum(others.values())
        if wanted > room:
            others = {m: n * room // wanted for m, n in others.items()}
            logger.debug(
                "%s %s: scaled %d clicks into %d",
                column.name,
                context.label,
                wanted,
                room,
            )
        clicks = [
            target_clicks if m == target else others[m] for m in context.measurements
        ]
        rest = total - sum(clicks)
        rest_labels = completion_labels(context, column.inequality.dimension)
        share, extra = divmod(rest, len(rest_labels))
        rest_counts = [share + (1 if i < extra else 0) for i in range(len(rest_labels))]
        records.append(
            CountRecord(
                context=context,
                basis_outcomes=tuple(str(m) for m in context.measurements)
                + rest_labels,
                counts=tuple(clicks + rest_counts),
            )
        )
        logger.debug("%s %s: inferred total %d", column.name, context.label, total)
    return records


def synthesized_table(column: PublishedColumn) -> ProbabilityTable:
    return probabilities_from_counts(
        synthesize_counts(column),
        inequality=column.inequality,
        source=TableSource.ingested(
            None, inferred=True, quoted_s_error=column.s_error
        ),
    )


__all__ = [
    "PUBLISHED_COLUMNS",
    "PublishedColumn",
    "inferred_total",
    "published_column",
    "synthesize_counts",
    "synthesized_table",
]
