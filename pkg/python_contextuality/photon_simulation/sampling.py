from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, FrozenSet, List, Optional, Sequence

import numpy as np

from probability_table import (
    CountRecord,
    Inequality,
    InvalidArgumentError,
    ProbabilityRow,
    ProbabilityTable,
    TableSource,
)

from .streams import SAMPLING_STREAM, context_stream, worker_count

logger = logging.getLogger(__name__)


class DegenerateRecordError(ValueError):
    """A count record cannot yield probabilities (its total is zero)."""


def _draw_record(
    row: ProbabilityRow, mean_total: float, seed: int, index: int
) -> CountRecord:
    rng = context_stream(seed, SAMPLING_STREAM, index)
    labels = tuple(row.outcomes)
    p = np.clip(np.array([row.outcomes[label] for label in labels]), 0.0, None)
    p = p / p.sum()
    total = int(rng.poisson(mean_total))
    counts = rng.multinomial(total, p)
    logger.debug("context %s: drew %d counts", row.context.label, total)
    return CountRecord(
        context=row.context,
        basis_outcomes=labels,
        counts=tuple(int(c) for c in counts),
    )


def sample_counts(
    table: ProbabilityTable,
    mean_total_per_context: float,
    seed: int,
    workers: Optional[int] = None,
) -> ProbabilityTable:
    """Simulate a type-3 run: Poisson totals, multinomial outcome counts.

    Context ``i`` draws from stream (seed, i), so the result does not depend
    on ``workers``.
    """
    if not mean_total_per_context > 0 or math.isinf(mean_total_per_context):
        raise InvalidArgumentError(
            f"Mean counts per context must be a positive number, "
            f"got {mean_total_per_context}"
        )
    pool_size = worker_count(workers)
    logger.debug(
        "sampling %d contexts with seed %d on %d workers",
        len(table.rows),
        seed,
        pool_size,
    )
    with ThreadPoolExecutor(max_workers=pool_size) as pool:
        futures = [
            pool.submit(_draw_record, row, mean_total_per_context, seed, index)
            for index, row in enumerate(table.rows)
        ]
        records = [future.result() for future in futures]
    theory = {row.context.key: row.theory for row in table.rows}
    return probabilities_from_counts(
        records,
        inequality=table.inequality,
        source=TableSource.simulated(seed),
        theory=theory,
    )


def _infer_inequality(records: Sequence[CountRecord]) -> Inequality:
    sizes = {len(record.context.measurements) for record in records}
    if sizes == {2}:
        return Inequality.C7
    if sizes == {3}:
        return Inequality.C7BAR
    raise InvalidArgumentError(
        f"Cannot tell the inequality from context sizes {sorted(sizes)}"
    )


def row_from_record(
    record: CountRecord, theory: Optional[float] = None
) -> ProbabilityRow:
    total = record.total
    if total <= 0:
        raise DegenerateRecordError(
            f"Record for context {record.context.label} has zero total counts"
        )
    outcomes = {
        label: count / total
        for label, count in zip(record.basis_outcomes, record.counts)
    }
    p = outcomes[str(record.context.target_measurement)]
    error = math.sqrt(p * (1.0 - p) / total)
    return ProbabilityRow(
        context=record.context,
        outcomes=outcomes,
        error=error,
        record=record,
        theory=theory,
    )


def probabilities_from_counts(
    records: Sequence[CountRecord],
    inequality: Optional[Inequality] = None,
    source: Optional[TableSource] = None,
    theory: Optional[Dict[FrozenSet[int], Optional[float]]] = None,
) -> ProbabilityTable:
    """Ratio estimates p = n / N with binomial errors sqrt(p(1-p)/N)."""
    if not records:
        raise InvalidArgumentError("No count records given")
    if inequality is None:
        inequality = _infer_inequality(records)
    theory = theory or {}
    rows: List[ProbabilityRow] = [
        row_from_record(record, theory.get(record.context.key)) for record in records
    ]
    return ProbabilityTable(
        inequality=inequality,
        rows=tuple(rows),
        source=source if source is not None else TableSource.ingested(None),
    )


__all__ = [
    "DegenerateRecordError",
    "probabilities_from_counts",
    "row_from_record",
    "sample_counts",
]
