from .counts_format import records_from_json, records_to_json
from .datasets import (
    PUBLISHED_COLUMNS,
    PublishedColumn,
    inferred_total,
    published_column,
    synthesize_counts,
    synthesized_table,
)
from .noise import NOISE_GRAMMAR, NoiseKind, NoiseModel, apply_noise, parse_noise_spec
from .sampling import (
    DegenerateRecordError,
    probabilities_from_counts,
    row_from_record,
    sample_counts,
)
from .streams import THREADS_ENV, context_stream, worker_count

__all__ = [
    "records_from_json",
    "records_to_json",
    "PUBLISHED_COLUMNS",
    "PublishedColumn",
    "inferred_total",
    "published_column",
    "synthesize_counts",
    "synthesized_table",
    "NOISE_GRAMMAR",
    "NoiseKind",
    "NoiseModel",
    "apply_noise",
    "parse_noise_spec",
    "DegenerateRecordError",
    "probabilities_from_counts",
    "row_from_record",
    "sample_counts",
    "THREADS_ENV",
    "context_stream",
    "worker_count",
]
