from .probabilities import (
    IncompatibleContextError,
    born_distribution,
    context_basis,
    context_probability,
    ideal_row,
    ideal_table,
    measurement_basis,
)
from .realization import (
    ORTHOGONALITY_TOL,
    UNIT_NORM_TOL,
    VectorRealization,
    build_c7_realization,
    build_c7bar_realization,
    build_realization,
    orthogonality_graph,
    realization_graph,
)

__all__ = [
    "IncompatibleContextError",
    "born_distribution",
    "context_basis",
    "context_probability",
    "ideal_row",
    "ideal_table",
    "measurement_basis",
    "ORTHOGONALITY_TOL",
    "UNIT_NORM_TOL",
    "VectorRealization",
    "build_c7_realization",
    "build_c7bar_realization",
    "build_realization",
    "orthogonality_graph",
    "realization_graph",
]
