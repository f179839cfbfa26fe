from __future__ import annotations

from typing import Dict, List, Sequence

import numpy as np

from probability_table import (
    Context,
    Inequality,
    InvalidArgumentError,
    ProbabilityRow,
    ProbabilityTable,
    TableSource,
    outcome_labels,
    standard_contexts,
)

from .realization import ORTHOGONALITY_TOL, VectorRealization

SHORTCUT_TOL = 1e-12
# Candidate completion vectors below this residual norm are treated as dependent.
_DEPENDENCE_TOL = 1e-8


class IncompatibleContextError(ValueError):
    """A context contains measurements whose projectors do not commute."""


def _check_compatible(r: VectorRealization, c: Context) -> None:
    for a_idx, a in enumerate(c.measurements):
        for b in c.measurements[a_idx + 1 :]:
            if not r.graph.adjacent(a - 1, b - 1):
                raise IncompatibleContextError(
                    f"Measurements {a} and {b} of context {c.label} are not exclusive"
                )
            inner = float(np.dot(r.vector(a), r.vector(b)))
            if abs(inner) > ORTHOGONALITY_TOL:
                raise IncompatibleContextError(
                    f"Projectors {a} and {b} of context {c.label} do not commute "
                    f"(<u|v> = {inner:.3e})"
                )


def context_probability(r: VectorRealization, c: Context) -> float:
    """<state| prod_m Pi_m |state> for the context's target outcome bits.

    Pi_m is the projector of m for a 1 bit and its complement for a 0 bit.
    """
    _check_compatible(r, c)
    identity = np.eye(r.dim)
    operator = identity
    for m, bit in zip(c.measurements, c.target):
        vec = r.vector(m)
        projector = np.outer(vec, vec)
        operator = operator @ (projector if bit else identity - projector)
    value = float(r.state @ operator @ r.state)

    ones = [m for m, bit in zip(c.measurements, c.target) if bit]
    if len(ones) == 1:
        shortcut = r.overlap(ones[0])
    elif not ones:
        shortcut = 1.0 - sum(r.overlap(m) for m in c.measurements)
    else:
        # Orthogonal projectors: two clicks at once never happen.
        shortcut = 0.0
    if abs(value - shortcut) > SHORTCUT_TOL:
        raise InvalidArgumentError(
            f"Context {c.label}: operator form {value!r} != rank-1 form {shortcut!r}"
        )
    return value


def measurement_basis(vectors: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal basis (rows) starting with ``vectors``, completed by Gram-Schmidt.

    The completion draws on the standard basis in order, so it is deterministic.
    """
    basis: List[np.ndarray] = []
    candidates = list(vectors) + [row for row in np.eye(dim)]
    for idx, candidate in enumerate(candidates):
        residual = np.array(candidate, dtype=float)
        for b in basis:
            residual = residual - np.dot(b, residual) * b
        norm = float(np.linalg.norm(residual))
        if norm < _DEPENDENCE_TOL:
            if idx < len(vectors):
                raise IncompatibleContextError("Context vectors are linearly dependent")
            continue
        basis.append(residual / norm)
        if len(basis) == dim:
            break
    return np.array(basis)


def born_distribution(
    basis: np.ndarray, state: np.ndarray, labels: Sequence[str]
) -> Dict[str, float]:
    probabilities = (basis @ state) ** 2
    probabilities = probabilities / probabilities.sum()
    return {label: float(p) for label, p in zip(labels, probabilities)}


def context_basis(r: VectorRealization, c: Context) -> np.ndarray:
    _check_compatible(r, c)
    return measurement_basis([r.vector(m) for m in c.measurements], r.dim)


def ideal_row(r: VectorRealization, c: Context) -> ProbabilityRow:
    labels = outcome_labels(c, r.dim)
    basis = context_basis(r, c)
    # Click probabilities come from the measurement's own vector, so a
    # measurement has bit-identical marginals in every context it belongs to.
    outcomes: Dict[str, float] = {str(m): r.overlap(m) for m in c.measurements}
    size = len(c.measurements)
    for label, vec in zip(labels[size:], basis[size:]):
        outcomes[label] = float(np.dot(vec, r.state) ** 2)
    context_probability(r, c)
    target = outcomes[str(c.target_measurement)]
    return ProbabilityRow(context=c, outcomes=outcomes, theory=target)


def ideal_table(r: VectorRealization, inequality: Inequality) -> ProbabilityTable:
    """Quantum predictions for every context of ``inequality``."""
    if inequality is Inequality.PRODUCT or not r.matches(inequality):
        raise InvalidArgumentError(
            f"Realization of dimension {r.dim} does not implement {inequality.value}"
        )
    rows = tuple(ideal_row(r, c) for c in standard_contexts(inequality))
    return ProbabilityTable(
        inequality=inequality, rows=rows, source=TableSource.ideal()
    )


__all__ = [
    "IncompatibleContextError",
    "born_distribution",
    "context_basis",
    "context_probability",
    "ideal_row",
    "ideal_table",
    "measurement_basis",
]
