from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Union

import numpy as np
from lark import Lark, Transformer
from lark.exceptions import LarkError, VisitError

from probability_table import (
    InvalidArgumentError,
    ProbabilityRow,
    ProbabilityTable,
    normalized,
    outcome_labels,
)
from quantum_realization import VectorRealization, born_distribution, measurement_basis

from .streams import JITTER_STREAM, context_stream

logger = logging.getLogger(__name__)

# Noise specs as accepted by the --noise flag, e.g.
#   none
#   depolarizing:0.98
#   jitter:0.02+depolarizing:0.99
#   bias:(1,2)/1=0.01;(2,3)/rest=-0.004
NOISE_GRAMMAR = r"""
start: model ("+" model)*

model: "none" -> none
     | "depolarizing" ":" NUMBER -> depolarizing
     | "jitter" ":" NUMBER -> jitter
     | "bias" ":" bias_entry (";" bias_entry)* -> bias

bias_entry: context "/" outcome "=" SIGNED_NUMBER
context: "(" INT ("," INT)* ")"
outcome: INT | REST

REST: /rest[0-9]*/

%import common.INT
%import common.NUMBER
%import common.SIGNED_NUMBER
%import common.WS
%ignore WS
"""

_THREAD_LOCAL = threading.local()


def _get_parser() -> Lark:
    parser = getattr(_THREAD_LOCAL, "parser", None)
    if parser is None:
        parser = Lark(NOISE_GRAMMAR, start="start", parser="lalr")
        _THREAD_LOCAL.parser = parser
    return parser


class NoiseKind(Enum):
    NONE = "none"
    DEPOLARIZING = "depolarizing"
    VECTOR_JITTER = "jitter"
    ADDITIVE_BIAS = "bias"


BiasMap = Mapping[FrozenSet[int], Mapping[str, float]]


@dataclass(frozen=True)
class NoiseModel:
    """One perturbation layer; carries parameters only, never a seed."""

    kind: NoiseKind = NoiseKind.NONE
    visibility: float = 1.0
    sigma: float = 0.0
    bias: BiasMap = dataclass_field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidArgumentError(
                f"Visibility must lie in [0, 1], got {self.visibility}"
            )
        if not self.sigma >= 0.0 or math.isinf(self.sigma):
            raise InvalidArgumentError(f"Jitter sigma must be >= 0, got {self.sigma}")

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls()

    @classmethod
    def depolarizing(cls, visibility: float) -> "NoiseModel":
        return cls(kind=NoiseKind.DEPOLARIZING, visibility=visibility)

    @classmethod
    def vector_jitter(cls, sigma: float) -> "NoiseModel":
        return cls(kind=NoiseKind.VECTOR_JITTER, sigma=sigma)

    @classmethod
    def additive_bias(cls, bias: BiasMap) -> "NoiseModel":
        return cls(kind=NoiseKind.ADDITIVE_BIAS, bias=bias)

    def describe(self) -> str:
        if self.kind is NoiseKind.DEPOLARIZING:
            return f"depolarizing:{self.visibility!r}"
        if self.kind is NoiseKind.VECTOR_JITTER:
            return f"jitter:{self.sigma!r}"
        if self.kind is NoiseKind.ADDITIVE_BIAS:
            entries = []
            for key in sorted(self.bias, key=sorted):
                context = "(" + ",".join(str(m) for m in sorted(key)) + ")"
                for outcome, delta in self.bias[key].items():
                    entries.append(f"{context}/{outcome}={delta!r}")
            return "bias:" + ";".join(entries)
        return "none"


class _NoiseTransformer(Transformer):
    def start(self, items):
        return list(items)

    def none(self, _items):
        return NoiseModel.none()

    def depolarizing(self, items):
        (value,) = items
        return NoiseModel.depolarizing(float(value))

    def jitter(self, items):
        (value,) = items
        return NoiseModel.vector_jitter(float(value))

    def bias(self, entries):
        table: Dict[FrozenSet[int], Dict[str, float]] = {}
        for key, outcome, delta in entries:
            per_context = table.setdefault(key, {})
            per_context[outcome] = per_context.get(outcome, 0.0) + delta
        return NoiseModel.additive_bias(table)

    def bias_entry(self, items):
        context, outcome, delta = items
        return frozenset(context), outcome, float(delta)

    def context(self, items):
        return tuple(int(token) for token in items)

    def outcome(self, items):
        (token,) = items
        return str(token)


def parse_noise_spec(text: str) -> List[NoiseModel]:
    """Parse a --noise value into the models it chains, in application order."""
    try:
        tree = _get_parser().parse(text.strip())
    except LarkError as exc:
        raise InvalidArgumentError(f"Invalid noise spec {text!r}: {exc}")
    try:
        return _NoiseTransformer().transform(tree)
    except VisitError as exc:
        # Parameter checks in NoiseModel fail inside the transformer.
        raise exc.orig_exc


# application -----------------------------------------------------------------


def _depolarize(row: ProbabilityRow, visibility: float) -> ProbabilityRow:
    d = len(row.outcomes)
    outcomes = {
        label: visibility * p + (1.0 - visibility) / d
        for label, p in row.outcomes.items()
    }
    return ProbabilityRow(context=row.context, outcomes=outcomes, theory=row.theory)


def _bias(row: ProbabilityRow, deltas: Mapping[str, float]) -> ProbabilityRow:
    outcomes = dict(row.outcomes)
    for label, delta in deltas.items():
        if label not in outcomes:
            raise InvalidArgumentError(
                f"Bias names outcome '{label}' absent from context {row.context.label}"
            )
        outcomes[label] = max(0.0, outcomes[label] + delta)
    return ProbabilityRow(
        context=row.context, outcomes=normalized(outcomes), theory=row.theory
    )


def _rotate(vec: np.ndarray, angle: float, rng: np.random.Generator) -> np.ndarray:
    """Rotate ``vec`` by ``angle`` towards a uniformly random orthogonal direction."""
    direction = rng.standard_normal(vec.shape[0])
    direction = direction - np.dot(direction, vec) * vec
    direction = direction / np.linalg.norm(direction)
    return math.cos(angle) * vec + math.sin(angle) * direction


def _symmetric_orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Closest orthonormal set to the rows of ``vectors`` (Lowdin)."""
    gram = vectors @ vectors.T
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    inverse_root = eigenvectors @ np.diag(eigenvalues**-0.5) @ eigenvectors.T
    return inverse_root @ vectors


def _jitter(
    table: ProbabilityTable,
    sigma: float,
    realization: VectorRealization,
    seed: int,
) -> ProbabilityTable:
    rows = []
    for index, row in enumerate(table.rows):
        rng = context_stream(seed, JITTER_STREAM, index)
        drifted = np.array(
            [
                _rotate(realization.vector(m), rng.normal(0.0, sigma), rng)
                for m in row.context.measurements
            ]
        )
        basis = measurement_basis(
            list(_symmetric_orthonormalize(drifted)), realization.dim
        )
        labels = outcome_labels(row.context, realization.dim)
        outcomes = born_distribution(basis, realization.state, labels)
        rows.append(
            ProbabilityRow(context=row.context, outcomes=outcomes, theory=row.theory)
        )
    return table.with_rows(rows)


def apply_noise(
    table: ProbabilityTable,
    model: Union[NoiseModel, Sequence[NoiseModel]],
    realization: Optional[VectorRealization] = None,
    seed: int = 0,
) -> ProbabilityTable:
    """Perturb the per-context outcome distributions of ``table``.

    A sequence of models is applied left to right. ``seed`` only feeds the
    jitter streams; the other models are deterministic.
    """
    if not isinstance(model, NoiseModel):
        for layer in model:
            table = apply_noise(table, layer, realization, seed)
        return table

    logger.debug(
        "applying noise %s to %s table", model.describe(), table.inequality.value
    )
    if model.kind is NoiseKind.NONE:
        return table
    if model.kind is NoiseKind.DEPOLARIZING:
        if model.visibility == 1.0:
            return table
        return table.with_rows(_depolarize(row, model.visibility) for row in table.rows)
    if model.kind is NoiseKind.ADDITIVE_BIAS:
        known = {row.context.key for row in table.rows}
        for key in model.bias:
            if key not in known:
                raise InvalidArgumentError(
                    f"Bias names context {sorted(key)} absent from the table"
                )
        return table.with_rows(
            _bias(row, model.bias[row.context.key])
            if row.context.key in model.bias
            else row
            for row in table.rows
        )
    if realization is None:
        raise InvalidArgumentError("Vector jitter needs the realization of the table")
    if not realization.matches(table.inequality):
        raise InvalidArgumentError(
            f"Realization does not implement {table.inequality.value}"
        )
    if model.sigma == 0.0:
        return table
    return _jitter(table, model.sigma, realization, seed)


__all__ = [
    "NOISE_GRAMMAR",
    "NoiseKind",
    "NoiseModel",
    "apply_noise",
    "parse_noise_spec",
]
