from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dataclass_field
from dataclasses import replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

# Number of events (and contexts) in every inequality handled here.
CYCLE_LENGTH = 7

NORMALIZATION_TOLERANCE = 1e-9


class InvalidArgumentError(ValueError):
    """Raised when an operation receives an argument outside its domain."""


class Inequality(Enum):
    C7 = "C7"
    C7BAR = "C7bar"
    PRODUCT = "product"

    @classmethod
    def parse(cls, text: str) -> "Inequality":
        normalized = text.strip().lower()
        for member in cls:
            if member.value.lower() == normalized:
                return member
        raise InvalidArgumentError(
            f"Unknown inequality '{text}'. Expected one of: "
            + ", ".join(m.value for m in cls)
        )

    @property
    def dimension(self) -> int:
        """Hilbert-space dimension of the d-outcome measurement of one context."""
        if self is Inequality.C7:
            return 3
        if self is Inequality.C7BAR:
            return 5
        raise InvalidArgumentError("The product inequality has no single dimension")


def cyclic(index: int, n: int = CYCLE_LENGTH) -> int:
    """Map any integer onto the 1-based labels 1..n modulo n."""
    return (index - 1) % n + 1


@dataclass(frozen=True)
class Context:
    """Mutually compatible measurements performed together.

    ``measurements`` are 1-based event labels; ``target`` holds one outcome bit
    per measurement.
    """

    measurements: Tuple[int, ...]
    target: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.measurements) != len(self.target):
            raise InvalidArgumentError(
                f"Context {self.measurements} has {len(self.target)} target bits"
            )
        if len(set(self.measurements)) != len(self.measurements):
            raise InvalidArgumentError(
                f"Context {self.measurements} repeats a measurement"
            )
        if any(bit not in (0, 1) for bit in self.target):
            raise InvalidArgumentError(f"Target bits must be 0 or 1: {self.target}")

    @property
    def key(self) -> FrozenSet[int]:
        return frozenset(self.measurements)

    @property
    def target_measurement(self) -> int:
        ones = [m for m, bit in zip(self.measurements, self.target) if bit == 1]
        if len(ones) != 1:
            raise InvalidArgumentError(
                f"Context {self.label} must have exactly one target bit set"
            )
        return ones[0]

    @property
    def label(self) -> str:
        return "(" + ",".join(str(m) for m in self.measurements) + ")"

    @property
    def target_string(self) -> str:
        return "".join(str(bit) for bit in self.target)

    def position(self, measurement: int) -> int:
        try:
            return self.measurements.index(measurement)
        except ValueError:
            raise InvalidArgumentError(
                f"Measurement {measurement} is not part of context {self.label}"
            )


def standard_contexts(inequality: Inequality) -> List[Context]:
    """Contexts of S(C7) or S(C7bar) in the row order of the published tables."""
    if inequality is Inequality.C7:
        return [
            Context(measurements=(j, cyclic(j + 1)), target=(1, 0))
            for j in range(1, CYCLE_LENGTH + 1)
        ]
    if inequality is Inequality.C7BAR:
        # Row i is (k-2, k, k+2) with k = i + 2, so the first row reads (1,3,5).
        return [
            Context(
                measurements=(cyclic(k - 2), cyclic(k), cyclic(k + 2)),
                target=(1, 0, 0),
            )
            for k in range(3, CYCLE_LENGTH + 3)
        ]
    raise InvalidArgumentError("Product contexts are built by combine_product")


def completion_labels(context: Context, dimension: int) -> Tuple[str, ...]:
    """Outcome labels of the "rest" vectors completing a context to a basis."""
    missing = dimension - len(context.measurements)
    if missing < 0:
        raise InvalidArgumentError(
            f"Context {context.label} does not fit in dimension {dimension}"
        )
    if missing == 1:
        return ("rest",)
    return tuple(f"rest{i}" for i in range(1, missing + 1))


def outcome_labels(context: Context, dimension: int) -> Tuple[str, ...]:
    return tuple(str(m) for m in context.measurements) + completion_labels(
        context, dimension
    )


@dataclass(frozen=True)
class CountRecord:
    """Photon counts of one d-outcome measurement implementing a context."""

    context: Context
    basis_outcomes: Tuple[str, ...]
    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.basis_outcomes) != len(self.counts):
            raise InvalidArgumentError(
                f"Record for {self.context.label}: "
                f"{len(self.counts)} counts for {len(self.basis_outcomes)} outcomes"
            )
        if any(c < 0 for c in self.counts):
            raise InvalidArgumentError(
                f"Record for {self.context.label} has negative counts"
            )
        for m in self.context.measurements:
            if str(m) not in self.basis_outcomes:
                raise InvalidArgumentError(
                    f"Record for {self.context.label} lacks outcome '{m}'"
                )

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count(self, outcome: str) -> int:
        return self.counts[self.basis_outcomes.index(outcome)]

    def as_dict(self) -> Dict[str, int]:
        return dict(zip(self.basis_outcomes, self.counts))


@dataclass(frozen=True)
class ProbabilityRow:
    """One context of a table with its full d-outcome distribution.

    A single click on outcome ``m`` is the event "measurement m gave 1, all other
    measurements of the context gave 0"; the "rest" outcomes are the all-zero event.
    """

    context: Context
    outcomes: Dict[str, float]
    error: float = 0.0
    record: Optional[CountRecord] = None
    theory: Optional[float] = None

    def outcome_probability(self, label: str) -> float:
        try:
            return self.outcomes[label]
        except KeyError:
            raise InvalidArgumentError(
                f"Outcome '{label}' missing from row {self.context.label}"
            )

    @property
    def probability(self) -> float:
        return self.outcome_probability(str(self.context.target_measurement))

    def marginal(self, measurement: int) -> float:
        self.context.position(measurement)
        return self.outcome_probability(str(measurement))

    @property
    def marginals(self) -> Dict[int, float]:
        return {m: self.marginal(m) for m in self.context.measurements}

    @property
    def variance(self) -> float:
        return self.error * self.error

    @property
    def boundary(self) -> bool:
        """Estimated from counts but pinned at 0 or 1, so its error is degenerate."""
        p = self.probability
        return self.record is not None and (p <= 0.0 or p >= 1.0)

    def joint_distribution(self) -> Dict[Tuple[int, ...], float]:
        """Probability of every outcome-bit tuple of the context.

        Tuples with more than one bit set have probability exactly 0 because the
        projectors of a context are mutually orthogonal.
        """
        size = len(self.context.measurements)
        joint: Dict[Tuple[int, ...], float] = {}
        for code in range(2**size):
            bits = tuple((code >> (size - 1 - i)) & 1 for i in range(size))
            joint[bits] = 0.0
        rest = 0.0
        for label, p in self.outcomes.items():
            if label.startswith("rest"):
                rest += p
                continue
            idx = self.context.position(int(label))
            bits = tuple(1 if i == idx else 0 for i in range(size))
            joint[bits] += p
        joint[tuple([0] * size)] = rest
        return joint


@dataclass(frozen=True)
class TableSource:
    kind: str
    seed: Optional[int] = None
    path: Optional[str] = None
    inferred: bool = False
    # S error quoted alongside published data; verdicts prefer it.
    quoted_s_error: Optional[float] = None

    @classmethod
    def ideal(cls) -> "TableSource":
        return cls(kind="ideal")

    @classmethod
    def simulated(cls, seed: int) -> "TableSource":
        return cls(kind="simulated", seed=seed)

    @classmethod
    def ingested(
        cls,
        path: Optional[str],
        inferred: bool = False,
        quoted_s_error: Optional[float] = None,
    ) -> "TableSource":
        return cls(
            kind="ingested",
            path=path,
            inferred=inferred,
            quoted_s_error=quoted_s_error,
        )


@dataclass(frozen=True)
class ProbabilityTable:
    inequality: Inequality
    rows: Tuple[ProbabilityRow, ...]
    source: TableSource = dataclass_field(default_factory=TableSource.ideal)

    @property
    def contexts(self) -> List[Context]:
        return [row.context for row in self.rows]

    def row_for(self, context: Context) -> ProbabilityRow:
        for row in self.rows:
            if row.context.key == context.key:
                return row
        raise InvalidArgumentError(f"Context {context.label} not in table")

    def rows_containing(self, measurement: int) -> List[ProbabilityRow]:
        return [row for row in self.rows if measurement in row.context.measurements]

    @property
    def measurements(self) -> List[int]:
        seen: Dict[int, None] = {}
        for row in self.rows:
            for m in row.context.measurements:
                seen.setdefault(m, None)
        return sorted(seen)

    def missing_contexts(self) -> List[Context]:
        present = {row.context.key for row in self.rows}
        return [
            c for c in standard_contexts(self.inequality) if c.key not in present
        ]

    def with_rows(
        self, rows: Iterable[ProbabilityRow], source: Optional[TableSource] = None
    ) -> "ProbabilityTable":
        return replace(
            self,
            rows=tuple(rows),
            source=source if source is not None else self.source,
        )


def normalized(outcomes: Dict[str, float]) -> Dict[str, float]:
    total = sum(outcomes.values())
    if total <= 0.0:
        raise InvalidArgumentError("Cannot normalize an all-zero distribution")
    return {label: p / total for label, p in outcomes.items()}


__all__ = [
    "CYCLE_LENGTH",
    "NORMALIZATION_TOLERANCE",
    "InvalidArgumentError",
    "Inequality",
    "Context",
    "CountRecord",
    "ProbabilityRow",
    "ProbabilityTable",
    "TableSource",
    "completion_labels",
    "cyclic",
    "normalized",
    "outcome_labels",
    "standard_contexts",
]
