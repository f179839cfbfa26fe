"""Context dependence of marginals and the relaxed (MNCHV) noncontextual bound.

A measurement m that belongs to contexts A and B should show the same
marginal distribution in both. The T-distance between those marginals
measures how far the experiment is from that ideal; half the sum of the
T-distances relaxes the noncontextual bound alpha to alpha + epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Tuple, Union

from probability_table import (
    CYCLE_LENGTH,
    Context,
    Inequality,
    InvalidArgumentError,
    ProbabilityTable,
    cyclic,
    standard_contexts,
)

from .evaluation import require_complete

# Binary total-variation distance must equal |P_A(1) - P_B(1)| to this precision.
_BINARY_REDUCTION_TOL = 1e-12

NCHV_BOUND = {Inequality.C7: 3, Inequality.C7BAR: 2, Inequality.PRODUCT: 6}

EPSILON_FORMULAS = {
    Inequality.C7: "epsilon = 1/2 * sum_j T(j in {j-1,j}, j in {j,j+1})",
    Inequality.C7BAR: (
        "epsilon = 1/2 * sum_k [T12 + T13 + T23] over the three contexts "
        "{k-4,k-2,k}, {k-2,k,k+2}, {k,k+2,k+4} holding k"
    ),
    Inequality.PRODUCT: (
        "epsilon = 1/2 * sum_(j,k) sum over pairs of the 6 product contexts "
        "A x B with j in A, k in B of |P_A(j)P_B(k) - P_A'(j)P_B'(k)|"
    ),
}


@dataclass(frozen=True)
class ProductContext:
    """A C7 context run alongside a C7bar context."""

    first: Context
    second: Context

    @property
    def label(self) -> str:
        return f"{self.first.label}x{self.second.label}"


ProductMeasurement = Tuple[int, int]


@dataclass(frozen=True)
class TDistanceTerm:
    measurement: Union[int, ProductMeasurement]
    context_a: Union[Context, ProductContext]
    context_b: Union[Context, ProductContext]
    value: float


@dataclass(frozen=True)
class EpsilonBreakdown:
    terms: Tuple[TDistanceTerm, ...]
    epsilon: float
    alpha: int
    formula: str = ""

    @property
    def mnchv_bound(self) -> float:
        return self.alpha + self.epsilon

    @property
    def per_measurement_T(
        self,
    ) -> Dict[Tuple[Union[int, ProductMeasurement], str, str], float]:
        return {
            (t.measurement, t.context_a.label, t.context_b.label): t.value
            for t in self.terms
        }


def epsilon_from_terms(
    terms: Iterable[TDistanceTerm], alpha: int, formula: str = ""
) -> EpsilonBreakdown:
    terms = tuple(terms)
    for term in terms:
        if not 0.0 <= term.value <= 1.0:
            raise InvalidArgumentError(
                f"T-distance of measurement {term.measurement} is {term.value}, "
                "outside [0, 1]"
            )
    total = 0.0
    for term in terms:
        total += term.value
    return EpsilonBreakdown(
        terms=terms, epsilon=0.5 * total, alpha=alpha, formula=formula
    )


def t_distance(
    table: ProbabilityTable, m: int, ctx_a: Context, ctx_b: Context
) -> float:
    """Total-variation distance between the marginals of m in two contexts."""
    for ctx in (ctx_a, ctx_b):
        if m not in ctx.measurements:
            raise InvalidArgumentError(
                f"Measurement {m} is not part of context {ctx.label}"
            )
    p_a = table.row_for(ctx_a).marginal(m)
    p_b = table.row_for(ctx_b).marginal(m)
    marginal_a = {1: p_a, 0: 1.0 - p_a}
    marginal_b = {1: p_b, 0: 1.0 - p_b}
    distance = 0.5 * sum(abs(marginal_a[x] - marginal_b[x]) for x in (0, 1))
    if abs(distance - abs(p_a - p_b)) > _BINARY_REDUCTION_TOL:
        raise InvalidArgumentError(
            f"Marginals of measurement {m} are not probabilities: {p_a!r}, {p_b!r}"
        )
    return abs(p_a - p_b)


def _context_with(table: ProbabilityTable, labels: Iterable[int]) -> Context:
    key = frozenset(labels)
    for ctx in table.contexts:
        if ctx.key == key:
            return ctx
    raise InvalidArgumentError(f"No context {sorted(key)} in table")


def epsilon_c7(table: ProbabilityTable) -> EpsilonBreakdown:
    require_complete(table, Inequality.C7)
    terms: List[TDistanceTerm] = []
    for j in range(1, 8):
        before = _context_with(table, (cyclic(j - 1), j))
        after = _context_with(table, (j, cyclic(j + 1)))
        value = t_distance(table, j, before, after)
        terms.append(TDistanceTerm(j, before, after, value))
    return epsilon_from_terms(
        terms, NCHV_BOUND[Inequality.C7], EPSILON_FORMULAS[Inequality.C7]
    )


def epsilon_c7bar(table: ProbabilityTable) -> EpsilonBreakdown:
    require_complete(table, Inequality.C7BAR)
    terms: List[TDistanceTerm] = []
    for k in range(1, 8):
        holding_k = [
            _context_with(table, (cyclic(k - 4), cyclic(k - 2), k)),
            _context_with(table, (cyclic(k - 2), k, cyclic(k + 2))),
            _context_with(table, (k, cyclic(k + 2), cyclic(k + 4))),
        ]
        for a, b in combinations(holding_k, 2):
            terms.append(TDistanceTerm(k, a, b, t_distance(table, k, a, b)))
    return epsilon_from_terms(
        terms, NCHV_BOUND[Inequality.C7BAR], EPSILON_FORMULAS[Inequality.C7BAR]
    )


def epsilon_for(table: ProbabilityTable) -> EpsilonBreakdown:
    if table.inequality is Inequality.C7:
        return epsilon_c7(table)
    if table.inequality is Inequality.C7BAR:
        return epsilon_c7bar(table)
    raise InvalidArgumentError("Product epsilon comes from combine_product")


def _table_contexts(table: ProbabilityTable, measurement: int) -> List[Context]:
    return [
        table.row_for(c).context
        for c in standard_contexts(table.inequality)
        if measurement in c.measurements
    ]


def product_t_distance(
    table_a: ProbabilityTable,
    table_b: ProbabilityTable,
    measurement: ProductMeasurement,
    ctx_x: ProductContext,
    ctx_y: ProductContext,
) -> float:
    """T-distance of the factorized marginal P_A(j) * P_B(k) in two product contexts."""
    j, k = measurement
    for ctx in (ctx_x, ctx_y):
        if j not in ctx.first.measurements or k not in ctx.second.measurements:
            raise InvalidArgumentError(
                f"Measurement ({j},{k}) is not part of context {ctx.label}"
            )
    p_x = table_a.row_for(ctx_x.first).marginal(j) * table_b.row_for(
        ctx_x.second
    ).marginal(k)
    p_y = table_a.row_for(ctx_y.first).marginal(j) * table_b.row_for(
        ctx_y.second
    ).marginal(k)
    return abs(p_x - p_y)


def epsilon_product(
    table_a: ProbabilityTable, table_b: ProbabilityTable
) -> EpsilonBreakdown:
    """Epsilon of the product inequality over its 49 product contexts.

    Product measurement (j, k) clicks when j clicks in the C7 experiment and k
    in the C7bar one. It belongs to the 2 x 3 product contexts pairing a C7
    context holding j with a C7bar context holding k; every pair of them
    contributes one T-distance between the factorized marginals.
    """
    require_complete(table_a, Inequality.C7)
    require_complete(table_b, Inequality.C7BAR)
    terms: List[TDistanceTerm] = []
    for j in range(1, CYCLE_LENGTH + 1):
        for k in range(1, CYCLE_LENGTH + 1):
            holding = [
                ProductContext(a, b)
                for a in _table_contexts(table_a, j)
                for b in _table_contexts(table_b, k)
            ]
            for x, y in combinations(holding, 2):
                value = product_t_distance(table_a, table_b, (j, k), x, y)
                terms.append(TDistanceTerm((j, k), x, y, value))
    return epsilon_from_terms(
        terms,
        NCHV_BOUND[Inequality.PRODUCT],
        EPSILON_FORMULAS[Inequality.PRODUCT],
    )


__all__ = [
    "EPSILON_FORMULAS",
    "NCHV_BOUND",
    "EpsilonBreakdown",
    "ProductContext",
    "TDistanceTerm",
    "epsilon_c7",
    "epsilon_c7bar",
    "epsilon_for",
    "epsilon_from_terms",
    "epsilon_product",
    "product_t_distance",
    "t_distance",
]
