from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Dict, List, Optional, Tuple

from exgraph import GraphBounds, theta_product_identity
from probability_table import (
    CYCLE_LENGTH,
    Inequality,
    InvalidArgumentError,
    ProbabilityTable,
    standard_contexts,
)

from .epsilon import (
    NCHV_BOUND,
    EpsilonBreakdown,
    epsilon_for,
    epsilon_product,
)
from .evaluation import evaluate_S, require_complete
from .verdicts import (
    DEFAULT_BOUND_TOLERANCE,
    DEFAULT_SIGNIFICANCE,
    BoundVerdict,
)

logger = logging.getLogger(__name__)

QLM_EXPRESSION = "2 + 3*sqrt(3)/4"
# Exclusivity-principle bound on the product inequality.
EXCLUSIVITY_BOUND = 7.0
FACTORIZATION_TOL = 1e-12


def qlm_bound_c7() -> float:
    """Largest S(C7) reachable with local quantum measurements."""
    return 2.0 + 3.0 * math.sqrt(3.0) / 4.0


@dataclass(frozen=True)
class ReportBounds:
    nchv: int
    mnchv: float
    quantum: float
    qlm: Optional[float] = None
    exclusivity: Optional[float] = None

    def named(self) -> List[Tuple[str, Optional[float]]]:
        return [
            ("nchv", float(self.nchv)),
            ("mnchv", self.mnchv),
            ("qlm", self.qlm),
            ("quantum", self.quantum),
            ("exclusivity", self.exclusivity),
        ]


@dataclass(frozen=True)
class AnalysisReport:
    inequality: Inequality
    s_value: float
    s_error: float
    bounds: ReportBounds
    epsilon: EpsilonBreakdown
    verdicts: Dict[str, BoundVerdict]
    threshold: float = DEFAULT_SIGNIFICANCE
    tolerance: float = DEFAULT_BOUND_TOLERANCE
    tables: Tuple[ProbabilityTable, ...] = dataclass_field(default_factory=tuple)
    quoted_s_error: Optional[float] = None

    @property
    def verdict_error(self) -> float:
        """Error the verdicts were computed with."""
        return self.s_error if self.quoted_s_error is None else self.quoted_s_error

    @property
    def inferred(self) -> bool:
        return any(table.source.inferred for table in self.tables)

    def verdict(self, name: str) -> BoundVerdict:
        try:
            return self.verdicts[name]
        except KeyError:
            raise InvalidArgumentError(
                f"Report on {self.inequality.value} has no '{name}' bound"
            )


def _assess_all(
    s: float, error: float, bounds: ReportBounds, threshold: float, tol: float
) -> Dict[str, BoundVerdict]:
    return {
        name: BoundVerdict.assess(s, value, error, threshold, tol)
        for name, value in bounds.named()
        if value is not None
    }


def make_report(
    table: ProbabilityTable,
    bounds: GraphBounds,
    qlm: Optional[float] = None,
    e_bound: Optional[float] = None,
    threshold: float = DEFAULT_SIGNIFICANCE,
    tol: float = DEFAULT_BOUND_TOLERANCE,
) -> AnalysisReport:
    """S with its error against every bound known for the table's inequality.

    C7 falls back to the local-quantum bound 2 + 3*sqrt(3)/4. No such bound is
    known for C7bar, so its qlm field stays None.
    """
    if table.inequality is Inequality.PRODUCT:
        raise InvalidArgumentError("Product reports come from combine_product")
    expected_alpha = NCHV_BOUND[table.inequality]
    if bounds.alpha != expected_alpha:
        raise InvalidArgumentError(
            f"Graph bounds with alpha={bounds.alpha} do not belong to "
            f"{table.inequality.value} (alpha={expected_alpha})"
        )
    if table.inequality is Inequality.C7BAR and qlm is not None:
        raise InvalidArgumentError("No local-quantum bound is known for C7bar")
    if table.inequality is Inequality.C7 and qlm is None:
        qlm = qlm_bound_c7()

    s, error = evaluate_S(table)
    quoted = table.source.quoted_s_error
    epsilon = epsilon_for(table)
    report_bounds = ReportBounds(
        nchv=expected_alpha,
        mnchv=epsilon.mnchv_bound,
        quantum=bounds.theta,
        qlm=qlm,
        exclusivity=e_bound,
    )
    logger.info(
        "%s: S=%.6f +- %.6f, epsilon=%.6f",
        table.inequality.value,
        s,
        error,
        epsilon.epsilon,
    )
    return AnalysisReport(
        inequality=table.inequality,
        s_value=s,
        s_error=error,
        bounds=report_bounds,
        epsilon=epsilon,
        verdicts=_assess_all(
            s, error if quoted is None else quoted, report_bounds, threshold, tol
        ),
        threshold=threshold,
        tolerance=tol,
        tables=(table,),
        quoted_s_error=quoted,
    )


def product_terms(
    table_a: ProbabilityTable, table_b: ProbabilityTable
) -> Dict[Tuple[str, str], float]:
    """P_A(j) * P_B(k) for the 49 product contexts, keyed by context labels."""
    rows_a = [table_a.row_for(c) for c in standard_contexts(Inequality.C7)]
    rows_b = [table_b.row_for(c) for c in standard_contexts(Inequality.C7BAR)]
    return {
        (a.context.label, b.context.label): a.probability * b.probability
        for a in rows_a
        for b in rows_b
    }


def combine_product(
    table_a: ProbabilityTable,
    table_b: ProbabilityTable,
    quantum: Optional[float] = None,
    threshold: float = DEFAULT_SIGNIFICANCE,
    tol: float = DEFAULT_BOUND_TOLERANCE,
) -> AnalysisReport:
    """Product inequality from independent C7 and C7bar experiments."""
    require_complete(table_a, Inequality.C7)
    require_complete(table_b, Inequality.C7BAR)
    s_a, error_a = evaluate_S(table_a)
    s_b, error_b = evaluate_S(table_b)

    terms = product_terms(table_a, table_b)
    total = 0.0
    for value in terms.values():
        total += value
    s = s_a * s_b
    if abs(total - s) > FACTORIZATION_TOL:
        raise InvalidArgumentError(
            f"Sum over product contexts {total!r} != S_A * S_B = {s!r}"
        )
    error = math.hypot(s_b * error_a, s_a * error_b)
    quoted_a = table_a.source.quoted_s_error
    quoted_b = table_b.source.quoted_s_error
    quoted = None
    if quoted_a is not None and quoted_b is not None:
        quoted = math.hypot(s_b * quoted_a, s_a * quoted_b)

    epsilon = epsilon_product(table_a, table_b)
    if quantum is None:
        quantum = theta_product_identity(CYCLE_LENGTH)
    report_bounds = ReportBounds(
        nchv=NCHV_BOUND[Inequality.PRODUCT],
        mnchv=epsilon.mnchv_bound,
        quantum=quantum,
        exclusivity=EXCLUSIVITY_BOUND,
    )
    logger.info("product: S=%.6f +- %.6f from %d contexts", s, error, len(terms))
    return AnalysisReport(
        inequality=Inequality.PRODUCT,
        s_value=s,
        s_error=error,
        bounds=report_bounds,
        epsilon=epsilon,
        verdicts=_assess_all(
            s, error if quoted is None else quoted, report_bounds, threshold, tol
        ),
        threshold=threshold,
        tolerance=tol,
        tables=(table_a, table_b),
        quoted_s_error=quoted,
    )


__all__ = [
    "EXCLUSIVITY_BOUND",
    "QLM_EXPRESSION",
    "AnalysisReport",
    "ReportBounds",
    "combine_product",
    "make_report",
    "product_terms",
    "qlm_bound_c7",
]
