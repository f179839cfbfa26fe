from .epsilon import (
    EPSILON_FORMULAS,
    NCHV_BOUND,
    EpsilonBreakdown,
    ProductContext,
    TDistanceTerm,
    epsilon_c7,
    epsilon_c7bar,
    epsilon_for,
    epsilon_from_terms,
    epsilon_product,
    product_t_distance,
    t_distance,
)
from .evaluation import IncompleteTableError, evaluate_S, require_complete
from .render import (
    render_report_csv,
    render_report_markdown,
    render_table_csv,
    render_table_markdown,
)
from .report import (
    EXCLUSIVITY_BOUND,
    QLM_EXPRESSION,
    AnalysisReport,
    ReportBounds,
    combine_product,
    make_report,
    product_terms,
    qlm_bound_c7,
)
from .verdicts import (
    DEFAULT_BOUND_TOLERANCE,
    DEFAULT_SIGNIFICANCE,
    BoundVerdict,
    Verdict,
    significance,
    verdict_for,
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
    "IncompleteTableError",
    "evaluate_S",
    "require_complete",
    "render_report_csv",
    "render_report_markdown",
    "render_table_csv",
    "render_table_markdown",
    "EXCLUSIVITY_BOUND",
    "QLM_EXPRESSION",
    "AnalysisReport",
    "ReportBounds",
    "combine_product",
    "make_report",
    "product_terms",
    "qlm_bound_c7",
    "DEFAULT_BOUND_TOLERANCE",
    "DEFAULT_SIGNIFICANCE",
    "BoundVerdict",
    "Verdict",
    "significance",
    "verdict_for",
]
