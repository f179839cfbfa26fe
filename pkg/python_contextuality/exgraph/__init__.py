from .errors import ConvergenceError, InvalidArgumentError, SizeLimitError
from .graph import (
    ExclusivityGraph,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    or_product,
    product_vertex,
)
from .holes import ODD_HOLE_CAP, find_induced_odd_holes, is_nonclassical
from .independence import (
    DEFAULT_INDEPENDENCE_CAP,
    independence_number,
    maximum_independent_set,
)
from .theta import (
    DEFAULT_SDP_CAP,
    DEFAULT_SDP_FEASIBILITY_TOL,
    DEFAULT_SDP_GAP_TOL,
    DEFAULT_SDP_MAX_ITERATIONS,
    GraphBounds,
    lovasz_theta,
    odd_cycle_theta_closed_form,
    theta_product_identity,
)

__all__ = [
    "ConvergenceError",
    "InvalidArgumentError",
    "SizeLimitError",
    "ExclusivityGraph",
    "complement",
    "complete_graph",
    "cycle_graph",
    "empty_graph",
    "or_product",
    "product_vertex",
    "ODD_HOLE_CAP",
    "find_induced_odd_holes",
    "is_nonclassical",
    "DEFAULT_INDEPENDENCE_CAP",
    "independence_number",
    "maximum_independent_set",
    "DEFAULT_SDP_CAP",
    "DEFAULT_SDP_FEASIBILITY_TOL",
    "DEFAULT_SDP_GAP_TOL",
    "DEFAULT_SDP_MAX_ITERATIONS",
    "GraphBounds",
    "lovasz_theta",
    "odd_cycle_theta_closed_form",
    "theta_product_identity",
]
