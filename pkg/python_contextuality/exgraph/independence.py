from __future__ import annotations

import logging
from typing import List, Tuple

from .errors import SizeLimitError
from .graph import ExclusivityGraph

logger = logging.getLogger(__name__)

DEFAULT_INDEPENDENCE_CAP = 64


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class _MaxCliqueSearch:
    """Branch-and-bound maximum clique with greedy-coloring upper bounds.

    Runs on the compatibility graph (the complement of the exclusivity graph),
    where cliques are exactly the independent sets of the original graph.
    """

    def __init__(self, compatible: List[int]) -> None:
        self._compatible = compatible
        self.best: List[int] = []
        self.nodes = 0

    def _color_sort(self, candidates: int) -> Tuple[List[int], List[int]]:
        order: List[int] = []
        colors: List[int] = []
        uncolored = candidates
        color = 0
        while uncolored:
            color += 1
            available = uncolored
            while available:
                v = _lowest_bit(available)
                available &= ~(1 << v)
                # Same color class must stay pairwise non-adjacent in the clique graph.
                available &= ~self._compatible[v]
                uncolored &= ~(1 << v)
                order.append(v)
                colors.append(color)
        return order, colors

    def expand(self, clique: List[int], candidates: int) -> None:
        self.nodes += 1
        order, colors = self._color_sort(candidates)
        for idx in range(len(order) - 1, -1, -1):
            if len(clique) + colors[idx] <= len(self.best):
                return
            v = order[idx]
            clique.append(v)
            remaining = candidates & self._compatible[v]
            if remaining:
                self.expand(clique, remaining)
            elif len(clique) > len(self.best):
                self.best = list(clique)
            clique.pop()
            candidates &= ~(1 << v)


def maximum_independent_set(
    g: ExclusivityGraph, cap: int = DEFAULT_INDEPENDENCE_CAP
) -> List[int]:
    """Return one maximum set of pairwise non-adjacent vertices (exact)."""
    if g.n > cap:
        raise SizeLimitError("independence_number", g.n, cap)
    full = (1 << g.n) - 1
    adjacency = g.adjacency_masks()
    compatible = [full & ~adjacency[v] & ~(1 << v) for v in range(g.n)]
    search = _MaxCliqueSearch(compatible)
    search.expand([], full)
    logger.debug(
        "independence search on %d vertices: alpha=%d after %d nodes",
        g.n,
        len(search.best),
        search.nodes,
    )
    return sorted(search.best)


def independence_number(
    g: ExclusivityGraph, cap: int = DEFAULT_INDEPENDENCE_CAP
) -> int:
    """Exact independence number, the NCHV bound of the graph's inequality."""
    return len(maximum_independent_set(g, cap))


__all__ = [
    "DEFAULT_INDEPENDENCE_CAP",
    "independence_number",
    "maximum_independent_set",
]
