from __future__ import annotations

import itertools
from typing import List, Optional, Tuple

from .errors import SizeLimitError
from .graph import ExclusivityGraph, complement

ODD_HOLE_CAP = 20
MIN_HOLE_LENGTH = 5


def _is_chordless_cycle(masks: List[int], subset: Tuple[int, ...]) -> bool:
    chosen = 0
    for v in subset:
        chosen |= 1 << v
    for v in subset:
        if bin(masks[v] & chosen).count("1") != 2:
            return False
    # 2-regular: a single cycle iff walking from one vertex visits all of them.
    start = subset[0]
    previous, current = -1, start
    steps = 0
    while True:
        inside = masks[current] & chosen
        nxt = next(u for u in subset if (inside >> u) & 1 and u != previous)
        previous, current = current, nxt
        steps += 1
        if current == start:
            return steps == len(subset)


def find_induced_odd_holes(
    g: ExclusivityGraph, max_len: Optional[int] = None
) -> List[Tuple[int, ...]]:
    """Vertex subsets of odd size in [5, max_len] inducing a chordless cycle."""
    if g.n > ODD_HOLE_CAP:
        raise SizeLimitError("find_induced_odd_holes", g.n, ODD_HOLE_CAP)
    longest = g.n if max_len is None else min(max_len, g.n)
    masks = g.adjacency_masks()
    holes: List[Tuple[int, ...]] = []
    for size in range(MIN_HOLE_LENGTH, longest + 1, 2):
        for subset in itertools.combinations(range(g.n), size):
            if _is_chordless_cycle(masks, subset):
                holes.append(subset)
    return holes


def is_nonclassical(g: ExclusivityGraph, max_len: Optional[int] = None) -> bool:
    """Whether g has an induced odd hole or odd antihole.

    Only such graphs admit quantum probabilities beyond the independence number.
    """
    if find_induced_odd_holes(g, max_len):
        return True
    return bool(find_induced_odd_holes(complement(g), max_len))


__all__ = [
    "MIN_HOLE_LENGTH",
    "ODD_HOLE_CAP",
    "find_induced_odd_holes",
    "is_nonclassical",
]
