from __future__ import annotations

import itertools
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from .errors import InvalidArgumentError

Edge = Tuple[int, int]


def _normalize_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class ExclusivityGraph:
    """Events as vertices, pairwise-exclusive events joined by an edge.

    Vertices are 0-based internally; ``labels`` carries the 1-based event names
    used in files and reports.
    """

    n: int
    edges: FrozenSet[Edge] = frozenset()
    labels: Tuple[str, ...] = dataclass_field(default=())

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidArgumentError(f"Graph needs at least one vertex, got {self.n}")
        normalized = set()
        for i, j in self.edges:
            if i == j:
                raise InvalidArgumentError(f"Self-loop on vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidArgumentError(
                    f"Edge ({i}, {j}) out of range for {self.n} vertices"
                )
            normalized.add(_normalize_edge(i, j))
        object.__setattr__(self, "edges", frozenset(normalized))
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(str(v + 1) for v in range(self.n))
            )
        elif len(self.labels) != self.n:
            raise InvalidArgumentError(
                f"{len(self.labels)} labels given for {self.n} vertices"
            )
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Edge], labels: Optional[Iterable[str]] = None
    ) -> "ExclusivityGraph":
        return cls(n=n, edges=frozenset(edges), labels=tuple(labels or ()))

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and _normalize_edge(i, j) in self.edges

    def neighbors(self, v: int) -> List[int]:
        return [u for u in range(self.n) if self.adjacent(u, v)]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            matrix[i, j] = matrix[j, i] = True
        return matrix

    def adjacency_masks(self) -> List[int]:
        """Neighborhoods as integer bitsets, bit u set when u ~ v."""
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def induced_subgraph(self, vertices: Iterable[int]) -> "ExclusivityGraph":
        chosen = list(vertices)
        index = {v: k for k, v in enumerate(chosen)}
        edges = [
            (index[i], index[j])
            for i, j in self.edges
            if i in index and j in index
        ]
        return ExclusivityGraph.from_edges(
            len(chosen), edges, [self.labels[v] for v in chosen]
        )

    def vertex_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"No vertex labelled '{label}'")

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "edges": [[i + 1, j + 1] for i, j in self.sorted_edges()],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ExclusivityGraph":
        n = int(data["n"])
        edges = []
        for pair in data.get("edges", []):
            if len(pair) != 2:
                raise InvalidArgumentError(f"Edge {pair!r} must have two endpoints")
            i, j = int(pair[0]), int(pair[1])
            if i < 1 or j < 1:
                raise InvalidArgumentError(
                    f"Edge {pair!r}: indices in files are 1-based"
                )
            edges.append((i - 1, j - 1))
        return cls.from_edges(n, edges, data.get("labels") or None)


def cycle_graph(n: int) -> ExclusivityGraph:
    """The n-cycle with edges {i, i+1 mod n}."""
    if n < 3:
        raise InvalidArgumentError(f"A cycle needs at least 3 vertices, got {n}")
    return ExclusivityGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> ExclusivityGraph:
    return ExclusivityGraph.from_edges(n, itertools.combinations(range(n), 2))


def empty_graph(n: int) -> ExclusivityGraph:
    return ExclusivityGraph.from_edges(n, [])


def complement(g: ExclusivityGraph) -> ExclusivityGraph:
    edges = [
        pair for pair in itertools.combinations(range(g.n), 2) if pair not in g.edges
    ]
    return ExclusivityGraph.from_edges(g.n, edges, g.labels)


def or_product(g1: ExclusivityGraph, g2: ExclusivityGraph) -> ExclusivityGraph:
    """OR (co-normal) product: (u1,u2) ~ (v1,v2) iff u1 ~ v1 or u2 ~ v2.

    Vertex (a, b) gets index ``a * g2.n + b``.
    """
    n = g1.n * g2.n
    a1 = g1.adjacency_matrix()
    a2 = g2.adjacency_matrix()
    # kron over booleans: adjacency of the first coordinate broadcast over the second.
    first = np.kron(a1, np.ones((g2.n, g2.n), dtype=bool))
    second = np.kron(np.ones((g1.n, g1.n), dtype=bool), a2)
    adjacency = first | second
    np.fill_diagonal(adjacency, False)
    rows, cols = np.nonzero(np.triu(adjacency, k=1))
    labels = [f"({a},{b})" for a in g1.labels for b in g2.labels]
    return ExclusivityGraph.from_edges(n, zip(rows.tolist(), cols.tolist()), labels)


def product_vertex(g2: ExclusivityGraph, a: int, b: int) -> int:
    return a * g2.n + b


__all__ = [
    "Edge",
    "ExclusivityGraph",
    "complement",
    "complete_graph",
    "cycle_graph",
    "empty_graph",
    "or_product",
    "product_vertex",
]
