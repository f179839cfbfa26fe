from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from exgraph import ExclusivityGraph, complement, cycle_graph
from probability_table import CYCLE_LENGTH, Inequality, InvalidArgumentError

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class VectorRealization:
    """A real pure state plus one real unit vector per event of ``graph``.

    ``vectors`` is keyed by the 1-based event label; label j is graph vertex j-1.
    """

    dim: int
    state: np.ndarray
    vectors: Dict[int, np.ndarray]
    graph: ExclusivityGraph

    def vector(self, label: int) -> np.ndarray:
        try:
            return self.vectors[label]
        except KeyError:
            raise InvalidArgumentError(f"Realization has no vector for event {label}")

    def overlap(self, label: int) -> float:
        """|<vec_label | state>|^2."""
        return float(np.dot(self.vector(label), self.state) ** 2)

    def validate(self) -> None:
        """Check the orthonormal-representation invariants, raising on failure."""
        if self.state.shape != (self.dim,):
            raise InvalidArgumentError(f"State must have length {self.dim}")
        if abs(float(np.linalg.norm(self.state)) - 1.0) > UNIT_NORM_TOL:
            raise InvalidArgumentError("State is not a unit vector")
        if sorted(self.vectors) != list(range(1, self.graph.n + 1)):
            raise InvalidArgumentError(
                f"Expected vectors for events 1..{self.graph.n}, "
                f"got {sorted(self.vectors)}"
            )
        for label, vec in self.vectors.items():
            if vec.shape != (self.dim,):
                raise InvalidArgumentError(
                    f"Vector {label} has shape {vec.shape}, expected ({self.dim},)"
                )
            if abs(float(np.linalg.norm(vec)) - 1.0) > UNIT_NORM_TOL:
                raise InvalidArgumentError(f"Vector {label} is not a unit vector")
        for i, j in self.graph.sorted_edges():
            inner = float(np.dot(self.vectors[i + 1], self.vectors[j + 1]))
            if abs(inner) > ORTHOGONALITY_TOL:
                raise InvalidArgumentError(
                    f"Events {i + 1} and {j + 1} are exclusive but "
                    f"<u|v> = {inner:.3e}"
                )

    def rotated(self, orthogonal: np.ndarray) -> "VectorRealization":
        """Apply one orthogonal matrix to the state and every vector."""
        return VectorRealization(
            dim=self.dim,
            state=orthogonal @ self.state,
            vectors={k: orthogonal @ v for k, v in self.vectors.items()},
            graph=self.graph,
        )

    def matches(self, inequality: Inequality) -> bool:
        expected = realization_graph(inequality)
        return self.dim == inequality.dimension and self.graph.edges == expected.edges

    def to_json(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "state": [float(x) for x in self.state],
            "vectors": {
                str(k): [float(x) for x in self.vectors[k]]
                for k in sorted(self.vectors)
            },
            "graph": self.graph.to_json(),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "VectorRealization":
        dim = int(data["dim"])
        state = np.array([float(x) for x in data["state"]])
        vectors = {
            int(k): np.array([float(x) for x in v]) for k, v in data["vectors"].items()
        }
        graph_data: Optional[Dict[str, Any]] = data.get("graph")
        if graph_data is not None:
            graph = ExclusivityGraph.from_json(graph_data)
        else:
            graph = orthogonality_graph(vectors)
        realization = cls(dim=dim, state=state, vectors=vectors, graph=graph)
        realization.validate()
        return realization


def orthogonality_graph(vectors: Dict[int, np.ndarray]) -> ExclusivityGraph:
    """Graph joining every pair of orthogonal vectors (labels 1..n)."""
    n = len(vectors)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if abs(float(np.dot(vectors[i + 1], vectors[j + 1]))) <= ORTHOGONALITY_TOL
    ]
    return ExclusivityGraph.from_edges(n, edges)


def realization_graph(inequality: Inequality) -> ExclusivityGraph:
    if inequality is Inequality.C7:
        return cycle_graph(CYCLE_LENGTH)
    if inequality is Inequality.C7BAR:
        return complement(cycle_graph(CYCLE_LENGTH))
    raise InvalidArgumentError("The product inequality has no single realization")


def _basis_state(dim: int) -> np.ndarray:
    state = np.zeros(dim)
    state[0] = 1.0
    return state


def build_c7_realization() -> VectorRealization:
    """Qutrit state and heptagon vectors reaching theta(C7)."""
    c = math.cos(math.pi / CYCLE_LENGTH)
    cos_polar = math.sqrt(c / (1.0 + c))
    sin_polar = math.sqrt(1.0 - cos_polar * cos_polar)
    vectors: Dict[int, np.ndarray] = {}
    for j in range(1, CYCLE_LENGTH + 1):
        azimuth = 6.0 * math.pi * j / CYCLE_LENGTH
        vectors[j] = np.array(
            [
                cos_polar,
                sin_polar * math.cos(azimuth),
                sin_polar * math.sin(azimuth),
            ]
        )
    realization = VectorRealization(
        dim=3,
        state=_basis_state(3),
        vectors=vectors,
        graph=realization_graph(Inequality.C7),
    )
    realization.validate()
    return realization


def build_c7bar_realization() -> VectorRealization:
    """Five-dimensional state and vectors reaching theta of the heptagon complement.

    The first in-plane angle is taken literally as 2*pi*2k/7 = 4*pi*k/7.
    """
    c = math.cos(math.pi / CYCLE_LENGTH)
    s = math.sin(math.pi / CYCLE_LENGTH)
    cos_outer = math.sqrt((1.0 + c) / (CYCLE_LENGTH * c))
    sin_outer = math.sqrt(1.0 - cos_outer * cos_outer)
    cos_inner = 2.0 * s * math.sqrt(2.0 * c / (-1.0 + 6.0 * c))
    sin_inner = math.sqrt(1.0 - cos_inner * cos_inner)
    vectors: Dict[int, np.ndarray] = {}
    for k in range(1, CYCLE_LENGTH + 1):
        first_plane = 4.0 * math.pi * k / CYCLE_LENGTH
        second_plane = 2.0 * math.pi * k / CYCLE_LENGTH
        vectors[k] = np.array(
            [
                cos_outer,
                sin_outer * cos_inner * math.cos(first_plane),
                sin_outer * cos_inner * math.sin(first_plane),
                sin_outer * sin_inner * math.cos(second_plane),
                sin_outer * sin_inner * math.sin(second_plane),
            ]
        )
    realization = VectorRealization(
        dim=5,
        state=_basis_state(5),
        vectors=vectors,
        graph=realization_graph(Inequality.C7BAR),
    )
    realization.validate()
    return realization


def build_realization(inequality: Inequality) -> VectorRealization:
    if inequality is Inequality.C7:
        return build_c7_realization()
    if inequality is Inequality.C7BAR:
        return build_c7bar_realization()
    raise InvalidArgumentError("The product inequality has no single realization")


__all__ = [
    "ORTHOGONALITY_TOL",
    "UNIT_NORM_TOL",
    "VectorRealization",
    "build_c7_realization",
    "build_c7bar_realization",
    "build_realization",
    "orthogonality_graph",
    "realization_graph",
]
