import math
import unittest

import numpy as np
from scipy.stats import ortho_group

from exgraph import lovasz_theta, odd_cycle_theta_closed_form
from probability_table import (
    NORMALIZATION_TOLERANCE,
    Context,
    Inequality,
    InvalidArgumentError,
    standard_contexts,
)
from quantum_realization import (
    IncompatibleContextError,
    VectorRealization,
    build_c7_realization,
    build_c7bar_realization,
    build_realization,
    context_probability,
    ideal_table,
    measurement_basis,
    orthogonality_graph,
    realization_graph,
)


class TestRealizations(unittest.TestCase):
    def test_invariants(self) -> None:
        for inequality in (Inequality.C7, Inequality.C7BAR):
            r = build_realization(inequality)
            r.validate()
            self.assertEqual(r.dim, inequality.dimension)
            self.assertTrue(r.matches(inequality))
            self.assertEqual(orthogonality_graph(r.vectors).edges, r.graph.edges)

    def test_overlap_sums_reach_theta(self) -> None:
        c7 = build_c7_realization()
        c7bar = build_c7bar_realization()
        self.assertAlmostEqual(
            sum(c7.overlap(j) for j in range(1, 8)),
            odd_cycle_theta_closed_form(7),
            delta=1e-9,
        )
        self.assertAlmostEqual(
            sum(c7bar.overlap(k) for k in range(1, 8)),
            odd_cycle_theta_closed_form(7, complemented=True),
            delta=1e-9,
        )
        sdp = lovasz_theta(realization_graph(Inequality.C7))
        self.assertAlmostEqual(
            sum(c7.overlap(j) for j in range(1, 8)), sdp.theta, delta=1e-5
        )

    def test_symmetric_probabilities(self) -> None:
        c = math.cos(math.pi / 7)
        for j in range(1, 8):
            self.assertAlmostEqual(
                build_c7_realization().overlap(j), c / (1 + c), delta=1e-12
            )
            self.assertAlmostEqual(
                build_c7bar_realization().overlap(j), (1 + c) / (7 * c), delta=1e-12
            )

    def test_validate_rejects_broken_orthogonality(self) -> None:
        r = build_c7_realization()
        vectors = dict(r.vectors)
        vectors[2] = vectors[3]
        broken = VectorRealization(
            dim=3, state=r.state, vectors=vectors, graph=r.graph
        )
        with self.assertRaises(InvalidArgumentError):
            broken.validate()

    def test_json_round_trip(self) -> None:
        r = build_c7bar_realization()
        again = VectorRealization.from_json(r.to_json())
        for k in range(1, 8):
            np.testing.assert_allclose(again.vector(k), r.vector(k), atol=1e-15)
        self.assertEqual(again.graph.edges, r.graph.edges)


class TestContextProbability(unittest.TestCase):
    def test_rotation_invariance(self) -> None:
        for inequality in (Inequality.C7, Inequality.C7BAR):
            r = build_realization(inequality)
            q = ortho_group.rvs(r.dim, random_state=11)
            rotated = r.rotated(q)
            for c in standard_contexts(inequality):
                self.assertAlmostEqual(
                    context_probability(r, c),
                    context_probability(rotated, c),
                    delta=1e-12,
                )

    def test_other_target_patterns(self) -> None:
        r = build_c7_realization()
        q = r.overlap(1)
        self.assertAlmostEqual(
            context_probability(r, Context((1, 2), (0, 0))), 1 - 2 * q, delta=1e-12
        )
        self.assertAlmostEqual(
            context_probability(r, Context((1, 2), (1, 1))), 0.0, delta=1e-12
        )

    def test_incompatible_context(self) -> None:
        with self.assertRaises(IncompatibleContextError):
            context_probability(build_c7_realization(), Context((1, 3), (1, 0)))

    def test_measurement_basis_is_orthonormal(self) -> None:
        r = build_c7bar_realization()
        basis = measurement_basis([r.vector(1), r.vector(3), r.vector(5)], 5)
        np.testing.assert_allclose(basis @ basis.T, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(basis[0], r.vector(1), atol=1e-12)


class TestIdealTable(unittest.TestCase):
    def test_c7_rows(self) -> None:
        table = ideal_table(build_c7_realization(), Inequality.C7)
        self.assertEqual(len(table.rows), 7)
        self.assertEqual(table.source.kind, "ideal")
        for row in table.rows:
            self.assertEqual(f"{row.probability:.3f}", "0.474")
            self.assertEqual(row.probability, row.theory)
            self.assertAlmostEqual(sum(row.outcomes.values()), 1.0, delta=1e-12)
            expected = {*map(str, row.context.measurements), "rest"}
            self.assertEqual(set(row.outcomes), expected)

    def test_c7bar_rows(self) -> None:
        table = ideal_table(build_c7bar_realization(), Inequality.C7BAR)
        for row in table.rows:
            self.assertEqual(f"{row.probability:.3f}", "0.301")
            self.assertIn("rest2", row.outcomes)
            self.assertLessEqual(
                abs(sum(row.outcomes.values()) - 1.0), NORMALIZATION_TOLERANCE
            )

    def test_marginals_agree_across_contexts(self) -> None:
        table = ideal_table(build_c7bar_realization(), Inequality.C7BAR)
        for m in table.measurements:
            values = {row.marginal(m) for row in table.rows_containing(m)}
            self.assertEqual(len(values), 1)

    def test_wrong_inequality(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            ideal_table(build_c7_realization(), Inequality.C7BAR)
        with self.assertRaises(InvalidArgumentError):
            ideal_table(build_c7_realization(), Inequality.PRODUCT)
