import unittest

from mnchv_analysis import epsilon_for, evaluate_S
from photon_simulation import (
    NoiseKind,
    NoiseModel,
    apply_noise,
    parse_noise_spec,
)
from probability_table import Inequality, InvalidArgumentError
from quantum_realization import build_realization, ideal_table


def _ideal(inequality: Inequality):
    realization = build_realization(inequality)
    return realization, ideal_table(realization, inequality)


class TestNoiseGrammar(unittest.TestCase):
    def test_none(self) -> None:
        self.assertEqual(parse_noise_spec("none"), [NoiseModel.none()])

    def test_depolarizing(self) -> None:
        (model,) = parse_noise_spec("depolarizing:0.98")
        self.assertIs(model.kind, NoiseKind.DEPOLARIZING)
        self.assertEqual(model.visibility, 0.98)

    def test_chain_keeps_order(self) -> None:
        models = parse_noise_spec(" jitter:0.02 + depolarizing:0.99 ")
        self.assertEqual(
            [m.kind for m in models], [NoiseKind.VECTOR_JITTER, NoiseKind.DEPOLARIZING]
        )
        self.assertEqual(models[0].sigma, 0.02)

    def test_bias_entries(self) -> None:
        (model,) = parse_noise_spec("bias:(1,2)/1=0.01;(2,3)/rest=-0.004")
        self.assertIs(model.kind, NoiseKind.ADDITIVE_BIAS)
        self.assertEqual(
            dict(model.bias),
            {frozenset({1, 2}): {"1": 0.01}, frozenset({2, 3}): {"rest": -0.004}},
        )

    def test_describe_parses_back(self) -> None:
        for text in ("none", "depolarizing:0.9", "jitter:0.05", "bias:(1,2)/2=0.01"):
            (model,) = parse_noise_spec(text)
            self.assertEqual(parse_noise_spec(model.describe()), [model])

    def test_syntax_errors(self) -> None:
        for text in ("", "foo:1", "depolarizing", "bias:(1,2)=0.1", "none+"):
            with self.assertRaises(InvalidArgumentError, msg=text):
                parse_noise_spec(text)

    def test_parameter_range(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            parse_noise_spec("depolarizing:1.5")
        with self.assertRaises(InvalidArgumentError):
            NoiseModel.depolarizing(-0.1)
        with self.assertRaises(InvalidArgumentError):
            NoiseModel.vector_jitter(float("inf"))


class TestApplyNoise(unittest.TestCase):
    def test_none_and_unit_visibility_are_identity(self) -> None:
        _, table = _ideal(Inequality.C7)
        self.assertIs(apply_noise(table, NoiseModel.none()), table)
        self.assertIs(apply_noise(table, NoiseModel.depolarizing(1.0)), table)

    def test_full_depolarization(self) -> None:
        _, c7 = _ideal(Inequality.C7)
        _, c7bar = _ideal(Inequality.C7BAR)
        s, _ = evaluate_S(apply_noise(c7, NoiseModel.depolarizing(0.0)))
        self.assertAlmostEqual(s, 7 / 3, delta=1e-12)
        s, _ = evaluate_S(apply_noise(c7bar, NoiseModel.depolarizing(0.0)))
        self.assertAlmostEqual(s, 7 / 5, delta=1e-12)

    def test_depolarization_is_linear_in_visibility(self) -> None:
        _, table = _ideal(Inequality.C7)
        ideal_s, _ = evaluate_S(table)
        s, _ = evaluate_S(apply_noise(table, NoiseModel.depolarizing(0.9)))
        self.assertAlmostEqual(s, 0.9 * ideal_s + 0.1 * 7 / 3, delta=1e-12)
        noisy = apply_noise(table, NoiseModel.depolarizing(0.9))
        self.assertEqual(epsilon_for(noisy).epsilon, 0.0)

    def test_every_model_keeps_rows_normalized(self) -> None:
        for inequality in (Inequality.C7, Inequality.C7BAR):
            realization, table = _ideal(inequality)
            for spec in ("depolarizing:0.95", "jitter:0.05", "bias:(1,3,5)/1=0.02"):
                if spec.startswith("bias") and inequality is Inequality.C7:
                    spec = "bias:(1,2)/1=0.02"
                noisy = apply_noise(table, parse_noise_spec(spec), realization, seed=4)
                for row in noisy.rows:
                    self.assertAlmostEqual(sum(row.outcomes.values()), 1.0, delta=1e-12)
                    self.assertTrue(all(p >= 0.0 for p in row.outcomes.values()))
                    self.assertEqual(row.theory, table.row_for(row.context).theory)

    def test_zero_jitter_leaves_epsilon_at_zero(self) -> None:
        realization, table = _ideal(Inequality.C7BAR)
        noisy = apply_noise(table, NoiseModel.vector_jitter(0.0), realization, seed=1)
        self.assertEqual(epsilon_for(noisy).epsilon, 0.0)

    def test_jitter_breaks_marginal_agreement(self) -> None:
        realization, table = _ideal(Inequality.C7)
        noisy = apply_noise(table, NoiseModel.vector_jitter(0.05), realization, seed=1)
        self.assertGreater(epsilon_for(noisy).epsilon, 0.0)

    def test_jitter_is_reproducible(self) -> None:
        realization, table = _ideal(Inequality.C7)
        model = NoiseModel.vector_jitter(0.05)
        first = apply_noise(table, model, realization, seed=7)
        second = apply_noise(table, model, realization, seed=7)
        other = apply_noise(table, model, realization, seed=8)
        self.assertEqual(
            [r.outcomes for r in first.rows], [r.outcomes for r in second.rows]
        )
        self.assertNotEqual(
            [r.outcomes for r in first.rows], [r.outcomes for r in other.rows]
        )

    def test_jitter_needs_matching_realization(self) -> None:
        _, table = _ideal(Inequality.C7)
        with self.assertRaises(InvalidArgumentError):
            apply_noise(table, NoiseModel.vector_jitter(0.05))
        with self.assertRaises(InvalidArgumentError):
            apply_noise(
                table,
                NoiseModel.vector_jitter(0.05),
                build_realization(Inequality.C7BAR),
            )

    def test_bias_shifts_one_context(self) -> None:
        _, table = _ideal(Inequality.C7)
        (model,) = parse_noise_spec("bias:(1,2)/1=0.01")
        noisy = apply_noise(table, model)
        row = noisy.rows[0]
        expected = (table.rows[0].marginal(1) + 0.01) / 1.01
        self.assertAlmostEqual(row.marginal(1), expected)
        self.assertEqual(noisy.rows[1:], table.rows[1:])
        self.assertGreater(epsilon_for(noisy).epsilon, 0.0)

    def test_bias_clips_at_zero(self) -> None:
        _, table = _ideal(Inequality.C7)
        (model,) = parse_noise_spec("bias:(1,2)/2=-1")
        row = apply_noise(table, model).rows[0]
        self.assertEqual(row.outcomes["2"], 0.0)

    def test_bias_errors(self) -> None:
        _, table = _ideal(Inequality.C7)
        for spec in ("bias:(1,3)/1=0.01", "bias:(1,2)/rest2=0.01"):
            with self.assertRaises(InvalidArgumentError, msg=spec):
                apply_noise(table, parse_noise_spec(spec))
