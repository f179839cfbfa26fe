import importlib
import io
import json
import sys
from pathlib import Path
from typing import Tuple

import pytest

from contextuality_cli import EXIT_CONVERGENCE, EXIT_OK, EXIT_VALIDATION, main
from contextuality_cli.documents import (
    SchemaError,
    json_path,
    load_tables,
    validate_document,
)
from exgraph import ConvergenceError, odd_cycle_theta_closed_form

THETA_C7 = odd_cycle_theta_closed_form(7)


def _run(capsys: pytest.CaptureFixture, *argv: str) -> Tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(path: Path, capsys: pytest.CaptureFixture, *argv: str) -> Path:
    code, _, err = _run(capsys, *argv, "--out", str(path))
    assert code == EXIT_OK, err
    return path


def test_help_exits_cleanly(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "--help")
    assert code == EXIT_OK
    assert "simulate" in out


def test_bounds_c7(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "bounds", "--inequality", "C7")
    assert code == EXIT_OK
    data = json.loads(out)
    validate_document(data, "bounds")
    assert data["alpha"] == 3
    assert abs(float(data["theta"]) - THETA_C7) <= 1e-6
    assert float(data["theta_closed_form"]) == THETA_C7
    assert abs(float(data["qlm"]) - 3.2990381) <= 1e-6
    assert data["exclusivity"] is None
    assert data["nonclassical"] is True


def test_bounds_product(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "bounds", "--inequality", "product")
    assert code == EXIT_OK
    data = json.loads(out)
    validate_document(data, "bounds")
    assert data["vertices"] == 49
    assert data["alpha"] == 6
    assert abs(float(data["theta"]) - 7.0) <= 1e-4
    assert float(data["exclusivity"]) == 7.0
    assert data["qlm"] is None
    assert "nonclassical" not in data


def test_bounds_markdown(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(
        capsys, "bounds", "--inequality", "C7bar", "--format", "markdown"
    )
    assert code == EXIT_OK
    assert out.startswith("C7bar: 7 events, 14 exclusivities")
    assert "| theta (closed form) | 2.109916 |" in out


def test_predict_markdown(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(
        capsys, "predict", "--inequality", "C7", "--format", "markdown"
    )
    assert code == EXIT_OK
    assert out.count("0.474") == 14
    assert "S(C7)" in out
    assert "3.318" in out


def test_predict_c7bar_json(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "predict", "--inequality", "c7bar")
    assert code == EXIT_OK
    data = json.loads(out)
    validate_document(data, "table")
    assert [row["measurements"] for row in data["rows"]][0] == [1, 3, 5]
    assert all(f"{float(row['probability']):.3f}" == "0.301" for row in data["rows"])
    total = sum(float(row["probability"]) for row in data["rows"])
    assert f"{total:.3f}" == "2.110"


def test_predict_rejects_product(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "predict", "--inequality", "product")
    assert code == EXIT_VALIDATION
    assert "predict takes C7 or C7bar" in err


def test_predict_exports_realization(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    exported = _write(
        tmp_path / "realization.json",
        capsys,
        "predict",
        "--inequality",
        "C7",
        "--format",
        "realization",
    )
    data = json.loads(exported.read_text())
    validate_document(data, "realization")
    assert data["dim"] == 3
    assert sorted(data["vectors"], key=int) == [str(m) for m in range(1, 8)]

    _, builtin, _ = _run(capsys, "predict", "--inequality", "C7")
    code, loaded, _ = _run(
        capsys, "predict", "--inequality", "C7", "--realization", str(exported)
    )
    assert code == EXIT_OK
    assert loaded == builtin


def test_unknown_inequality(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "bounds", "--inequality", "C9")
    assert code == EXIT_VALIDATION
    assert "Unknown inequality" in err


def test_simulate_then_analyze(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    counts = _write(
        tmp_path / "counts.json",
        capsys,
        "simulate",
        "--inequality",
        "C7",
        "--seed",
        "7",
    )
    counts_data = json.loads(counts.read_text())
    validate_document(counts_data, "counts")
    assert counts_data["meta"]["seed"] == 7
    assert counts_data["meta"]["generator"] == "philox"
    assert all(
        isinstance(v, int)
        for c in counts_data["contexts"]
        for v in c["outcomes"].values()
    )

    report = _write(tmp_path / "report.json", capsys, "analyze", "--in", str(counts))
    data = json.loads(report.read_text())
    validate_document(data, "report")
    s, error = float(data["S"]), float(data["S_error"])
    assert abs(s - THETA_C7) < 5 * error
    assert float(data["epsilon"]["value"]) < 0.006
    assert len(data["epsilon"]["terms"]) == 7
    assert data["verdicts"]["mnchv"]["verdict"] == "exceeds"
    assert data["bounds"]["qlm_expression"] == "2 + 3*sqrt(3)/4"
    assert data["inferred"] is False
    row = data["tables"][0]["rows"][0]
    assert isinstance(row["counts"]["1"], int)
    assert float(row["theory"]) == pytest.approx(0.4739524, abs=1e-6)


def test_runs_are_reproducible(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    argv = [
        "simulate",
        "--inequality",
        "C7bar",
        "--noise",
        "jitter:0.02+depolarizing:0.99",
        "--mean-counts",
        "1e5",
    ]
    first = _write(tmp_path / "a.json", capsys, *argv, "--seed", "3")
    second = _write(tmp_path / "b.json", capsys, *argv, "--seed", "3")
    other = _write(tmp_path / "c.json", capsys, *argv, "--seed", "4")
    assert first.read_bytes() == second.read_bytes()
    assert other.read_bytes() != first.read_bytes()
    assert json.loads(first.read_text())["meta"]["noise"] == (
        "jitter:0.02+depolarizing:0.99"
    )

    one = _write(tmp_path / "r1.json", capsys, "analyze", "--in", str(first))
    two = _write(tmp_path / "r2.json", capsys, "analyze", "--in", str(first))
    assert one.read_bytes() == two.read_bytes()


def test_predicted_table_has_zero_epsilon(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    table = _write(tmp_path / "table.json", capsys, "predict", "--inequality", "C7")
    code, out, _ = _run(capsys, "analyze", "--in", str(table))
    assert code == EXIT_OK
    data = json.loads(out)
    assert abs(float(data["S"]) - THETA_C7) <= 1e-9
    assert float(data["epsilon"]["value"]) == 0.0
    assert data["verdicts"]["quantum"]["verdict"] == "consistent"


def test_analyze_reads_stdin(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    _, table, _ = _run(capsys, "predict", "--inequality", "C7bar")
    monkeypatch.setattr(sys, "stdin", io.StringIO(table))
    code, out, _ = _run(capsys, "analyze", "--format", "csv")
    assert code == EXIT_OK
    header = "inequality,S,S_error,bound,value,verdict,significance"
    assert out.splitlines()[0] == header
    assert "qlm" not in out


def test_analyze_inequality_mismatch(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    table = _write(tmp_path / "table.json", capsys, "predict", "--inequality", "C7")
    code, _, err = _run(
        capsys, "analyze", "--in", str(table), "--inequality", "C7bar"
    )
    assert code == EXIT_VALIDATION
    assert "C7bar" in err


def test_report_round_trip(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    table = _write(tmp_path / "table.json", capsys, "predict", "--inequality", "C7")
    report = _write(tmp_path / "report.json", capsys, "analyze", "--in", str(table))
    code, out, _ = _run(capsys, "report", "--in", str(report))
    assert code == EXIT_OK
    assert "S(C7) = 3.318" in out
    assert "| nchv" in out
    tables, loaded = load_tables(str(report))
    assert loaded is not None
    assert loaded.verdict("nchv").verdict.value == "exceeds"
    assert len(tables[0].rows) == 7

    code, out, _ = _run(capsys, "report", "--in", str(table), "--format", "csv")
    assert code == EXIT_OK
    assert out.startswith("inequality,context,target,probability,error,theory\n")


def test_combine_simulations(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    c7 = _write(tmp_path / "c7.json", capsys, "simulate", "--inequality", "C7")
    c7bar = _write(
        tmp_path / "c7bar.json",
        capsys,
        "simulate",
        "--inequality",
        "C7bar",
        "--noise",
        "depolarizing:0.99",
        "--seed",
        "1",
    )
    code, out, _ = _run(capsys, "combine", "--in", str(c7), "--in", str(c7bar))
    assert code == EXIT_OK
    data = json.loads(out)
    validate_document(data, "report")
    assert data["inequality"] == "product"
    assert 6.9 < float(data["S"]) < 7.05
    assert data["epsilon"]["alpha"] == 6
    assert len(data["epsilon"]["terms"]) == 49 * 15
    assert data["epsilon"]["terms"][0]["measurement"] == [1, 1]
    assert [t["inequality"] for t in data["tables"]] == ["C7", "C7bar"]
    assert data["verdicts"]["nchv"]["verdict"] == "exceeds"


def test_combine_published_columns(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    c7 = _write(tmp_path / "c7.json", capsys, "simulate", "--dataset", "chile-c7")
    c7bar = _write(
        tmp_path / "c7bar.json", capsys, "simulate", "--dataset", "chile-c7bar"
    )
    assert json.loads(c7.read_text())["meta"]["inferred_totals"] is True
    code, out, _ = _run(capsys, "combine", "--in", str(c7bar), "--in", str(c7))
    assert code == EXIT_OK
    data = json.loads(out)
    assert abs(float(data["S"]) - 6.984) <= 0.005
    assert data["inferred"] is True
    assert data["verdicts"]["mnchv"]["verdict"] == "exceeds"


def test_published_c7_uses_quoted_error(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    counts = _write(tmp_path / "c7.json", capsys, "simulate", "--dataset", "chile-c7")
    assert json.loads(counts.read_text())["meta"]["published_S_error"] == "0.003"
    report = _write(tmp_path / "report.json", capsys, "analyze", "--in", str(counts))
    data = json.loads(report.read_text())
    validate_document(data, "report")
    assert float(data["quoted_S_error"]) == 0.003
    assert float(data["S_error"]) > 0.007
    assert data["verdicts"]["qlm"]["verdict"] == "exceeds"
    _, loaded = load_tables(str(report))
    assert loaded is not None
    assert loaded.quoted_s_error == 0.003

    code, out, _ = _run(capsys, "report", "--in", str(report))
    assert code == EXIT_OK
    assert "(quoted ± 0.003)" in out


def test_simulate_every_dataset(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    for name in ("chile-c7", "italy-c7", "chile-c7bar", "italy-c7bar"):
        path = tmp_path / f"{name}.json"
        counts = _write(path, capsys, "simulate", "--dataset", name)
        validate_document(json.loads(counts.read_text()), "counts")
        code, out, err = _run(capsys, "analyze", "--in", str(counts))
        assert code == EXIT_OK, err
        assert json.loads(out)["inferred"] is True


def test_product_report_round_trip(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    c7 = _write(tmp_path / "c7.json", capsys, "simulate", "--dataset", "italy-c7")
    c7bar = _write(
        tmp_path / "c7bar.json", capsys, "simulate", "--dataset", "italy-c7bar"
    )
    report = _write(
        tmp_path / "report.json", capsys, "combine", "--in", str(c7), "--in", str(c7bar)
    )
    tables, loaded = load_tables(str(report))
    assert loaded is not None
    assert [t.inequality.value for t in tables] == ["C7", "C7bar"]
    assert len(loaded.epsilon.terms) == 49 * 15
    term = loaded.epsilon.terms[0]
    assert term.measurement == (1, 1)
    assert term.context_a.label == "(1,2)x(1,3,5)"
    assert loaded.quoted_s_error is not None


def test_counts_with_wrong_target(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    counts = _write(tmp_path / "counts.json", capsys, "simulate", "--seed", "5")
    data = json.loads(counts.read_text())
    first = data["contexts"][0]
    assert first["measurements"] == [1, 2]
    first["measurements"] = [2, 1]
    counts.write_text(json.dumps(data))
    code, _, err = _run(capsys, "analyze", "--in", str(counts))
    assert code == EXIT_VALIDATION
    assert "expected measurement 1" in err

    first["target"] = "01"
    counts.write_text(json.dumps(data))
    code, _, err = _run(capsys, "analyze", "--in", str(counts))
    assert code == EXIT_OK, err


def test_combine_needs_both_inequalities(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    c7 = _write(tmp_path / "c7.json", capsys, "predict", "--inequality", "C7")
    code, _, err = _run(capsys, "combine", "--in", str(c7), "--in", str(c7))
    assert code == EXIT_VALIDATION
    assert "one C7 and one C7bar" in err


def test_malformed_json(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(capsys, "analyze", "--in", str(bad))
    assert code == EXIT_VALIDATION
    assert f"{bad}: $: malformed JSON" in err


def test_schema_violation_names_path(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    counts = _write(
        tmp_path / "counts.json", capsys, "simulate", "--mean-counts", "100"
    )
    data = json.loads(counts.read_text())
    data["contexts"][2]["outcomes"]["rest"] = -4
    counts.write_text(json.dumps(data))
    code, _, err = _run(capsys, "analyze", "--in", str(counts))
    assert code == EXIT_VALIDATION
    assert "$.contexts[2].outcomes" in err


def test_table_probability_must_match_outcome(tmp_path: Path) -> None:
    path = tmp_path / "table.json"
    code = main(["predict", "--inequality", "C7", "--out", str(path)])
    assert code == EXIT_OK
    data = json.loads(path.read_text())
    data["rows"][1]["probability"] = "0.9"
    path.write_text(json.dumps(data))
    with pytest.raises(SchemaError) as excinfo:
        load_tables(str(path))
    assert excinfo.value.path.startswith("$.rows[1]")


def test_missing_file(capsys: pytest.CaptureFixture) -> None:
    code, _, _ = _run(capsys, "report", "--in", "/nonexistent/report.json")
    assert code == EXIT_VALIDATION


def test_invalid_arguments(capsys: pytest.CaptureFixture) -> None:
    assert _run(capsys, "simulate", "--seed", "-1")[0] == EXIT_VALIDATION
    assert _run(capsys, "simulate", "--mean-counts", "0")[0] == EXIT_VALIDATION
    assert _run(capsys, "simulate", "--noise", "depolarizing:2")[0] == EXIT_VALIDATION
    assert _run(capsys, "simulate", "--dataset", "atlantis")[0] == EXIT_VALIDATION
    assert _run(capsys, "bounds", "--inequality", "C7", "--tol", "0")[0] == (
        EXIT_VALIDATION
    )


def test_thread_environment_is_validated(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setenv("CONTEXT_TOOLKIT_THREADS", "zero")
    code, _, err = _run(capsys, "simulate", "--mean-counts", "100")
    assert code == EXIT_VALIDATION
    assert "CONTEXT_TOOLKIT_THREADS" in err


def test_convergence_failure_exit_code(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    cli = importlib.import_module("contextuality_cli.main")

    def fail(*_args, **_kwargs):
        raise ConvergenceError(3.3, 3.4, 100)

    monkeypatch.setattr(cli, "lovasz_theta", fail)
    code, _, err = _run(capsys, "bounds", "--inequality", "C7")
    assert code == EXIT_CONVERGENCE
    assert "did not converge" in err


def test_verbose_logging(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "bounds", "--inequality", "C7", "-v")
    assert code == EXIT_OK
    assert "INFO" in err


def test_json_path() -> None:
    assert json_path([]) == "$"
    assert json_path(["rows", 3, "outcomes"]) == "$.rows[3].outcomes"
