"""JSON documents read and written by the command line.

Every document is checked against ``schemas/<kind>.schema.json``. Floats are
written as their shortest round-tripping decimal string; counts stay integers.
"""

from __future__ import annotations

import json
import sys
from functools import lru_cache
from importlib.resources import files
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from exgraph import ExclusivityGraph, GraphBounds
from mnchv_analysis import (
    DEFAULT_BOUND_TOLERANCE,
    DEFAULT_SIGNIFICANCE,
    QLM_EXPRESSION,
    AnalysisReport,
    BoundVerdict,
    EpsilonBreakdown,
    ProductContext,
    ReportBounds,
    TDistanceTerm,
    Verdict,
    qlm_bound_c7,
)
from photon_simulation import probabilities_from_counts, records_from_json
from probability_table import (
    NORMALIZATION_TOLERANCE,
    Context,
    CountRecord,
    Inequality,
    ProbabilityRow,
    ProbabilityTable,
    TableSource,
)
from quantum_realization import VectorRealization

STDIO = "-"


class SchemaError(ValueError):
    """A document does not match its schema; ``path`` points into it."""

    def __init__(self, origin: str, path: str, message: str) -> None:
        super().__init__(f"{origin}: {path}: {message}")
        self.origin = origin
        self.path = path


def json_path(parts: Iterable[Any]) -> str:
    text = "$"
    for part in parts:
        text += f"[{part}]" if isinstance(part, int) else f".{part}"
    return text


@lru_cache(maxsize=None)
def load_schema(kind: str) -> Dict[str, Any]:
    resource = files(__package__) / "schemas" / f"{kind}.schema.json"
    return json.loads(resource.read_text(encoding="utf-8"))


def validate_document(data: Any, kind: str, origin: str = "<document>") -> None:
    validator = Draft202012Validator(load_schema(kind))
    error = best_match(validator.iter_errors(data))
    if error is not None:
        raise SchemaError(origin, json_path(error.absolute_path), error.message)


def real(value: float) -> str:
    return repr(float(value))


def optional_real(value: Optional[float]) -> Optional[str]:
    return None if value is None else real(value)


def read_json(path: str) -> Any:
    origin = "<stdin>" if path == STDIO else path
    try:
        if path == STDIO:
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            origin, "$", f"malformed JSON: {exc.msg} (line {exc.lineno})"
        )


def dump_json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, path: str) -> None:
    if path == STDIO:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


# tables -----------------------------------------------------------------------


def table_to_json(table: ProbabilityTable) -> Dict[str, Any]:
    return {
        "inequality": table.inequality.value,
        "source": {
            "kind": table.source.kind,
            "seed": table.source.seed,
            "path": table.source.path,
            "inferred": table.source.inferred,
            "quoted_S_error": optional_real(table.source.quoted_s_error),
        },
        "rows": [
            {
                "measurements": list(row.context.measurements),
                "target": row.context.target_string,
                "probability": real(row.probability),
                "error": real(row.error),
                "theory": optional_real(row.theory),
                "boundary": row.boundary,
                "outcomes": {label: real(p) for label, p in row.outcomes.items()},
                "counts": None if row.record is None else row.record.as_dict(),
            }
            for row in table.rows
        ],
    }


def _context(entry: Dict[str, Any]) -> Context:
    return Context(
        measurements=tuple(int(m) for m in entry["measurements"]),
        target=tuple(int(bit) for bit in entry["target"]),
    )


def table_from_json(
    data: Dict[str, Any], origin: str = "<document>"
) -> ProbabilityTable:
    validate_document(data, "table", origin)
    rows = []
    for index, entry in enumerate(data["rows"]):
        context = _context(entry)
        outcomes = {label: float(p) for label, p in entry["outcomes"].items()}
        if abs(sum(outcomes.values()) - 1.0) > NORMALIZATION_TOLERANCE:
            raise SchemaError(
                origin,
                json_path(["rows", index, "outcomes"]),
                "outcome probabilities do not sum to 1",
            )
        counts = entry.get("counts")
        record = None
        if counts is not None:
            record = CountRecord(
                context=context,
                basis_outcomes=tuple(counts),
                counts=tuple(int(c) for c in counts.values()),
            )
        theory = entry.get("theory")
        row = ProbabilityRow(
            context=context,
            outcomes=outcomes,
            error=float(entry["error"]),
            record=record,
            theory=None if theory is None else float(theory),
        )
        if abs(row.probability - float(entry["probability"])) > NORMALIZATION_TOLERANCE:
            raise SchemaError(
                origin,
                json_path(["rows", index, "probability"]),
                "probability disagrees with the target outcome",
            )
        rows.append(row)
    source = data["source"]
    quoted = source.get("quoted_S_error")
    return ProbabilityTable(
        inequality=Inequality.parse(data["inequality"]),
        rows=tuple(rows),
        source=TableSource(
            kind=source["kind"],
            seed=source.get("seed"),
            path=source.get("path"),
            inferred=bool(source.get("inferred", False)),
            quoted_s_error=None if quoted is None else float(quoted),
        ),
    )


def counts_from_json(
    data: Dict[str, Any], origin: str = "<document>"
) -> ProbabilityTable:
    validate_document(data, "counts", origin)
    inequality, records = records_from_json(data)
    meta = data.get("meta", {})
    inferred = bool(meta.get("inferred_totals", False))
    quoted = meta.get("published_S_error")
    return probabilities_from_counts(
        records,
        inequality=inequality,
        source=TableSource.ingested(
            origin,
            inferred=inferred,
            quoted_s_error=None if quoted is None else float(quoted),
        ),
    )


# reports ----------------------------------------------------------------------


def _term_to_json(term: TDistanceTerm) -> Dict[str, Any]:
    contexts: List[Any] = []
    for ctx in (term.context_a, term.context_b):
        if isinstance(ctx, ProductContext):
            contexts.append(
                [list(ctx.first.measurements), list(ctx.second.measurements)]
            )
        else:
            contexts.append(list(ctx.measurements))
    measurement: Any = term.measurement
    if isinstance(measurement, tuple):
        measurement = list(measurement)
    return {
        "measurement": measurement,
        "contexts": contexts,
        "T": real(term.value),
    }


def report_to_json(report: AnalysisReport) -> Dict[str, Any]:
    bounds = report.bounds
    qlm_expression = None
    if report.inequality is Inequality.C7 and bounds.qlm == qlm_bound_c7():
        qlm_expression = QLM_EXPRESSION
    return {
        "inequality": report.inequality.value,
        "S": real(report.s_value),
        "S_error": real(report.s_error),
        "quoted_S_error": optional_real(report.quoted_s_error),
        "bounds": {
            "nchv": bounds.nchv,
            "mnchv": real(bounds.mnchv),
            "quantum": real(bounds.quantum),
            "qlm": optional_real(bounds.qlm),
            "qlm_expression": qlm_expression,
            "exclusivity": optional_real(bounds.exclusivity),
        },
        "epsilon": {
            "value": real(report.epsilon.epsilon),
            "alpha": report.epsilon.alpha,
            "mnchv_bound": real(report.epsilon.mnchv_bound),
            "formula": report.epsilon.formula,
            "terms": [_term_to_json(term) for term in report.epsilon.terms],
        },
        "verdicts": {
            name: {
                "bound": real(verdict.bound),
                "verdict": verdict.verdict.value,
                "significance": real(verdict.significance),
                "p_value": real(verdict.p_value),
            }
            for name, verdict in report.verdicts.items()
        },
        "threshold": real(report.threshold),
        "tolerance": real(report.tolerance),
        "inferred": report.inferred,
        "tables": [table_to_json(table) for table in report.tables],
    }


def report_from_json(
    data: Dict[str, Any], origin: str = "<document>"
) -> AnalysisReport:
    validate_document(data, "report", origin)
    tables = tuple(
        table_from_json(entry, f"{origin} {json_path(['tables', i])}")
        for i, entry in enumerate(data.get("tables", []))
    )
    contexts = {c.key: c for table in tables for c in table.contexts}

    def lookup(measurements: List[Any], index: int) -> Union[Context, ProductContext]:
        if measurements and isinstance(measurements[0], list):
            first, second = measurements
            return ProductContext(lookup(first, index), lookup(second, index))
        key = frozenset(int(m) for m in measurements)
        if key not in contexts:
            raise SchemaError(
                origin,
                json_path(["epsilon", "terms", index, "contexts"]),
                f"context {sorted(key)} is not in the embedded tables",
            )
        return contexts[key]

    def measurement(value: Any) -> Union[int, Tuple[int, int]]:
        if isinstance(value, list):
            return (int(value[0]), int(value[1]))
        return int(value)

    eps = data["epsilon"]
    terms = tuple(
        TDistanceTerm(
            measurement=measurement(term["measurement"]),
            context_a=lookup(term["contexts"][0], i),
            context_b=lookup(term["contexts"][1], i),
            value=float(term["T"]),
        )
        for i, term in enumerate(eps["terms"])
    )
    epsilon = EpsilonBreakdown(
        terms=terms,
        epsilon=float(eps["value"]),
        alpha=int(eps["alpha"]),
        formula=eps.get("formula", ""),
    )
    b = data["bounds"]
    bounds = ReportBounds(
        nchv=int(b["nchv"]),
        mnchv=float(b["mnchv"]),
        quantum=float(b["quantum"]),
        qlm=None if b["qlm"] is None else float(b["qlm"]),
        exclusivity=None if b["exclusivity"] is None else float(b["exclusivity"]),
    )
    quoted = data.get("quoted_S_error")
    verdicts = {
        name: BoundVerdict(
            bound=float(v["bound"]),
            verdict=Verdict(v["verdict"]),
            significance=float(v["significance"]),
        )
        for name, v in data["verdicts"].items()
    }
    return AnalysisReport(
        inequality=Inequality.parse(data["inequality"]),
        s_value=float(data["S"]),
        s_error=float(data["S_error"]),
        bounds=bounds,
        epsilon=epsilon,
        verdicts=verdicts,
        threshold=float(data.get("threshold", DEFAULT_SIGNIFICANCE)),
        tolerance=float(data.get("tolerance", DEFAULT_BOUND_TOLERANCE)),
        tables=tables,
        quoted_s_error=None if quoted is None else float(quoted),
    )


# other documents --------------------------------------------------------------


def bounds_to_json(
    inequality: Inequality,
    graph: ExclusivityGraph,
    bounds: GraphBounds,
    closed_form: float,
    qlm: Optional[float],
    exclusivity: Optional[float],
    nonclassical: Optional[bool],
) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "inequality": inequality.value,
        "vertices": graph.n,
        "edges": graph.edge_count,
        "alpha": bounds.alpha,
        "theta": real(bounds.theta),
        "theta_closed_form": real(closed_form),
        "primal": real(bounds.primal),
        "dual": real(bounds.dual),
        "iterations": bounds.iterations,
        "qlm": optional_real(qlm),
        "exclusivity": optional_real(exclusivity),
    }
    if nonclassical is not None:
        document["nonclassical"] = nonclassical
    return document


def realization_from_json(
    data: Dict[str, Any], origin: str = "<document>"
) -> VectorRealization:
    validate_document(data, "realization", origin)
    return VectorRealization.from_json(data)


def realization_to_json(realization: VectorRealization) -> Dict[str, Any]:
    document = realization.to_json()
    document["state"] = [real(x) for x in document["state"]]
    document["vectors"] = {
        label: [real(x) for x in vec] for label, vec in document["vectors"].items()
    }
    return document


def classify(data: Any) -> str:
    """Tell report, table and counts documents apart by their required keys."""
    if isinstance(data, dict):
        if "verdicts" in data:
            return "report"
        if "rows" in data:
            return "table"
        if "contexts" in data:
            return "counts"
    return "counts"


def load_tables(
    path: str,
) -> Tuple[Tuple[ProbabilityTable, ...], Optional[AnalysisReport]]:
    """Tables held by a counts, table or report file, plus the report itself."""
    origin = "<stdin>" if path == STDIO else path
    data = read_json(path)
    kind = classify(data)
    if kind == "report":
        report = report_from_json(data, origin)
        return report.tables, report
    if kind == "table":
        return (table_from_json(data, origin),), None
    return (counts_from_json(data, origin),), None


__all__ = [
    "STDIO",
    "SchemaError",
    "bounds_to_json",
    "classify",
    "counts_from_json",
    "dump_json",
    "json_path",
    "load_schema",
    "load_tables",
    "read_json",
    "real",
    "realization_from_json",
    "realization_to_json",
    "report_from_json",
    "report_to_json",
    "table_from_json",
    "table_to_json",
    "validate_document",
    "write_output",
]
