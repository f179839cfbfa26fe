from __future__ import annotations

import csv
import io
import math
from typing import List, Optional, Sequence

from probability_table import Inequality, ProbabilityRow, ProbabilityTable

from .report import AnalysisReport

DECIMALS = 3


def _fixed(value: float, decimals: int = DECIMALS) -> str:
    return f"{value:.{decimals}f}"


def _event(row: ProbabilityRow) -> str:
    bits = ",".join(str(bit) for bit in row.context.target)
    places = ",".join(str(m) for m in row.context.measurements)
    return f"P({bits}|{places})"


def _measured(row: ProbabilityRow) -> str:
    if row.record is None and row.error == 0.0:
        return _fixed(row.probability)
    return f"{_fixed(row.probability)} ± {_fixed(row.error)}"


def _markdown(header: Sequence[str], body: Sequence[Sequence[str]]) -> str:
    widths = [
        max(len(cells[i]) for cells in [list(header)] + [list(b) for b in body])
        for i in range(len(header))
    ]

    def line(cells: Sequence[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    rule = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([line(header), rule] + [line(cells) for cells in body]) + "\n"


def _inequality_name(inequality: Inequality) -> str:
    return {
        Inequality.C7: "S(C7)",
        Inequality.C7BAR: "S(C7bar)",
        Inequality.PRODUCT: "S(C7 x C7bar)",
    }[inequality]


def render_table_markdown(table: ProbabilityTable) -> str:
    """Context, probability (with error when measured) and theory, one row each."""
    body: List[List[str]] = []
    total = 0.0
    variance = 0.0
    theory_total: Optional[float] = 0.0
    for row in table.rows:
        total += row.probability
        variance += row.variance
        if row.theory is None:
            theory_total = None
        elif theory_total is not None:
            theory_total += row.theory
        theory = "-" if row.theory is None else _fixed(row.theory)
        body.append([_event(row), _measured(row), theory])
    measured_sum = (
        _fixed(total)
        if variance == 0.0 and all(r.record is None for r in table.rows)
        else f"{_fixed(total)} ± {_fixed(math.sqrt(variance))}"
    )
    body.append(
        [
            _inequality_name(table.inequality),
            measured_sum,
            "-" if theory_total is None else _fixed(theory_total),
        ]
    )
    text = _markdown(["Context", "Probability", "Theory"], body)
    if table.source.inferred:
        text += "\nCount totals inferred from published errors.\n"
    return text


def _sigma(value: float) -> str:
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return f"{value:+.2f}σ"


def render_report_markdown(report: AnalysisReport) -> str:
    parts = [render_table_markdown(table) for table in report.tables]
    summary = [
        [
            name,
            _fixed(value),
            report.verdicts[name].verdict.value,
            _sigma(report.verdicts[name].significance),
        ]
        for name, value in report.bounds.named()
        if value is not None
    ]
    quoted = ""
    if report.quoted_s_error is not None:
        quoted = f" (quoted ± {_fixed(report.quoted_s_error)})"
    parts.append(
        f"{_inequality_name(report.inequality)} = "
        f"{_fixed(report.s_value)} ± {_fixed(report.s_error)}{quoted}, "
        f"epsilon = {report.epsilon.epsilon:.4f}\n"
    )
    parts.append(_markdown(["Bound", "Value", "Verdict", "Significance"], summary))
    return "\n".join(parts)


def render_table_csv(table: ProbabilityTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["inequality", "context", "target", "probability", "error", "theory"]
    )
    for row in table.rows:
        writer.writerow(
            [
                table.inequality.value,
                row.context.label,
                row.context.target_string,
                repr(row.probability),
                repr(row.error),
                "" if row.theory is None else repr(row.theory),
            ]
        )
    return buffer.getvalue()


def render_report_csv(report: AnalysisReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["inequality", "S", "S_error", "bound", "value", "verdict", "significance"]
    )
    for name, value in report.bounds.named():
        if value is None:
            continue
        verdict = report.verdicts[name]
        writer.writerow(
            [
                report.inequality.value,
                repr(report.s_value),
                repr(report.s_error),
                name,
                repr(value),
                verdict.verdict.value,
                repr(verdict.significance),
            ]
        )
    return buffer.getvalue()


__all__ = [
    "render_report_csv",
    "render_report_markdown",
    "render_table_csv",
    "render_table_markdown",
]
