from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from exgraph import (
    DEFAULT_SDP_GAP_TOL,
    ODD_HOLE_CAP,
    ConvergenceError,
    ExclusivityGraph,
    complement,
    cycle_graph,
    is_nonclassical,
    lovasz_theta,
    odd_cycle_theta_closed_form,
    or_product,
    theta_product_identity,
)
from mnchv_analysis import (
    DEFAULT_BOUND_TOLERANCE,
    DEFAULT_SIGNIFICANCE,
    EXCLUSIVITY_BOUND,
    AnalysisReport,
    combine_product,
    make_report,
    qlm_bound_c7,
    render_report_csv,
    render_report_markdown,
    render_table_csv,
    render_table_markdown,
)
from photon_simulation import (
    apply_noise,
    parse_noise_spec,
    published_column,
    records_to_json,
    sample_counts,
    synthesize_counts,
)
from probability_table import (
    CYCLE_LENGTH,
    Inequality,
    InvalidArgumentError,
    ProbabilityRow,
    ProbabilityTable,
    standard_contexts,
)
from quantum_realization import (
    VectorRealization,
    build_realization,
    context_probability,
    ideal_table,
    realization_graph,
)

from .config import DEFAULT_MEAN_COUNTS, RunConfig
from .documents import (
    STDIO,
    bounds_to_json,
    dump_json,
    load_tables,
    read_json,
    real,
    realization_from_json,
    realization_to_json,
    report_to_json,
    table_to_json,
    write_output,
)

PROG = "contextuality-toolkit"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3

logger = logging.getLogger(__name__)


def _inequality(text: str) -> Inequality:
    try:
        return Inequality.parse(text)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-v info, -vv debug)",
    )
    common.add_argument("--out", default=STDIO, help="Output file ('-' for stdout)")

    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Bounds, predictions, simulations and MNCHV analysis for the "
        "C7, C7bar and product noncontextuality inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", parents=[common], help="alpha, theta and QLM")
    bounds.add_argument("--inequality", type=_inequality, required=True)
    bounds.add_argument("--tol", type=float, default=DEFAULT_SDP_GAP_TOL)
    bounds.add_argument("--format", choices=("json", "markdown"), default="json")

    predict = sub.add_parser(
        "predict", parents=[common], help="Ideal quantum probabilities"
    )
    predict.add_argument("--inequality", type=_inequality, required=True)
    predict.add_argument("--realization", help="Realization JSON (default: built in)")
    predict.add_argument(
        "--format",
        choices=("json", "markdown", "csv", "realization"),
        default="json",
        help="realization writes the state and measurement vectors used",
    )

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Photon counts with noise"
    )
    simulate.add_argument("--inequality", type=_inequality, default=Inequality.C7)
    simulate.add_argument("--realization", help="Realization JSON (default: built in)")
    simulate.add_argument(
        "--noise", default="none", help="e.g. jitter:0.02+depolarizing:0.99"
    )
    simulate.add_argument("--mean-counts", type=float, default=DEFAULT_MEAN_COUNTS)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument(
        "--dataset", help="Reconstruct counts of a published column instead"
    )
    simulate.add_argument("--format", choices=("json",), default="json")

    analyze = sub.add_parser(
        "analyze", parents=[common], help="S, epsilon and verdicts for one table"
    )
    analyze.add_argument("--in", dest="inputs", default=STDIO)
    analyze.add_argument("--inequality", type=_inequality)
    analyze.add_argument("--tol", type=float, default=DEFAULT_SDP_GAP_TOL)
    analyze.add_argument("--significance", type=float, default=DEFAULT_SIGNIFICANCE)
    analyze.add_argument(
        "--format", choices=("json", "markdown", "csv"), default="json"
    )

    combine = sub.add_parser(
        "combine", parents=[common], help="Product of a C7 and a C7bar experiment"
    )
    combine.add_argument("--in", dest="inputs", action="append", required=True)
    combine.add_argument("--significance", type=float, default=DEFAULT_SIGNIFICANCE)
    combine.add_argument(
        "--format", choices=("json", "markdown", "csv"), default="json"
    )

    report = sub.add_parser(
        "report", parents=[common], help="Render a counts, table or report file"
    )
    report.add_argument("--in", dest="inputs", default=STDIO)
    report.add_argument(
        "--format", choices=("json", "markdown", "csv"), default="markdown"
    )
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _graph(inequality: Inequality) -> ExclusivityGraph:
    if inequality is Inequality.PRODUCT:
        cycle = cycle_graph(CYCLE_LENGTH)
        return or_product(cycle, complement(cycle))
    return realization_graph(inequality)


def _closed_form(inequality: Inequality) -> float:
    if inequality is Inequality.C7:
        return odd_cycle_theta_closed_form(CYCLE_LENGTH)
    if inequality is Inequality.C7BAR:
        return odd_cycle_theta_closed_form(CYCLE_LENGTH, complemented=True)
    return theta_product_identity(CYCLE_LENGTH)


def _realization(config: RunConfig, inequality: Inequality) -> VectorRealization:
    if config.realization is None:
        return build_realization(inequality)
    realization = realization_from_json(
        read_json(config.realization), config.realization
    )
    if not realization.matches(inequality):
        raise InvalidArgumentError(
            f"{config.realization} does not realize {inequality.value}"
        )
    return realization


def _report_tolerance(config: RunConfig) -> float:
    return max(DEFAULT_BOUND_TOLERANCE, config.tol)


def _render_report(report: AnalysisReport, output_format: str) -> str:
    if output_format == "markdown":
        return render_report_markdown(report)
    if output_format == "csv":
        return render_report_csv(report)
    return dump_json(report_to_json(report))


def _render_table(table: ProbabilityTable, output_format: str) -> str:
    if output_format == "markdown":
        return render_table_markdown(table)
    if output_format == "csv":
        return render_table_csv(table)
    return dump_json(table_to_json(table))


def _with_theory(table: ProbabilityTable) -> ProbabilityTable:
    """Fill missing theory values of the inequality's own contexts."""
    if all(row.theory is not None for row in table.rows):
        return table
    known = {c.key for c in standard_contexts(table.inequality)}
    realization = build_realization(table.inequality)
    rows: List[ProbabilityRow] = []
    for row in table.rows:
        if row.theory is None and row.context.key in known:
            row = ProbabilityRow(
                context=row.context,
                outcomes=row.outcomes,
                error=row.error,
                record=row.record,
                theory=context_probability(realization, row.context),
            )
        rows.append(row)
    return table.with_rows(rows)


# subcommands ------------------------------------------------------------------


def run_bounds(config: RunConfig) -> str:
    inequality = config.inequality
    graph = _graph(inequality)
    bounds = lovasz_theta(graph, tol=config.tol)
    qlm = qlm_bound_c7() if inequality is Inequality.C7 else None
    exclusivity = EXCLUSIVITY_BOUND if inequality is Inequality.PRODUCT else None
    nonclassical = is_nonclassical(graph) if graph.n <= ODD_HOLE_CAP else None
    closed_form = _closed_form(inequality)
    if config.output_format == "markdown":
        lines = [
            ("alpha", "-" if bounds.alpha is None else str(bounds.alpha)),
            ("theta (SDP)", f"{bounds.theta:.6f}"),
            ("theta (closed form)", f"{closed_form:.6f}"),
            ("QLM", "-" if qlm is None else f"{qlm:.4f}"),
            ("exclusivity", "-" if exclusivity is None else f"{exclusivity:g}"),
        ]
        width = max(len(name) for name, _ in lines)
        body = "\n".join(f"| {name.ljust(width)} | {value} |" for name, value in lines)
        title = (
            f"{inequality.value}: {graph.n} events, "
            f"{graph.edge_count} exclusivities"
        )
        return f"{title}\n\n{body}\n"
    return dump_json(
        bounds_to_json(
            inequality, graph, bounds, closed_form, qlm, exclusivity, nonclassical
        )
    )


def run_predict(config: RunConfig) -> str:
    if config.inequality is Inequality.PRODUCT:
        raise InvalidArgumentError("predict takes C7 or C7bar")
    realization = _realization(config, config.inequality)
    if config.output_format == "realization":
        return dump_json(realization_to_json(realization))
    table = ideal_table(realization, config.inequality)
    return _render_table(table, config.output_format)


def run_simulate(config: RunConfig) -> str:
    if config.dataset is not None:
        column = published_column(config.dataset)
        meta = {
            "dataset": column.name,
            "site": column.site,
            "inferred_totals": True,
            "published_S": real(column.s_value),
            "published_S_error": real(column.s_error),
            "published_epsilon": real(column.epsilon),
        }
        return dump_json(
            records_to_json(column.inequality, synthesize_counts(column), meta)
        )

    inequality = config.inequality
    if inequality is Inequality.PRODUCT:
        raise InvalidArgumentError(
            "simulate C7 and C7bar separately, then use combine"
        )
    realization = _realization(config, inequality)
    models = parse_noise_spec(config.noise)
    noisy = apply_noise(
        ideal_table(realization, inequality), models, realization, config.seed
    )
    sampled = sample_counts(noisy, config.mean_counts, config.seed)
    meta = {
        "seed": config.seed,
        "mean_counts": real(config.mean_counts),
        "noise": "+".join(model.describe() for model in models),
        "generator": "philox",
        "inferred_totals": False,
    }
    return dump_json(
        records_to_json(inequality, [row.record for row in sampled.rows], meta)
    )


def run_analyze(config: RunConfig) -> str:
    tables, _ = load_tables(config.inputs[0])
    if len(tables) != 1:
        raise InvalidArgumentError(
            f"{config.inputs[0]} holds {len(tables)} tables; use combine"
        )
    table = tables[0]
    if config.inequality is not None and config.inequality is not table.inequality:
        raise InvalidArgumentError(
            f"--inequality {config.inequality.value} but the file holds "
            f"{table.inequality.value}"
        )
    table = _with_theory(table)
    bounds = lovasz_theta(realization_graph(table.inequality), tol=config.tol)
    report = make_report(
        table,
        bounds,
        threshold=config.significance,
        tol=_report_tolerance(config),
    )
    return _render_report(report, config.output_format)


def run_combine(config: RunConfig) -> str:
    if len(config.inputs) != 2:
        raise InvalidArgumentError(
            f"combine needs two --in files, got {len(config.inputs)}"
        )
    by_inequality: Dict[Inequality, List[ProbabilityTable]] = {}
    for path in config.inputs:
        tables, _ = load_tables(path)
        for table in tables:
            by_inequality.setdefault(table.inequality, []).append(table)
    c7 = by_inequality.get(Inequality.C7, [])
    c7bar = by_inequality.get(Inequality.C7BAR, [])
    if len(c7) != 1 or len(c7bar) != 1:
        raise InvalidArgumentError(
            f"combine needs one C7 and one C7bar table, got {len(c7)} and {len(c7bar)}"
        )
    report = combine_product(
        _with_theory(c7[0]),
        _with_theory(c7bar[0]),
        threshold=config.significance,
        tol=_report_tolerance(config),
    )
    return _render_report(report, config.output_format)


def run_report(config: RunConfig) -> str:
    tables, report = load_tables(config.inputs[0])
    if report is not None:
        return _render_report(report, config.output_format)
    return _render_table(tables[0], config.output_format)


COMMANDS: Dict[str, Callable[[RunConfig], str]] = {
    "bounds": run_bounds,
    "predict": run_predict,
    "simulate": run_simulate,
    "analyze": run_analyze,
    "combine": run_combine,
    "report": run_report,
}


def run(config: RunConfig) -> None:
    logger.info("running %s", config.subcommand)
    text = COMMANDS[config.subcommand](config)
    write_output(text, config.output)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    _configure_logging(args.verbose)
    try:
        run(RunConfig.from_namespace(args))
    except ConvergenceError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
