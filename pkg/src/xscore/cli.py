"""Command-line front end.

Exit status: 0 on success, 1 for domain/validation errors, 2 for I/O and parse
errors (argparse usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats, report
from .analysis import correlate_accuracy_vs_xscore, element_associations
from .errors import ParseError, XScoreError
from .matrix import DEFAULT_RATIO_THRESHOLD, column_extrema, validate_comparability
from .scoring import DEFAULT_LAMBDA, check_lambda, rank, score_against_anchors, score_matrix
from .subset import REFERENCE_PROXY, Objective, select_all_objectives, select_proxy_subset


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_matrix(args: argparse.Namespace):
    params = formats.parse_params_table(_read(args.params)) if getattr(args, "params", None) else None
    return formats.parse_accuracy_table(_read(args.matrix), params=params, label=Path(args.matrix).name)


def _lambda(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return value


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_anchors(args: argparse.Namespace) -> None:
    matrix = _load_matrix(args)
    if args.datasets:
        matrix = matrix.select_datasets(args.datasets)
    anchors = column_extrema(matrix, source=args.source or matrix.label)
    _write(formats.emit_anchor_file(anchors), args.output)


def cmd_score(args: argparse.Namespace) -> None:
    matrix = _load_matrix(args)
    lam = check_lambda(args.lam)
    anchors = formats.parse_anchor_file(_read(args.anchors)) if args.anchors else None
    if matrix.params:
        for w in validate_comparability(matrix, args.ratio_threshold):
            print(f"warning: {w}", file=sys.stderr)
    records = score_matrix(matrix, anchors, lam)
    _write(report.emit_leaderboard(records, args.format), args.output)


def cmd_new_model(args: argparse.Namespace) -> None:
    lam = check_lambda(args.lam)
    anchors = formats.parse_anchor_file(_read(args.anchors))
    rows = formats.parse_accuracy_rows(_read(args.accuracies))
    if not rows:
        raise ParseError("accuracy file has no model rows")
    records = [
        score_against_anchors(acc, anchors, lam, model=model, ignore_unanchored=args.ignore_unanchored)
        for model, acc in rows
    ]
    for r in records:
        for d in r.out_of_range:
            print(
                f"warning: {r.model} on {d} normalizes outside [0, 1] against the frozen anchors",
                file=sys.stderr,
            )
    _write(report.emit_leaderboard(rank(records), args.format), args.output)


def cmd_select_subset(args: argparse.Namespace) -> None:
    matrix = _load_matrix(args)
    lam = check_lambda(args.lam)
    if args.objective == "all":
        reports = select_all_objectives(matrix, args.k, lam)
    else:
        obj = Objective.parse(args.objective)
        reports = {obj: select_proxy_subset(matrix, args.k, lam, obj)}
    reference = args.reference
    if reference is None and len(REFERENCE_PROXY) == args.k and set(REFERENCE_PROXY) <= set(matrix.datasets):
        reference = list(REFERENCE_PROXY)
    _write(report.emit_subset_report(reports, reference, args.format), args.output)


def cmd_correlate(args: argparse.Namespace) -> None:
    matrix = _load_matrix(args)
    records = score_matrix(matrix, lam=check_lambda(args.lam))
    corr = correlate_accuracy_vs_xscore(matrix, records, args.dataset)
    _write(report.emit_correlation_report(corr, args.format), args.output)
    if args.svg:
        by_model = {r.model: r.xscore for r in records}
        points = [(matrix.cell(m, args.dataset), by_model[m], m) for m in matrix.models]
        _write(report.emit_scatter(corr, points), args.svg)


def cmd_elements(args: argparse.Namespace) -> None:
    matrix = _load_matrix(args)
    elements = formats.parse_element_table(_read(args.elements), formats.MODEL_ALIASES)
    records = score_matrix(matrix, lam=check_lambda(args.lam))
    _write(report.emit_associations(element_associations(elements, records), args.format), args.output)


def cmd_fixture(args: argparse.Namespace) -> None:
    _write(formats.fixture_text(args.name), args.output)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xscore", description="Cross-dataset robustness scoring.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, matrix: bool = True, lam: bool = True) -> None:
        if matrix:
            sp.add_argument("matrix", help="accuracy CSV (model,<dataset>...)")
            sp.add_argument("--params", help="optional model,params_m CSV")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=_lambda, default=DEFAULT_LAMBDA,
                            help="variance penalty in [0, 1] (default %(default)s)")
        sp.add_argument("-o", "--output", help="output path (default stdout)")

    def fmt(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=report.FORMATS, default="markdown")

    sp = sub.add_parser("anchors", help="derive per-dataset (min, max) anchors from a matrix")
    common(sp, lam=False)
    sp.add_argument("--datasets", type=_csv_list, help="comma-separated subset of columns")
    sp.add_argument("--source", help="provenance label stored in the file")
    sp.set_defaults(func=cmd_anchors)

    sp = sub.add_parser("score", help="score and rank every model in a matrix")
    common(sp)
    fmt(sp)
    sp.add_argument("--anchors", help="frozen anchor file (default: the matrix's own extrema)")
    sp.add_argument("--ratio-threshold", type=float, default=DEFAULT_RATIO_THRESHOLD,
                    help="parameter-count ratio above which a comparability warning is printed")
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("new-model", help="score models against frozen anchors")
    sp.add_argument("accuracies", help="accuracy CSV with one row per new model")
    sp.add_argument("--anchors", required=True, help="frozen anchor file")
    sp.add_argument("--ignore-unanchored", action="store_true",
                    help="skip accuracies for datasets that have no anchor")
    common(sp, matrix=False)
    fmt(sp)
    sp.set_defaults(func=cmd_new_model)

    sp = sub.add_parser("select-subset", help="brute-force search for a proxy dataset subset")
    common(sp)
    fmt(sp)
    sp.add_argument("--k", type=int, required=True, help="subset size")
    sp.add_argument("--objective", default="all",
                    choices=["all", *(o.value for o in Objective)])
    sp.add_argument("--reference", type=_csv_list,
                    help="subset to report on (default: the published four-dataset proxy when it fits)")
    sp.set_defaults(func=cmd_select_subset)

    sp = sub.add_parser("correlate", help="correlate one dataset's accuracy with xScore")
    common(sp)
    fmt(sp)
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--svg", help="write a scatter plot with the OLS line here")
    sp.set_defaults(func=cmd_correlate)

    sp = sub.add_parser("elements", help="xScore association per architectural element")
    common(sp)
    fmt(sp)
    sp.add_argument("elements", help="element CSV (model,<element>... with 1/0 cells)")
    sp.set_defaults(func=cmd_elements)

    sp = sub.add_parser("fixture", help="print a bundled fixture")
    sp.add_argument("name", choices=sorted(formats.FIXTURES))
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except XScoreError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
