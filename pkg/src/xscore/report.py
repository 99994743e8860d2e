"""Deterministic text renderings: leaderboards, subset tables, analysis reports, SVG scatter.

No timestamps and no locale-dependent formatting; the same input always gives
the same bytes.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from html import escape

from .analysis import CorrelationReport, ElementAssociation
from .subset import Objective, SubsetReport

FORMATS = ("markdown", "csv")


def _fmt(x: float | None, digits: int) -> str:
    if x is None:
        return "n/a"
    s = f"{x:.{digits}f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def fmt3(x: float | None) -> str:
    return _fmt(x, 3)


def _markdown(header: Sequence[str], rows: Sequence[Sequence[str]], right_from: int = 1) -> str:
    align = ["---" if i < right_from else "---:" for i in range(len(header))]
    lines = ["| " + " | ".join(header) + " |", "| " + " | ".join(align) + " |"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header, rows, fmt: str, right_from: int = 1) -> str:
    if fmt == "markdown":
        return _markdown(header, rows, right_from)
    if fmt == "csv":
        return _csv(header, rows)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def emit_leaderboard(records, fmt: str = "markdown", include_normalized: bool = True) -> str:
    """Ranked table with 3-decimal cells: rank, model, normalized cells, mean, variance, xscore.

    Records with out-of-range normalized cells get their datasets listed in a
    trailing ``flags`` column (only present when some record is flagged).
    """
    records = sorted(records, key=lambda r: r.rank)
    datasets = records[0].datasets if records else ()
    flagged = any(r.out_of_range for r in records)
    header = ["rank", "model"]
    if include_normalized:
        header += list(datasets)
    header += ["mean", "variance", "xscore"]
    if flagged:
        header.append("flags")
    rows = []
    for r in records:
        row = [str(r.rank), r.model]
        if include_normalized:
            row += [fmt3(x) for x in r.normalized]
        row += [fmt3(r.mean), fmt3(r.variance), fmt3(r.xscore)]
        if flagged:
            row.append(" ".join(f"out-of-range:{d}" for d in r.out_of_range) or "-")
        rows.append(row)
    return _table(header, rows, fmt, right_from=2)


def emit_subset_report(
    reports: dict[Objective, SubsetReport],
    reference: Sequence[str] | None = None,
    fmt: str = "markdown",
) -> str:
    """Summary per objective plus the full candidate table with every objective's value.

    Fidelity values are printed with 6 decimals so near-ties stay visible.
    """
    first = next(iter(reports.values()))
    ref = tuple(sorted(reference)) if reference else None
    summary_header = ["objective", "direction", "best subset", "best value"]
    if ref:
        summary_header += [
            "reference value",
            "reference position",
            "reference tied best",
            "reference is winner",
        ]
    summary = []
    for obj, rep in reports.items():
        row = [
            obj.value,
            "max" if obj.maximize else "min",
            " + ".join(rep.best.datasets),
            _fmt(rep.best.fidelity, 6),
        ]
        if ref:
            cand = rep.find(ref)
            row += [
                _fmt(cand.fidelity, 6) if cand else "n/a",
                f"{rep.position(ref)}/{len(rep.candidates)}" if cand else "n/a",
                "yes" if rep.tied_with_best(ref) else "no",
                "yes" if rep.best.datasets == ref else "no",
            ]
        summary.append(row)

    # canonical lexicographic order for the detail table
    subsets = sorted(c.datasets for c in first.candidates)
    values = {
        obj: {c.datasets: c.fidelity for c in rep.candidates} for obj, rep in reports.items()
    }
    detail_header = ["subset", *(o.value for o in reports)]
    detail = [
        [" + ".join(s), *(_fmt(values[o][s], 6) for o in reports)] for s in subsets
    ]
    if fmt == "csv":
        return _csv(detail_header, detail)
    parts = [
        f"# Proxy subset search (k={first.k}, lambda={first.lam:g}, "
        f"{len(first.candidates)} candidates)",
        "",
        "kendall_tau: ties count as neither concordant nor discordant. "
        "spearman_rho: average ranks for ties. "
        "Fidelity ties go to the lexicographically smallest subset.",
        "",
    ]
    if ref:
        parts += [f"Reference subset: {' + '.join(ref)}", ""]
    parts += [_markdown(summary_header, summary, right_from=3), "## All candidates", ""]
    parts.append(_markdown(detail_header, detail))
    return "\n".join(parts)


def emit_correlation_report(report: CorrelationReport, fmt: str = "markdown") -> str:
    header = ["dataset", "n", "pearson_r", "spearman_rho", "ols_slope", "ols_intercept"]
    row = [
        report.dataset,
        str(report.n),
        _fmt(report.pearson_r, 4),
        _fmt(report.spearman_rho, 4),
        _fmt(report.ols_slope, 6),
        _fmt(report.ols_intercept, 6),
    ]
    table = _table(header, [row], fmt)
    if fmt == "csv":
        return table
    return (
        f"# Accuracy on {report.dataset} vs xScore\n\n"
        "Spearman uses average ranks for ties; the OLS line regresses xscore on accuracy.\n\n"
        + table
    )


def emit_associations(assocs: Sequence[ElementAssociation], fmt: str = "markdown") -> str:
    header = [
        "element",
        "n_present",
        "n_absent",
        "mean_present",
        "mean_absent",
        "difference",
        "point_biserial_r",
    ]
    rows = [
        [
            a.element,
            str(a.n_present),
            str(a.n_absent),
            fmt3(a.mean_xscore_present),
            fmt3(a.mean_xscore_absent),
            fmt3(a.difference),
            _fmt(a.point_biserial_r, 3),
        ]
        for a in assocs
    ]
    return _table(header, rows, fmt)


def emit_scatter(
    report: CorrelationReport,
    points: Sequence[tuple[float, float, str]],
    width: int = 640,
    height: int = 480,
) -> str:
    """Standalone SVG: one circle per (accuracy, xscore, model) point plus the OLS line."""
    left, right, top, bottom = 70, 20, 30, 60
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = _padded(min(xs), max(xs))
    y0, y1 = _padded(min(ys), max(ys))
    pw, ph = width - left - right, height - top - bottom

    def sx(x: float) -> float:
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    def n(v: float) -> str:
        return f"{v:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<g id="axes" stroke="black" stroke-width="1">'
        f'<path d="M {left} {top} V {top + ph} H {left + pw}" fill="none"/></g>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(
            f'<text class="tick" x="{n(sx(xv))}" y="{top + ph + 16}" '
            f'text-anchor="middle">{xv:.1f}</text>'
        )
        out.append(
            f'<text class="tick" x="{left - 6}" y="{n(sy(yv) + 4)}" '
            f'text-anchor="end">{yv:.2f}</text>'
        )
    out.append(
        f'<text id="xlabel" x="{n(left + pw / 2)}" y="{height - 15}" '
        f'text-anchor="middle">{escape(report.dataset)} accuracy (%)</text>'
    )
    out.append(
        f'<text id="ylabel" x="18" y="{n(top + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 18 {n(top + ph / 2)})">xScore</text>'
    )
    out.append(
        f'<line class="fit" x1="{n(sx(x0))}" y1="{n(sy(report.ols_intercept + report.ols_slope * x0))}" '
        f'x2="{n(sx(x1))}" y2="{n(sy(report.ols_intercept + report.ols_slope * x1))}" '
        f'stroke="#1f77b4" stroke-width="2" clip-path="url(#plot)"/>'
    )
    out.append(
        f'<clipPath id="plot"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></clipPath>'
    )
    for x, y, model in points:
        out.append(
            f'<circle class="point" cx="{n(sx(x))}" cy="{n(sy(y))}" r="4" fill="#d62728">'
            f"<title>{escape(model)}</title></circle>"
        )
        out.append(
            f'<text class="label" x="{n(sx(x) + 6)}" y="{n(sy(y) - 6)}" font-size="10">'
            f"{escape(model)}</text>"
        )
    out.append(
        f'<text x="{n(left + pw / 2)}" y="18" text-anchor="middle">'
        f"pearson r = {report.pearson_r:.3f}, spearman rho = {report.spearman_rho:.3f}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _padded(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo or 1.0
    return lo - 0.05 * span, hi + 0.05 * span
