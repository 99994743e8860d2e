"""Readers and writers for accuracy CSVs, element CSVs, parameter CSVs and anchor files.

Accuracy CSV::

    model,cifar-10,imagenette-160,...
    ConvMixer,94.52,89.25,...

Element CSV has the same shape with ``1``/``0`` cells. Anchor files are JSON::

    {"source": "...", "anchors": [{"dataset": "cifar-10", "min": 91.97, "max": 95.19}, ...]}

Numbers are written with ``repr`` so every float survives a round trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import re
from collections.abc import Mapping
from importlib import resources

from .analysis import ElementMatrix
from .errors import ParseError
from .matrix import AccuracyMatrix, AnchorTable, build_matrix

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")

FIXTURES = {
    "table3": "table3.csv",
    "table5": "table5.csv",
    "table1-params": "table1_params.csv",
    "anchors-table3": "anchors_table3.json",
}

# Fixture names -> labels as printed in the source tables.
DATASET_LABELS = {
    "cifar-10": "CIFAR-10",
    "imagenette-160": "Imagenette-160",
    "cifar-100": "CIFAR-100",
    "ham10k": "HAM10k",
    "stanford-dogs": "Dogs (Stanford Dogs)",
    "miniplaces": "Miniplaces",
    "indoor-67": "Indoor-67 (MIT Indoor-67)",
}

MODEL_ALIASES = {
    "EffNet": "EfficientNet",
    "ConvNeXt": "ConvNext",
    "StarNet": "StartNet",
}


def fixture_text(name: str) -> str:
    try:
        filename = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}") from None
    return resources.files("xscore.data").joinpath(filename).read_text(encoding="utf-8")


def _rows(text: str) -> list[tuple[int, list[str]]]:
    """CSV rows paired with their 1-based line numbers, blank lines dropped."""
    if text.startswith("\ufeff"):
        text = text[1:]
    out = []
    reader = csv.reader(io.StringIO(text))
    try:
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            out.append((reader.line_num, row))
    except csv.Error as exc:
        raise ParseError(str(exc), reader.line_num) from None
    return out


def _header(rows: list[tuple[int, list[str]]], what: str) -> list[str]:
    if not rows:
        raise ParseError(f"empty {what} file", 1)
    line, header = rows[0]
    if header[0].strip() != "model":
        raise ParseError(f"first header cell must be 'model', got {header[0]!r}", line, 1)
    for col, name in enumerate(header[1:], start=2):
        if not name.strip():
            raise ParseError("empty column name", line, col)
    return [h.strip() for h in header]


def _number(cell: str, line: int, col: int) -> float:
    text = cell.strip()
    if not _NUMBER.fullmatch(text):
        raise ParseError(f"not a dot-decimal number: {cell!r}", line, col)
    return float(text)


def parse_wide_rows(
    text: str, what: str = "accuracy"
) -> tuple[list[str], list[tuple[str, list[str | None], int]]]:
    rows = _rows(text)
    header = _header(rows, what)
    body = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} cells, found {len(row)}",
                line,
                min(len(row), len(header)) + 1,
            )
        body.append((row[0].strip(), [c if c.strip() else None for c in row[1:]], line))
    return header[1:], body


def parse_accuracy_rows(text: str) -> list[tuple[str, dict[str, float]]]:
    """Parse an accuracy CSV without matrix-level checks (any row count).

    Empty cells are omitted from the per-model mapping.
    """
    return _accuracy_rows(text)[1]


def _accuracy_rows(text: str) -> tuple[list[str], list[tuple[str, dict[str, float]]]]:
    datasets, body = parse_wide_rows(text)
    out = []
    for model, cells, line in body:
        acc = {}
        for col, (d, c) in enumerate(zip(datasets, cells), start=2):
            if c is not None:
                acc[d] = _number(c, line, col)
        out.append((model, acc))
    return datasets, out


def parse_accuracy_table(
    text: str, params: Mapping[str, float] | None = None, label: str = "matrix"
) -> AccuracyMatrix:
    """Parse an accuracy CSV into a validated dense matrix (file order kept)."""
    datasets, rows = _accuracy_rows(text)
    records = [(model, d, v) for model, acc in rows for d, v in acc.items()]
    m = build_matrix(records, params=params, label=label)
    if m.datasets != tuple(datasets):
        # a column that is blank for the first model(s) would otherwise move
        m = m.select_datasets(datasets)
    return m


def emit_accuracy_table(matrix: AccuracyMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", *matrix.datasets])
    for model, row in zip(matrix.models, matrix.values):
        w.writerow([model, *(repr(v) for v in row)])
    return buf.getvalue()


def parse_params_table(text: str) -> dict[str, float]:
    rows = _rows(text)
    header = _header(rows, "parameter")
    if len(header) != 2:
        raise ParseError("parameter file needs exactly two columns: model,params_m", rows[0][0])
    out: dict[str, float] = {}
    for line, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(f"expected 2 cells, found {len(row)}", line)
        model = row[0].strip()
        if model in out:
            raise ParseError(f"duplicate model {model!r}", line, 1)
        out[model] = _number(row[1], line, 2)
    return out


def parse_element_table(text: str, aliases: Mapping[str, str] | None = None) -> ElementMatrix:
    """Parse a 0/1 element table; ``aliases`` renames models on the way in."""
    aliases = aliases or {}
    elements, body = parse_wide_rows(text, "element")
    models, flags = [], []
    for model, cells, line in body:
        row = []
        for col, c in enumerate(cells, start=2):
            value = (c or "").strip()
            if value not in ("0", "1"):
                raise ParseError(f"element flag must be 0 or 1, got {c!r}", line, col)
            row.append(value == "1")
        models.append(aliases.get(model, model))
        flags.append(tuple(row))
    if not models:
        raise ParseError("element table has no model rows", 1)
    return ElementMatrix(tuple(models), tuple(elements), tuple(flags))


def emit_element_table(elements: ElementMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", *elements.elements])
    for model, row in zip(elements.models, elements.flags):
        w.writerow([model, *("1" if f else "0" for f in row)])
    return buf.getvalue()


def emit_anchor_file(anchors: AnchorTable) -> str:
    doc = {
        "source": anchors.source,
        "anchors": [
            {"dataset": d, "min": a.min, "max": a.max} for d, a in anchors.entries.items()
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_anchor_file(text: str) -> AnchorTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("anchors"), list):
        raise ParseError("anchor file must be an object with an 'anchors' list")
    source = doc.get("source", "")
    if not isinstance(source, str):
        raise ParseError("'source' must be a string")
    pairs = []
    for i, entry in enumerate(doc["anchors"]):
        try:
            name, lo, hi = entry["dataset"], entry["min"], entry["max"]
        except (KeyError, TypeError):
            raise ParseError(f"anchor entry {i} needs dataset, min and max") from None
        if not isinstance(name, str) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in (lo, hi)
        ):
            raise ParseError(f"anchor entry {i} has wrongly typed fields")
        pairs.append((name, float(lo), float(hi)))
    return AnchorTable.from_pairs(pairs, source)
