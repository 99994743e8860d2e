"""Min-max normalization, per-model mean/variance, xScore and ranking.

A model's xScore is ``mean - lam * variance`` of its min-max normalized
accuracies across datasets. Variance uses the sample (N - 1) divisor.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace

from .errors import (
    AnchorMissing,
    DegenerateAnchor,
    InvalidLambda,
    MissingCell,
    TooFewDatasets,
)
from .matrix import AccuracyMatrix, AnchorTable, check_accuracy, column_extrema

DEFAULT_LAMBDA = 0.5


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidLambda(f"lambda must lie in [0, 1], got {lam!r}")
    return lam


@dataclass(frozen=True)
class NormalizedMatrix:
    """Normalized scores; values fall outside [0, 1] only under external anchors."""

    models: tuple[str, ...]
    datasets: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    anchors: AnchorTable

    def row(self, model: str) -> tuple[float, ...]:
        return self.values[self.models.index(model)]


@dataclass(frozen=True)
class ScoreRecord:
    model: str
    datasets: tuple[str, ...]
    normalized: tuple[float, ...]
    mean: float
    variance: float
    xscore: float
    lam: float
    rank: int = 0
    out_of_range: tuple[str, ...] = ()

    @property
    def flagged(self) -> bool:
        """True when any normalized cell fell outside [0, 1]."""
        return bool(self.out_of_range)


def _normalize_cell(value: float, lo: float, hi: float) -> float:
    return (value - lo) / (hi - lo)


def normalize(matrix: AccuracyMatrix, anchors: AnchorTable | None = None) -> NormalizedMatrix:
    """Min-max normalize each column against its anchor pair. No clipping.

    With ``anchors=None`` the bounds are the matrix's own column extrema.
    """
    if anchors is None:
        anchors = column_extrema(matrix)
    bounds = []
    for dataset in matrix.datasets:
        if dataset not in anchors:
            raise AnchorMissing(f"no anchor for dataset {dataset!r}")
        a = anchors[dataset]
        if not a.max > a.min:
            raise DegenerateAnchor(f"anchor for {dataset!r} has max <= min")
        bounds.append((a.min, a.max))
    values = tuple(
        tuple(_normalize_cell(v, lo, hi) for v, (lo, hi) in zip(row, bounds))
        for row in matrix.values
    )
    return NormalizedMatrix(matrix.models, matrix.datasets, values, anchors)


def _mean_variance(row: Sequence[float]) -> tuple[float, float]:
    # plain left-to-right sums keep results reproducible across runs
    n = len(row)
    total = 0.0
    for x in row:
        total += x
    mean = total / n
    ss = 0.0
    for x in row:
        ss += (x - mean) ** 2
    return mean, ss / (n - 1)


def _score_row(
    model: str,
    datasets: tuple[str, ...],
    row: tuple[float, ...],
    lam: float,
) -> ScoreRecord:
    if len(row) < 2:
        raise TooFewDatasets(f"need at least 2 datasets for a variance, got {len(row)}")
    mean, variance = _mean_variance(row)
    if all(x == row[0] for x in row):
        # exact zero even when (x - mean) rounds to a tiny nonzero
        mean, variance = row[0], 0.0
    out = tuple(d for d, x in zip(datasets, row) if not 0.0 <= x <= 1.0)
    return ScoreRecord(
        model=model,
        datasets=datasets,
        normalized=row,
        mean=mean,
        variance=variance,
        xscore=mean - lam * variance,
        lam=lam,
        out_of_range=out,
    )


def aggregate(normalized: NormalizedMatrix, lam: float = DEFAULT_LAMBDA) -> list[ScoreRecord]:
    """Score every model; records come back in input order with ranks filled."""
    lam = check_lambda(lam)
    if len(normalized.datasets) < 2:
        raise TooFewDatasets(
            f"need at least 2 datasets for a variance, got {len(normalized.datasets)}"
        )
    records = [
        _score_row(m, normalized.datasets, row, lam)
        for m, row in zip(normalized.models, normalized.values)
    ]
    ranked = {r.model: r.rank for r in rank(records)}
    return [replace(r, rank=ranked[r.model]) for r in records]


def score_matrix(
    matrix: AccuracyMatrix,
    anchors: AnchorTable | None = None,
    lam: float = DEFAULT_LAMBDA,
) -> list[ScoreRecord]:
    """normalize + aggregate in one call."""
    return aggregate(normalize(matrix, anchors), lam)


def score_against_anchors(
    accuracies: Mapping[str, float],
    anchors: AnchorTable,
    lam: float = DEFAULT_LAMBDA,
    model: str = "new-model",
    ignore_unanchored: bool = False,
) -> ScoreRecord:
    """Score one model against frozen anchors, e.g. a model trained after the cohort.

    The score is computed over the anchor table's datasets, in its order.
    Accuracies for datasets without an anchor raise :class:`AnchorMissing`
    unless ``ignore_unanchored`` is set. Normalized cells outside [0, 1] are
    kept and listed in ``out_of_range``.
    """
    lam = check_lambda(lam)
    extra = [d for d in accuracies if d not in anchors]
    if extra and not ignore_unanchored:
        raise AnchorMissing(f"no anchor for dataset(s) {', '.join(map(repr, extra))}")
    missing = [d for d in anchors.datasets if d not in accuracies]
    if missing:
        raise MissingCell(
            f"model {model!r} lacks accuracies for anchored dataset(s) "
            f"{', '.join(map(repr, missing))}"
        )
    row = tuple(
        _normalize_cell(
            check_accuracy(accuracies[d], f" for ({model}, {d})"),
            anchors[d].min,
            anchors[d].max,
        )
        for d in anchors.datasets
    )
    return replace(_score_row(model, anchors.datasets, row, lam), rank=1)


def rank(records: Sequence[ScoreRecord]) -> list[ScoreRecord]:
    """Sort best-first and assign ranks 1..K.

    Order: xscore descending, then mean descending, then model id ascending,
    so ties always resolve to distinct ranks.
    """
    ordered = sorted(records, key=lambda r: (-r.xscore, -r.mean, r.model))
    return [replace(r, rank=i) for i, r in enumerate(ordered, start=1)]
