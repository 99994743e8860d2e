"""Accuracy matrices, normalization anchors and parameter-count metadata."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType

import numpy as np

from .errors import (
    DegenerateAnchor,
    DegenerateColumn,
    DuplicateCell,
    InvalidIdentifier,
    MissingCell,
    OutOfRange,
    TooFewModels,
)

DEFAULT_RATIO_THRESHOLD = 1.5


def check_identifier(name: str, kind: str = "identifier") -> str:
    if not isinstance(name, str) or not name:
        raise InvalidIdentifier(f"{kind} must be a non-empty string, got {name!r}")
    if name != name.strip():
        raise InvalidIdentifier(f"{kind} {name!r} has leading/trailing whitespace")
    return name


def check_accuracy(value: float, where: str = "") -> float:
    value = float(value)
    if not 0.0 <= value <= 100.0:  # also rejects NaN
        raise OutOfRange(f"accuracy {value!r}{where} outside [0, 100]")
    return value


@dataclass(frozen=True)
class AccuracyMatrix:
    """Dense K x N grid of accuracy percentages.

    ``values[i][j]`` is the accuracy of ``models[i]`` on ``datasets[j]``.
    ``params`` optionally maps model name to parameter count in millions.
    """

    models: tuple[str, ...]
    datasets: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    params: Mapping[str, float] | None = None
    label: str = "matrix"

    def __post_init__(self) -> None:
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(
            self, "values", tuple(tuple(float(v) for v in row) for row in self.values)
        )
        for m in self.models:
            check_identifier(m, "model id")
        for d in self.datasets:
            check_identifier(d, "dataset id")
        _check_unique(self.models, "model")
        _check_unique(self.datasets, "dataset")
        if len(self.models) < 2:
            raise TooFewModels(f"need at least 2 models, got {len(self.models)}")
        if not self.datasets:
            raise MissingCell("matrix has no dataset columns")
        if len(self.values) != len(self.models):
            raise MissingCell(f"{len(self.values)} value rows for {len(self.models)} models")
        for model, row in zip(self.models, self.values):
            if len(row) != len(self.datasets):
                raise MissingCell(
                    f"model {model!r} has {len(row)} values for {len(self.datasets)} datasets"
                )
            for dataset, v in zip(self.datasets, row):
                check_accuracy(v, f" for ({model}, {dataset})")
        if self.params is not None:
            object.__setattr__(
                self, "params", MappingProxyType({k: float(v) for k, v in self.params.items()})
            )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.models), len(self.datasets)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def cell(self, model: str, dataset: str) -> float:
        return self.values[self.models.index(model)][self.datasets.index(dataset)]

    def column(self, dataset: str) -> tuple[float, ...]:
        j = self.datasets.index(dataset)
        return tuple(row[j] for row in self.values)

    def row(self, model: str) -> dict[str, float]:
        return dict(zip(self.datasets, self.values[self.models.index(model)]))

    def select_datasets(self, datasets: Iterable[str]) -> AccuracyMatrix:
        """Return the sub-matrix restricted to ``datasets`` (in the given order)."""
        datasets = tuple(datasets)
        idx = [self.datasets.index(d) for d in datasets]
        return AccuracyMatrix(
            models=self.models,
            datasets=datasets,
            values=tuple(tuple(row[j] for j in idx) for row in self.values),
            params=self.params,
            label=self.label,
        )

    def records(self) -> list[tuple[str, str, float]]:
        return [
            (m, d, v)
            for m, row in zip(self.models, self.values)
            for d, v in zip(self.datasets, row)
        ]


def _check_unique(names: tuple[str, ...], kind: str) -> None:
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise DuplicateCell(f"duplicate {kind} id {n!r}")
        seen.add(n)


@dataclass(frozen=True)
class Anchor:
    min: float
    max: float


@dataclass(frozen=True)
class AnchorTable:
    """Per-dataset (min, max) normalization bounds.

    Frozen anchors let models outside the reference cohort be scored without
    shifting anyone else's normalized values.
    """

    entries: Mapping[str, Anchor]
    source: str = ""
    datasets: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        entries: dict[str, Anchor] = {}
        for name, anchor in self.entries.items():
            check_identifier(name, "dataset id")
            if not isinstance(anchor, Anchor):
                anchor = Anchor(*anchor)
            lo, hi = float(anchor.min), float(anchor.max)
            if not hi > lo:
                raise DegenerateAnchor(f"anchor for {name!r} has max {hi!r} <= min {lo!r}")
            entries[name] = Anchor(lo, hi)
        object.__setattr__(self, "entries", MappingProxyType(entries))
        object.__setattr__(self, "datasets", tuple(entries))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, float, float]], source: str = ""
    ) -> AnchorTable:
        entries: dict[str, Anchor] = {}
        for name, lo, hi in pairs:
            if name in entries:
                raise DuplicateCell(f"duplicate anchor for dataset {name!r}")
            entries[name] = Anchor(lo, hi)
        return cls(entries, source)

    def __getitem__(self, dataset: str) -> Anchor:
        return self.entries[dataset]

    def __contains__(self, dataset: object) -> bool:
        return dataset in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnchorTable):
            return NotImplemented
        return (
            self.source == other.source
            and list(self.entries.items()) == list(other.entries.items())
        )

    def __hash__(self) -> int:
        return hash((self.source, tuple(self.entries.items())))

    def restrict(self, datasets: Iterable[str]) -> AnchorTable:
        return AnchorTable({d: self.entries[d] for d in datasets}, self.source)


def build_matrix(
    records: Iterable[tuple[str, str, float]],
    params: Mapping[str, float] | None = None,
    label: str = "matrix",
) -> AccuracyMatrix:
    """Assemble a dense matrix from ``(model, dataset, accuracy)`` triples.

    Rows and columns follow first-appearance order.
    """
    models: dict[str, None] = {}
    datasets: dict[str, None] = {}
    cells: dict[tuple[str, str], float] = {}
    for model, dataset, value in records:
        check_identifier(model, "model id")
        check_identifier(dataset, "dataset id")
        if (model, dataset) in cells:
            raise DuplicateCell(f"duplicate cell ({model}, {dataset})")
        cells[(model, dataset)] = check_accuracy(value, f" for ({model}, {dataset})")
        models.setdefault(model)
        datasets.setdefault(dataset)
    if len(models) < 2:
        raise TooFewModels(f"need at least 2 models, got {len(models)}")
    missing = [(m, d) for m in models for d in datasets if (m, d) not in cells]
    if missing:
        shown = ", ".join(f"({m}, {d})" for m, d in missing[:5])
        more = f" and {len(missing) - 5} more" if len(missing) > 5 else ""
        raise MissingCell(f"matrix is not dense; missing {shown}{more}")
    return AccuracyMatrix(
        models=tuple(models),
        datasets=tuple(datasets),
        values=tuple(tuple(cells[(m, d)] for d in datasets) for m in models),
        params=params,
        label=label,
    )


def column_extrema(matrix: AccuracyMatrix, source: str | None = None) -> AnchorTable:
    """Per-column (min, max) over models, i.e. the self-anchoring bounds."""
    entries: dict[str, Anchor] = {}
    for j, dataset in enumerate(matrix.datasets):
        col = [row[j] for row in matrix.values]
        lo, hi = min(col), max(col)
        if hi == lo:
            raise DegenerateColumn(
                f"dataset {dataset!r}: every model scores {lo!r}; range is zero"
            )
        entries[dataset] = Anchor(lo, hi)
    return AnchorTable(entries, matrix.label if source is None else source)


@dataclass(frozen=True)
class ComparabilityWarning:
    smaller: str
    larger: str
    ratio: float
    threshold: float

    def __str__(self) -> str:
        return (
            f"{self.larger} vs {self.smaller}: parameter ratio {self.ratio:.2f} "
            f"exceeds {self.threshold:g}"
        )


def validate_comparability(
    matrix: AccuracyMatrix, ratio_threshold: float = DEFAULT_RATIO_THRESHOLD
) -> list[ComparabilityWarning]:
    """Warn about model pairs whose parameter counts differ by more than the ratio.

    Purely advisory: xScore comparisons only make sense between models of
    similar capacity, but nothing is rejected.
    """
    if ratio_threshold <= 1:
        raise ValueError("ratio_threshold must be > 1")
    if not matrix.params:
        return []
    known = [(m, matrix.params[m]) for m in matrix.models if m in matrix.params]
    warnings = []
    for (a, pa), (b, pb) in combinations(known, 2):
        (small, ps), (large, pl) = sorted(((a, pa), (b, pb)), key=lambda t: t[1])
        if ps <= 0:
            continue
        ratio = pl / ps
        if ratio > ratio_threshold:
            warnings.append(ComparabilityWarning(small, large, ratio, ratio_threshold))
    return warnings
