"""Single-benchmark accuracy vs xScore, and architectural-element associations.

Effect sizes only; with a dozen models p-values would mean little.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import (
    ConstantVariable,
    InvalidIdentifier,
    ModelSetMismatch,
    TooFewModels,
    UnknownDataset,
)
from .matrix import AccuracyMatrix, check_identifier
from .scoring import ScoreRecord


@dataclass(frozen=True)
class CorrelationReport:
    """Association between one dataset's accuracy and xScore over all models.

    The OLS line regresses xscore on accuracy (xscore units per accuracy point).
    Spearman uses average ranks for ties.
    """

    dataset: str
    pearson_r: float
    spearman_rho: float
    ols_slope: float
    ols_intercept: float
    n: int


@dataclass(frozen=True)
class ElementMatrix:
    models: tuple[str, ...]
    elements: tuple[str, ...]
    flags: tuple[tuple[bool, ...], ...]  # flags[i][e]: model i has element e

    def __post_init__(self) -> None:
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "flags", tuple(tuple(row) for row in self.flags))
        for m in self.models:
            check_identifier(m, "model id")
        for e in self.elements:
            check_identifier(e, "element name")
        if len(set(self.models)) != len(self.models):
            raise InvalidIdentifier("duplicate model id in element matrix")
        if len(set(self.elements)) != len(self.elements):
            raise InvalidIdentifier("duplicate element name")
        if len(self.flags) != len(self.models) or any(
            len(row) != len(self.elements) for row in self.flags
        ):
            raise ValueError("element flags must form a dense models x elements grid")
        for row in self.flags:
            for f in row:
                if not isinstance(f, (bool, np.bool_)):
                    raise ValueError(f"element flag must be boolean, got {f!r}")

    def column(self, element: str) -> tuple[bool, ...]:
        e = self.elements.index(element)
        return tuple(row[e] for row in self.flags)


@dataclass(frozen=True)
class ElementAssociation:
    """Group means of xScore for models with/without an element.

    ``point_biserial_r`` is None when it cannot be estimated: one group is
    empty or every xScore is the same.
    """

    element: str
    n_present: int
    n_absent: int
    mean_xscore_present: float | None
    mean_xscore_absent: float | None
    difference: float | None
    point_biserial_r: float | None


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def correlate_accuracy_vs_xscore(
    matrix: AccuracyMatrix, records: Sequence[ScoreRecord], dataset: str
) -> CorrelationReport:
    if dataset not in matrix.datasets:
        raise UnknownDataset(f"dataset {dataset!r} not in matrix")
    by_model = {r.model: r.xscore for r in records}
    if set(by_model) != set(matrix.models):
        raise ModelSetMismatch("records do not cover exactly the matrix's models")
    n = len(matrix.models)
    if n < 3:
        raise TooFewModels(f"correlation needs at least 3 models, got {n}")
    x = np.array(matrix.column(dataset), dtype=float)
    y = np.array([by_model[m] for m in matrix.models], dtype=float)
    if np.all(x == x[0]):
        raise ConstantVariable(f"accuracy on {dataset!r} is identical for every model")
    if np.all(y == y[0]):
        raise ConstantVariable("xscore is identical for every model")
    dx = x - x.mean()
    slope = float(dx @ (y - y.mean())) / float(dx @ dx)
    return CorrelationReport(
        dataset=dataset,
        pearson_r=_pearson(x, y),
        spearman_rho=_pearson(rankdata(x), rankdata(y)),
        ols_slope=slope,
        ols_intercept=float(y.mean()) - slope * float(x.mean()),
        n=n,
    )


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def element_associations(
    elements: ElementMatrix, records: Sequence[ScoreRecord]
) -> list[ElementAssociation]:
    by_model = {r.model: r.xscore for r in records}
    if set(by_model) != set(elements.models) or len(records) != len(elements.models):
        raise ModelSetMismatch("element matrix and score records cover different models")
    scores = [by_model[m] for m in elements.models]
    n = len(scores)
    mu = sum(scores) / n
    sd = math.sqrt(sum((s - mu) ** 2 for s in scores) / n)
    constant = all(s == scores[0] for s in scores)

    out = []
    for e, name in enumerate(elements.elements):
        present = [s for s, row in zip(scores, elements.flags) if row[e]]
        absent = [s for s, row in zip(scores, elements.flags) if not row[e]]
        m1, m0 = _mean(present), _mean(absent)
        diff = m1 - m0 if present and absent else None
        r = None
        if diff is not None and not constant and sd > 0:
            # (M1 - M0) / s_n * sqrt(p q); symmetric in the groups so a label
            # swap flips the sign exactly
            r = diff / sd * math.sqrt(len(present) * len(absent)) / n
            r = max(-1.0, min(1.0, r))
        out.append(
            ElementAssociation(
                element=name,
                n_present=len(present),
                n_absent=len(absent),
                mean_xscore_present=m1,
                mean_xscore_absent=m0,
                difference=diff,
                point_biserial_r=r,
            )
        )
    return out
