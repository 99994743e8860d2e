"""Brute-force search for a small proxy benchmark.

Every k-subset of datasets is scored on its own columns and compared with the
full-matrix ranking; the subset that best reproduces it wins.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

from scipy.stats import rankdata

from .errors import BadSubsetSize, ModelSetMismatch, SearchTooLarge, UnknownObjective
from .matrix import AccuracyMatrix
from .scoring import DEFAULT_LAMBDA, ScoreRecord, check_lambda, score_matrix

MAX_CANDIDATES = 10**6

# The four-dataset proxy reported for the reference cohort.
REFERENCE_PROXY = ("cifar-100", "ham10k", "imagenette-160", "stanford-dogs")


class Objective(str, Enum):
    KENDALL_TAU = "kendall_tau"
    SPEARMAN_RHO = "spearman_rho"
    PAIRWISE_AGREEMENT = "pairwise_agreement"
    SCORE_MAE = "score_mae"

    @property
    def maximize(self) -> bool:
        return self is not Objective.SCORE_MAE

    @classmethod
    def parse(cls, value: str | Objective) -> Objective:
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(o.value for o in cls)
            raise UnknownObjective(f"unknown objective {value!r}; choose from {names}") from None


DEFAULT_OBJECTIVE = Objective.KENDALL_TAU


@dataclass(frozen=True)
class SubsetCandidate:
    datasets: tuple[str, ...]
    records: tuple[ScoreRecord, ...]
    fidelity: float


@dataclass(frozen=True)
class SubsetReport:
    k: int
    objective: Objective
    lam: float
    candidates: tuple[SubsetCandidate, ...]  # best first

    @property
    def best(self) -> SubsetCandidate:
        return self.candidates[0]

    def find(self, datasets: Sequence[str]) -> SubsetCandidate | None:
        key = tuple(sorted(datasets))
        for c in self.candidates:
            if c.datasets == key:
                return c
        return None

    def position(self, datasets: Sequence[str]) -> int | None:
        """1-based position of a subset in the sorted candidate list."""
        key = tuple(sorted(datasets))
        for i, c in enumerate(self.candidates, start=1):
            if c.datasets == key:
                return i
        return None

    def tied_with_best(self, datasets: Sequence[str]) -> bool:
        c = self.find(datasets)
        return c is not None and c.fidelity == self.best.fidelity


def enumerate_k_subsets(datasets: Sequence[str], k: int) -> list[tuple[str, ...]]:
    """All k-subsets as sorted tuples, in lexicographic order."""
    n = len(datasets)
    if not 1 <= k <= n:
        raise BadSubsetSize(f"subset size k={k} outside [1, {n}]")
    if len(set(datasets)) != n:
        raise BadSubsetSize("dataset names must be unique")
    return list(combinations(sorted(datasets), k))


def _aligned(
    full: Sequence[ScoreRecord], subset: Sequence[ScoreRecord]
) -> tuple[list[float], list[float]]:
    a = {r.model: r.xscore for r in full}
    b = {r.model: r.xscore for r in subset}
    if len(a) != len(full) or len(b) != len(subset) or a.keys() != b.keys():
        raise ModelSetMismatch("full and subset records cover different models")
    models = sorted(a)
    return [a[m] for m in models], [b[m] for m in models]


def _pair_counts(x: Sequence[float], y: Sequence[float]) -> tuple[int, int, int]:
    concordant = discordant = 0
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            s = (x[i] - x[j]) * (y[i] - y[j])
            if s > 0:
                concordant += 1
            elif s < 0:
                discordant += 1
    return concordant, discordant, n * (n - 1) // 2


def rank_fidelity(
    full: Sequence[ScoreRecord],
    subset: Sequence[ScoreRecord],
    objective: Objective | str = DEFAULT_OBJECTIVE,
) -> float:
    """How faithfully ``subset`` scores reproduce ``full`` scores.

    kendall_tau counts tied pairs as neither concordant nor discordant;
    spearman_rho uses average ranks for ties in ``1 - 6 sum(d^2) / (K(K^2 - 1))``.
    """
    objective = Objective.parse(objective)
    x, y = _aligned(full, subset)
    k = len(x)
    if objective is Objective.SCORE_MAE:
        return sum(abs(a - b) for a, b in zip(x, y)) / k
    if k < 2:
        raise ModelSetMismatch("rank fidelity needs at least two models")
    if objective is Objective.SPEARMAN_RHO:
        d2 = float(sum((rankdata(x) - rankdata(y)) ** 2))
        return 1.0 - 6.0 * d2 / (k * (k * k - 1))
    concordant, discordant, pairs = _pair_counts(x, y)
    if objective is Objective.KENDALL_TAU:
        return (concordant - discordant) / pairs
    return concordant / pairs


def _sort_key(objective: Objective):
    if objective.maximize:
        return lambda c: (-c.fidelity, c.datasets)
    return lambda c: (c.fidelity, c.datasets)


def select_proxy_subset(
    matrix: AccuracyMatrix,
    k: int,
    lam: float = DEFAULT_LAMBDA,
    objective: Objective | str = DEFAULT_OBJECTIVE,
) -> SubsetReport:
    """Evaluate every k-subset of the matrix's datasets.

    Subset scores re-derive anchors from the subset's own columns, which is the
    same as dropping the other columns before normalizing. Candidates are
    sorted best-first; fidelity ties go to the lexicographically smallest
    dataset tuple.
    """
    objective = Objective.parse(objective)
    lam = check_lambda(lam)
    n = len(matrix.datasets)
    if not 2 <= k <= n:
        raise BadSubsetSize(f"subset size k={k} outside [2, {n}]")
    if comb(n, k) > MAX_CANDIDATES:
        raise SearchTooLarge(
            f"C({n}, {k}) = {comb(n, k)} subsets exceeds the brute-force limit {MAX_CANDIDATES}"
        )
    full = score_matrix(matrix, lam=lam)
    candidates = []
    for datasets in enumerate_k_subsets(matrix.datasets, k):
        # score in the matrix's column order so k = N reproduces the full scores bit for bit
        members = set(datasets)
        columns = [d for d in matrix.datasets if d in members]
        records = score_matrix(matrix.select_datasets(columns), lam=lam)
        candidates.append(
            SubsetCandidate(datasets, tuple(records), rank_fidelity(full, records, objective))
        )
    candidates.sort(key=_sort_key(objective))
    return SubsetReport(k=k, objective=objective, lam=lam, candidates=tuple(candidates))


def select_all_objectives(
    matrix: AccuracyMatrix, k: int, lam: float = DEFAULT_LAMBDA
) -> dict[Objective, SubsetReport]:
    return {o: select_proxy_subset(matrix, k, lam, o) for o in Objective}
