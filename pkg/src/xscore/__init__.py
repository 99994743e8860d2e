"""Cross-dataset robustness scoring for model x dataset accuracy matrices."""

from .analysis import (
    CorrelationReport,
    ElementAssociation,
    ElementMatrix,
    correlate_accuracy_vs_xscore,
    element_associations,
)
from .errors import *  # noqa: F401,F403
from .formats import (
    emit_accuracy_table,
    emit_anchor_file,
    emit_element_table,
    fixture_text,
    parse_accuracy_rows,
    parse_accuracy_table,
    parse_anchor_file,
    parse_element_table,
    parse_params_table,
)
from .matrix import (
    AccuracyMatrix,
    Anchor,
    AnchorTable,
    ComparabilityWarning,
    build_matrix,
    column_extrema,
    validate_comparability,
)
from .report import emit_leaderboard, emit_scatter
from .scoring import (
    DEFAULT_LAMBDA,
    NormalizedMatrix,
    ScoreRecord,
    aggregate,
    normalize,
    rank,
    score_against_anchors,
    score_matrix,
)
from .subset import (
    REFERENCE_PROXY,
    Objective,
    SubsetCandidate,
    SubsetReport,
    enumerate_k_subsets,
    rank_fidelity,
    select_proxy_subset,
)

__version__ = "0.1.0"
