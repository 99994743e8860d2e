from __future__ import annotations

from pathlib import Path

import pytest

from xscore import fixture_text, parse_accuracy_table, parse_element_table, score_matrix

GOLDEN = Path(__file__).parent / "golden"

TABLE3_DATASETS = (
    "cifar-10",
    "imagenette-160",
    "cifar-100",
    "ham10k",
    "stanford-dogs",
    "miniplaces",
    "indoor-67",
)


@pytest.fixture(scope="session")
def table3():
    return parse_accuracy_table(fixture_text("table3"), label="table3")


@pytest.fixture(scope="session")
def table3_records(table3):
    return score_matrix(table3, lam=0.5)


@pytest.fixture(scope="session")
def table5():
    return parse_element_table(fixture_text("table5"))


@pytest.fixture(scope="session")
def table3_rows(table3):
    """Exact decimal strings per model, for the rational oracle."""
    lines = fixture_text("table3").strip().splitlines()[1:]
    return {ln.split(",")[0]: ln.split(",")[1:] for ln in lines}
