from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracle
from xscore import (
    ElementMatrix,
    build_matrix,
    correlate_accuracy_vs_xscore,
    element_associations,
)
from xscore.errors import ConstantVariable, ModelSetMismatch, TooFewModels, UnknownDataset
from xscore.scoring import ScoreRecord


def _recs(models, xs):
    return [ScoreRecord(m, ("d",), (x,), x, 0.0, x, 0.5) for m, x in zip(models, xs)]


def test_imagenette_spearman(table3, table3_records):
    rep = correlate_accuracy_vs_xscore(table3, table3_records, "imagenette-160")
    # hand rank computation: sum d^2 = 50 -> 1 - 300/1320
    assert rep.spearman_rho == pytest.approx(1 - 300 / 1320, abs=1e-12)
    assert rep.spearman_rho == pytest.approx(0.7727, abs=1e-4)
    assert rep.pearson_r > 0
    assert rep.n == 11


def test_imagenette_matches_oracle(table3, table3_records):
    rep = correlate_accuracy_vs_xscore(table3, table3_records, "imagenette-160")
    x = list(table3.column("imagenette-160"))
    by = {r.model: r.xscore for r in table3_records}
    y = [by[m] for m in table3.models]
    assert rep.pearson_r == pytest.approx(oracle.pearson(x, y), abs=1e-9)
    slope, intercept = oracle.ols(x, y)
    assert rep.ols_slope == pytest.approx(slope, abs=1e-9)
    assert rep.ols_intercept == pytest.approx(intercept, abs=1e-9)


def test_perfect_linear():
    m = build_matrix([(f"m{i}", "d", 10.0 + i) for i in range(5)])
    rep = correlate_accuracy_vs_xscore(m, _recs(m.models, [0.1 * i for i in range(5)]), "d")
    assert rep.pearson_r == pytest.approx(1.0)
    assert rep.spearman_rho == pytest.approx(1.0)
    assert rep.ols_slope == pytest.approx(0.1)


def test_monotone_nonlinear_spearman_one():
    m = build_matrix([(f"m{i}", "d", 10.0 + i) for i in range(5)])
    rep = correlate_accuracy_vs_xscore(m, _recs(m.models, [2.0**i for i in range(5)]), "d")
    assert rep.spearman_rho == pytest.approx(1.0)
    assert rep.pearson_r < 1.0


def test_constant_accuracy():
    m = build_matrix([(f"m{i}", "d", 50.0) for i in range(4)])
    with pytest.raises(ConstantVariable):
        correlate_accuracy_vs_xscore(m, _recs(m.models, [0.1, 0.2, 0.3, 0.4]), "d")


def test_constant_xscore():
    m = build_matrix([(f"m{i}", "d", 50.0 + i) for i in range(4)])
    with pytest.raises(ConstantVariable):
        correlate_accuracy_vs_xscore(m, _recs(m.models, [0.3] * 4), "d")


def test_correlation_errors(table3, table3_records):
    with pytest.raises(UnknownDataset):
        correlate_accuracy_vs_xscore(table3, table3_records, "imagenet")
    with pytest.raises(ModelSetMismatch):
        correlate_accuracy_vs_xscore(table3, table3_records[:-1], "cifar-10")
    m = build_matrix([("a", "d", 1.0), ("b", "d", 2.0)])
    with pytest.raises(TooFewModels):
        correlate_accuracy_vs_xscore(m, _recs(m.models, [0.1, 0.2]), "d")


# elements


def _assoc(table5, table3_records, name):
    return {a.element: a for a in element_associations(table5, table3_records)}[name]


def test_table5_shape(table5):
    assert len(table5.models) == 11
    assert len(table5.elements) == 15


def test_depthwise_not_estimable(table5, table3_records):
    a = _assoc(table5, table3_records, "Depthwise Conv")
    assert (a.n_present, a.n_absent) == (11, 0)
    assert a.point_biserial_r is None
    assert a.difference is None
    assert a.mean_xscore_absent is None


def test_inverted_residual_group_means(table5, table3_records):
    a = _assoc(table5, table3_records, "Inverted Residual")
    assert (a.n_present, a.n_absent) == (6, 5)
    assert a.mean_xscore_present == pytest.approx(0.676, abs=5e-4)
    assert a.mean_xscore_absent == pytest.approx(0.536, abs=5e-4)
    assert a.difference == pytest.approx(0.140, abs=5e-4)
    # group means straight from the membership list
    by = {r.model: r.xscore for r in table3_records}
    present = ["EfficientNet", "MobileViT", "MobileNet", "GhostNet", "TinyNet", "FBNet"]
    assert a.mean_xscore_present == pytest.approx(sum(by[m] for m in present) / 6, abs=1e-12)


def test_associations_follow_element_order(table5, table3_records):
    assert [a.element for a in element_associations(table5, table3_records)] == list(
        table5.elements
    )


def test_top_half_positive():
    models = [f"m{i}" for i in range(6)]
    xs = [0.9, 0.8, 0.7, 0.3, 0.2, 0.1]
    em = ElementMatrix(tuple(models), ("top",), tuple((i < 3,) for i in range(6)))
    (a,) = element_associations(em, _recs(models, xs))
    assert a.point_biserial_r > 0
    assert a.n_present + a.n_absent == 6


def test_constant_xscores_not_estimable():
    models = ["a", "b", "c"]
    em = ElementMatrix(tuple(models), ("e",), ((True,), (False,), (True,)))
    (a,) = element_associations(em, _recs(models, [0.5, 0.5, 0.5]))
    assert a.point_biserial_r is None
    assert a.difference == 0.0


def test_elements_model_mismatch(table5, table3_records):
    with pytest.raises(ModelSetMismatch):
        element_associations(table5, table3_records[:5])


# properties

small = st.floats(-10, 10, allow_nan=False).map(lambda v: round(v, 3))


@st.composite
def paired(draw, n=6):
    x = [draw(small) for _ in range(n)]
    y = [draw(small) for _ in range(n)]
    assume(len(set(x)) > 1 and len(set(y)) > 1)
    return x, y


def _matrix_from(x):
    return build_matrix([(f"m{i}", "d", 50.0 + v) for i, v in enumerate(x)])


@settings(max_examples=150, deadline=None)
@given(paired(), st.floats(0.1, 5.0), st.floats(-5.0, 5.0))
def test_affine_invariance_of_correlations(xy, a, b):
    x, y = xy
    m = _matrix_from(x)
    base = correlate_accuracy_vs_xscore(m, _recs(m.models, y), "d")
    moved = correlate_accuracy_vs_xscore(m, _recs(m.models, [a * v + b for v in y]), "d")
    assert moved.pearson_r == pytest.approx(base.pearson_r, abs=1e-9)
    # inputs carry 3 decimals, so the transform cannot merge or split ties
    assert moved.spearman_rho == pytest.approx(base.spearman_rho, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(paired())
def test_spearman_monotone_transform(xy):
    x, y = xy
    m = _matrix_from(x)
    base = correlate_accuracy_vs_xscore(m, _recs(m.models, y), "d")
    cubed = correlate_accuracy_vs_xscore(m, _recs(m.models, [v**3 for v in y]), "d")
    assert cubed.spearman_rho == pytest.approx(base.spearman_rho, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(paired())
def test_ols_residuals(xy):
    x, y = xy
    m = _matrix_from(x)
    rep = correlate_accuracy_vs_xscore(m, _recs(m.models, y), "d")
    acc = list(m.column("d"))
    residuals = [yi - (rep.ols_intercept + rep.ols_slope * xi) for xi, yi in zip(acc, y)]
    assert abs(sum(residuals)) <= 1e-9
    mx, my = sum(acc) / len(acc), sum(y) / len(y)
    assert rep.ols_intercept + rep.ols_slope * mx == pytest.approx(my, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(paired())
def test_oracle_equivalence_statistics(xy):
    x, y = xy
    m = _matrix_from(x)
    acc = list(m.column("d"))
    rep = correlate_accuracy_vs_xscore(m, _recs(m.models, y), "d")
    assert rep.pearson_r == pytest.approx(oracle.pearson(acc, y), abs=1e-9)
    assert rep.spearman_rho == pytest.approx(oracle.spearman_pearson(acc, y), abs=1e-9)
    slope, intercept = oracle.ols(acc, y)
    assert rep.ols_slope == pytest.approx(slope, abs=1e-9)
    assert rep.ols_intercept == pytest.approx(intercept, abs=1e-9)


@st.composite
def element_inputs(draw, n=6, e=4):
    flags = tuple(tuple(draw(st.booleans()) for _ in range(e)) for _ in range(n))
    xs = [draw(small) for _ in range(n)]
    models = tuple(f"m{i}" for i in range(n))
    return ElementMatrix(models, tuple(f"e{j}" for j in range(e)), flags), _recs(models, xs)


@settings(max_examples=150, deadline=None)
@given(element_inputs())
def test_label_swap_negates(inputs):
    em, recs = inputs
    swapped = replace(em, flags=tuple(tuple(not f for f in row) for row in em.flags))
    for a, b in zip(element_associations(em, recs), element_associations(swapped, recs)):
        assert (a.n_present, a.n_absent) == (b.n_absent, b.n_present)
        if a.difference is None:
            assert b.difference is None
        else:
            assert b.difference == -a.difference
        if a.point_biserial_r is None:
            assert b.point_biserial_r is None
        else:
            assert b.point_biserial_r == -a.point_biserial_r


@settings(max_examples=150, deadline=None)
@given(element_inputs())
def test_point_biserial_matches_pearson(inputs):
    em, recs = inputs
    xs = [r.xscore for r in recs]
    for j, a in enumerate(element_associations(em, recs)):
        flags = [1.0 if row[j] else 0.0 for row in em.flags]
        present = [x for x, f in zip(xs, flags) if f]
        absent = [x for x, f in zip(xs, flags) if not f]
        assert a.n_present + a.n_absent == len(xs)
        if not present or not absent or len(set(xs)) == 1:
            assert a.point_biserial_r is None
            continue
        assert a.point_biserial_r == pytest.approx(oracle.pearson(flags, xs), abs=1e-9)
        assert a.mean_xscore_present == pytest.approx(sum(present) / len(present), abs=1e-9)
        assert a.mean_xscore_absent == pytest.approx(sum(absent) / len(absent), abs=1e-9)
