import itertools

import numpy as np
import pytest

from smx.errors import BoxTooSmall
from smx.models import make_model
from smx.symmetry import (
    CODE_TO_LABEL,
    LABELS,
    SuperOp,
    amplitude_selection_rules,
    classify,
    classify_kernel,
    discretize_kernel,
    momentum_kernel,
    superop_apply,
)


@pytest.fixture(scope="module")
def tr():
    return make_model("time_reversal", 1.0, a=1.0, b=0.5)


def verdict_set(report):
    return {code for code, v in report.verdicts.items() if v}


def test_grid_is_sign_symmetric(tr):
    K = discretize_kernel(tr, 32.0, 128)
    np.testing.assert_allclose(K.grid, -K.grid[::-1])
    assert 0.0 not in K.grid


def test_box_too_small(tr):
    with pytest.raises(BoxTooSmall):
        discretize_kernel(tr, 2.0, 64)


def test_superop_linearity():
    assert SuperOp("C").linearity == "antiunitary"
    assert SuperOp("CTI").linearity == "antiunitary"
    assert SuperOp("T").linearity == "unitary"
    assert SuperOp("1").linearity == "unitary"


def test_superop_involutions():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    for label in LABELS:
        op = SuperOp(label)
        np.testing.assert_allclose(superop_apply(op, superop_apply(op, M)), M)


def test_group_table():
    rng = np.random.default_rng(2)
    M = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    for l1, l2 in itertools.product(LABELS, LABELS):
        combined = superop_apply(SuperOp(l1).compose(SuperOp(l2)), M)
        nested = superop_apply(SuperOp(l1), superop_apply(SuperOp(l2), M))
        np.testing.assert_allclose(combined, nested)


def test_superop_inner_product_behavior():
    rng = np.random.default_rng(3)
    F = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    G = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    ip = np.trace(F.conj().T @ G)
    for label in LABELS:
        op = SuperOp(label)
        lf, lg = superop_apply(op, F), superop_apply(op, G)
        got = np.trace(lf.conj().T @ lg)
        expect = np.conj(ip) if op.linearity == "antiunitary" else ip
        assert got == pytest.approx(expect)


def test_classify_tr_generic(tr):
    assert verdict_set(classify(tr)) == {"I", "V"}


def test_classify_tr_equal_parameters():
    m = make_model("time_reversal", 1.0, a=1.0, b=1.0)
    verdicts = verdict_set(classify(m))
    assert {"I", "III", "V", "VII"} <= verdicts
    assert verdicts == set(CODE_TO_LABEL)  # real symmetric parity-even kernel


def test_classify_parity_generic():
    m = make_model("parity", 1.0, a=0.5, b=0.5)
    assert verdict_set(classify(m)) == {"I", "IV"}


def test_classify_parity_real_limit():
    m = make_model("parity", 1.0, a=0.5, b=0.0)
    verdicts = verdict_set(classify(m))
    assert {"I", "IV", "V", "VIII"} <= verdicts
    assert verdicts == set(CODE_TO_LABEL)


def test_classifier_stability_under_refinement(tr):
    coarse = classify(tr, N=128)
    fine = classify(tr, N=256, L=64.0)
    for code in CODE_TO_LABEL:
        assert coarse.verdicts[code] == fine.verdicts[code]


def test_zero_potential_kernel(tr):
    import dataclasses

    zero = dataclasses.replace(tr, V0=0.0, _cache={})
    K = discretize_kernel(zero, 32.0, 64)
    assert np.all(K.values == 0)
    report = classify_kernel(K)
    assert all(report.verdicts.values())


def test_momentum_representation_consistency(tr):
    K = discretize_kernel(tr, 32.0, 128)
    Kp = momentum_kernel(K)
    coord = classify_kernel(K)
    mom = classify_kernel(Kp)
    # the subgroup whose label is shared by both representations
    for code in ("I", "II", "III", "IV"):
        assert mom.verdicts[code] == coord.verdicts[code]
        assert mom.residuals[code] == pytest.approx(coord.residuals[code], abs=1e-9)


def test_selection_rules(tr):
    grid = np.linspace(0.1, 4.0, 50)
    assert amplitude_selection_rules(tr, "V", grid) < 1e-8
    assert amplitude_selection_rules(tr, "I", grid) == 0.0
    parity = make_model("parity", 1.0, a=0.5, b=0.5)
    assert amplitude_selection_rules(parity, "IV", grid) < 1e-8


def test_mirror_theorem_for_symmetric_codes():
    from smx.poles import check_mirror_symmetry, find_poles

    models = [
        make_model("time_reversal", 1.0, a=1.3, b=0.4),  # V
        make_model("parity", -1.0, a=0.8, b=1.7),  # IV
        make_model("parity", 1.0, a=0.6, b=0.0),  # adds V, VIII
    ]
    for m in models:
        verdicts = verdict_set(classify(m))
        assert verdicts & {"II", "IV", "V", "VII"}
        ok, _ = check_mirror_symmetry(find_poles(m))
        assert ok
