import dataclasses

import numpy as np
import pytest

from smx.amplitudes import (
    alpha,
    amplitudes,
    check_generalized_unitarity,
    check_pam_relations,
    s_eigenvalues,
)
from smx.errors import CorePole, ZeroMomentum
from smx.models import make_model


@pytest.fixture(scope="module")
def tr():
    return make_model("time_reversal", 1.0, a=1.0, b=0.5)


@pytest.fixture(scope="module")
def parity():
    return make_model("parity", 1.0, a=0.5, b=0.5)


@pytest.fixture(scope="module")
def zero(tr):
    return dataclasses.replace(tr, V0=0.0, _cache={})


P_GRID = np.linspace(0.05, 5.0, 50)


def test_alpha_consistency(tr):
    a = alpha(tr, 1.0)
    assert a * (1.0 - tr.V0 * tr.q0(1.0)) == pytest.approx(tr.V0, abs=1e-12)


def test_alpha_small_v0_is_born_term():
    m = make_model("time_reversal", 1e-6, a=1.0, b=0.5)
    assert alpha(m, 1.0) == pytest.approx(1e-6, rel=1e-4)


def test_alpha_core_pole(tr):
    with pytest.raises(CorePole):
        alpha(tr, tr.core_roots()[0])


def test_zero_momentum(tr):
    with pytest.raises(ZeroMomentum):
        amplitudes(tr, 0.0)


def test_free_particle(zero):
    a = amplitudes(zero, 1.0)
    assert a.Tl == 1.0 and a.Tr == 1.0
    assert a.Rl == 0.0 and a.Rr == 0.0
    ev = s_eigenvalues(a)
    assert ev.S1 == 1.0 and ev.S2 == 1.0
    assert np.all(check_generalized_unitarity(zero, 1.0) == 0.0)


def test_sum_rule(tr, parity):
    for model in (tr, parity):
        for p in P_GRID:
            a = amplitudes(model, p)
            assert abs(a.Tl + a.Tr - a.Tl * a.Tr + a.Rl * a.Rr - 1.0) < 1e-9


def test_s2_is_one(tr, parity):
    for model in (tr, parity):
        for p in P_GRID:
            assert abs(s_eigenvalues(amplitudes(model, p)).S2 - 1.0) < 1e-10


def test_reflection_magnitudes_equal_tr(tr):
    for p in np.linspace(0.05, 5.0, 100):
        a = amplitudes(tr, p)
        assert abs(a.Rl) == pytest.approx(abs(a.Rr), abs=1e-12)


def test_asymmetric_transmission(parity):
    a = amplitudes(parity, 0.6)
    assert abs(abs(a.Tl) - abs(a.Tr)) > 0.05


def test_generalized_unitarity(tr, parity):
    for model in (tr, parity):
        worst = max(check_generalized_unitarity(model, p).max() for p in P_GRID)
        assert worst < 1e-9


def test_pam_relations(tr, parity):
    assert check_pam_relations(tr, 0.7 + 0.2j).max() < 1e-8
    assert check_pam_relations(parity, 0.4 - 0.3j).max() < 1e-8


def test_hatted_involution(tr):
    direct = amplitudes(tr, 1.3)
    twice = amplitudes(tr.hatted(), 1.3, hatted=True)
    for name in ("Tl", "Tr", "Rl", "Rr"):
        assert getattr(direct, name) == pytest.approx(getattr(twice, name), abs=1e-12)


def test_s1_limit_at_origin(tr):
    s4 = s_eigenvalues(amplitudes(tr, 1e-4)).S1
    s3 = s_eigenvalues(amplitudes(tr, 1e-3)).S1
    richardson = (10.0 * s4 - s3) / 9.0
    assert richardson == pytest.approx(-1.0, abs=1e-4)


def test_high_energy_transparency(tr, parity):
    for model in (tr, parity):
        a = amplitudes(model, 20.0)
        assert abs(a.Tl - 1.0) + abs(a.Rl) < 0.05


def test_eigenvalue_branch_consistency(tr):
    # quadratic-formula eigenvalues match {1 - Gamma, 1} as sets
    for p in (0.2, 0.9, 3.7):
        a = amplitudes(tr, p)
        ev = s_eigenvalues(a)
        disc = (a.Tl - a.Tr) ** 2 + 4 * a.Rl * a.Rr
        quad = {
            complex((a.Tl + a.Tr + np.sqrt(disc)) / 2),
            complex((a.Tl + a.Tr - np.sqrt(disc)) / 2),
        }
        closed = {complex(ev.S1), complex(ev.S2)}
        for x in quad:
            assert min(abs(x - y) for y in closed) < 1e-9
