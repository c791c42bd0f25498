import numpy as np
import pytest

from smx.core import Polynomial, RationalFunction
from smx.errors import ParameterDomain, PoleHit, QuadratureNoConvergence
from smx.models import (
    EnergyPoint,
    Kind,
    Units,
    kernel_xy,
    make_model,
    q0_closed,
    q0_quadrature,
)


@pytest.fixture(scope="module")
def tr():
    return make_model("time_reversal", 1.0, a=1.0, b=0.5)


@pytest.fixture(scope="module")
def parity():
    return make_model("parity", 1.0, a=0.5, b=0.5)


def test_units():
    u = Units(4.0)
    assert u.p0 == pytest.approx(2.0)
    assert u.L0 == pytest.approx(0.5)
    with pytest.raises(ParameterDomain):
        Units(0.0).p0


def test_energy_point_branch():
    ep = EnergyPoint.from_energy(-0.5)
    assert ep.q == pytest.approx(1.0j)
    ep2 = EnergyPoint.from_momentum(0.3j)
    assert ep2.E == pytest.approx(-0.045)


def test_domain_checks():
    with pytest.raises(ParameterDomain):
        make_model("time_reversal", 1.0, a=-1.0, b=0.5)
    with pytest.raises(ParameterDomain):
        make_model("parity", 1.0, a=0.0, b=0.5)
    with pytest.raises(ParameterDomain):
        make_model("time_reversal", 0.0, a=1.0, b=0.5)
    with pytest.raises(ParameterDomain):
        make_model("custom", 1.0)


def test_closed_form_matches_quadrature(tr, parity):
    rng = np.random.default_rng(42)
    for model in (tr, parity):
        for _ in range(12):
            E = complex(rng.uniform(-2, 2), rng.uniform(0.05, 3) * rng.choice([-1, 1]))
            q = EnergyPoint.from_energy(E).q
            assert abs(q0_closed(model, q) - q0_quadrature(model, E)) < 1e-6


def test_quadrature_rejects_continuum(tr):
    with pytest.raises(QuadratureNoConvergence):
        q0_quadrature(tr, 0.5)


def test_q0_pole_hit(tr):
    with pytest.raises(PoleHit):
        q0_closed(tr, -1.0j)  # double pole of the TR resolvent


def test_large_energy_bound(tr):
    E = 200.0 + 10.0j
    val = q0_closed(tr, EnergyPoint.from_energy(E).q)
    assert abs(val) < 2.0 / abs(E) * 10.0


def test_kernel_matches_momentum_normalization(tr):
    # coordinate and momentum form factors describe the same state:
    # chi(p) must equal the Fourier transform of chi(x)
    from scipy.integrate import quad

    for p in (0.3, 1.1):
        re, _ = quad(lambda x: (tr.chi_x(x) * np.exp(-1j * p * x)).real, -40, 40, limit=200)
        im, _ = quad(lambda x: (tr.chi_x(x) * np.exp(-1j * p * x)).imag, -40, 40, limit=200)
        ft = (re + 1j * im) / np.sqrt(2 * np.pi)
        assert ft == pytest.approx(complex(tr.chi_p(p)), abs=1e-8)


def test_kernel_xy_grid(tr):
    x = np.linspace(-3, 3, 20)
    K = kernel_xy(tr, x[:, None], x[None, :])
    expect = tr.V0 * tr.phi_x(x)[:, None] * np.conj(tr.chi_x(x))[None, :]
    np.testing.assert_allclose(K, expect, atol=1e-10)


def test_parity_b0_degenerates_to_real():
    m = make_model("parity", 1.0, a=0.7, b=0.0)
    np.testing.assert_allclose(
        m.phi_p.numerator.coefficients, m.chi_p.numerator.coefficients
    )
    np.testing.assert_allclose(
        m.phi_p.denominator.coefficients, m.chi_p.denominator.coefficients
    )


def test_hatted_swaps_and_transforms(tr):
    hat = tr.hatted()
    assert hat.phi_p is tr.chi_p
    assert hat.chi_p is tr.phi_p
    # Q0_hat(q) = conj(Q0(-conj(q)))
    for q in (0.4 + 0.3j, -1.2 + 0.9j):
        assert hat.q0(q) == pytest.approx(np.conj(tr.q0(-np.conj(q))))
    # hatted is an involution up to the resolvent identity
    back = hat.hatted()
    assert back.q0(0.4 + 0.3j) == pytest.approx(tr.q0(0.4 + 0.3j))


def test_custom_model_fit_matches_quadrature(tr):
    phi_bad = RationalFunction(
        Polynomial([np.sqrt(0.75 / np.pi)]),
        Polynomial([1j, 1.0]) * Polynomial([-0.3 - 0.5j, 1.0]),
    )
    m = make_model("custom", 1.0, phi_p=phi_bad, chi_p=tr.chi_p)
    assert m.kind is Kind.CUSTOM_RATIONAL
    for E in (0.2 + 0.9j, -1.1 - 0.4j):
        q = EnergyPoint.from_energy(E).q
        assert abs(m.q0(q) - q0_quadrature(m, E)) < 1e-8


def test_custom_fit_reproduces_known_resolvents(tr, parity):
    for model in (tr, parity):
        refit = make_model(
            "custom", model.V0, phi_p=model.phi_p, chi_p=model.chi_p,
            a=model.a, b=model.b,
        )
        for q in (0.3 + 0.4j, -1.2 + 0.9j, 0.05 + 1.7j):
            assert refit.q0(q) == pytest.approx(model.q0(q), abs=1e-10)
        assert refit.q0.denominator.degree == model.q0.denominator.degree
