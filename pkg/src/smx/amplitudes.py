"""Scattering amplitudes, S-matrix eigenvalues and identity checks.

All four amplitudes of a rank-one separable potential collapse to the
single scalar alpha = V0 / (1 - V0*Q0) times form-factor values, so every
quantity here is a handful of rational evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchMismatch, CorePole, ZeroMomentum
from .models import EnergyPoint, SeparableModel

TWO_PI_I = 2j * np.pi

CORE_DISTANCE_TOL = 1e-8
DEGENERACY_TOL = 1e-12
BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Transmission and reflection amplitudes at one (possibly complex) momentum."""

    p: complex
    Tl: complex
    Tr: complex
    Rl: complex
    Rr: complex
    hatted: bool = False


@dataclass(frozen=True)
class SMatrixEigenvalues:
    p: complex
    S1: complex
    S2: complex
    Gamma: complex
    degenerate: bool = False


def alpha(model: SeparableModel, point):
    """Scalar amplitude factor alpha = V0 / (1 - V0*Q0(q)).

    Accepts an EnergyPoint or a bare complex momentum q (the analytic
    continuation through the rational Q0). Raises CorePole within
    1e-8 of a zero of 1 - V0*Q0.
    """
    q = point.q if isinstance(point, EnergyPoint) else complex(point)
    if model.V0 == 0:
        return 0.0
    for r in model.core_roots():
        if abs(q - r) < CORE_DISTANCE_TOL:
            raise CorePole(f"momentum {q} within {CORE_DISTANCE_TOL:.0e} of core zero {r}")
    den = 1.0 - model.V0 * model.q0(q)
    if abs(den) < 1e-12:
        raise CorePole(f"1 - V0*Q0 vanishes at q = {q}")
    return model.V0 / den


def amplitudes(model: SeparableModel, p, hatted: bool = False) -> ScatteringAmplitudes:
    """The four amplitudes at momentum p (complex allowed, p != 0).

    hatted=True evaluates the adjoint model's amplitudes, i.e. the
    potential with phi and chi exchanged.
    """
    p = complex(p)
    if p == 0:
        raise ZeroMomentum("amplitudes carry a 1/p prefactor; p = 0 is excluded")
    mod = model.hatted() if hatted else model
    a = alpha(mod, p)
    pref = TWO_PI_I / p * a
    phi, chs = mod.phi_p, mod.chi_star()
    return ScatteringAmplitudes(
        p=p,
        Tl=1.0 - pref * phi(p) * chs(p),
        Tr=1.0 - pref * phi(-p) * chs(-p),
        Rl=-pref * phi(-p) * chs(p),
        Rr=-pref * phi(p) * chs(-p),
        hatted=hatted,
    )


def s_eigenvalues(amps: ScatteringAmplitudes) -> SMatrixEigenvalues:
    """S-matrix eigenvalues from the amplitudes.

    Uses the closed branch S1 = 1 - Gamma, S2 = 1 with
    Gamma = (1 - Tl) + (1 - Tr), and cross-checks against the quadratic
    formula for the 2x2 eigenvalue problem.
    """
    Tl, Tr, Rl, Rr = amps.Tl, amps.Tr, amps.Rl, amps.Rr
    gamma = (1.0 - Tl) + (1.0 - Tr)
    s1, s2 = 1.0 - gamma, 1.0 + 0.0j
    disc = (Tl - Tr) ** 2 + 4.0 * Rl * Rr
    degenerate = abs(disc) < DEGENERACY_TOL
    mean = 0.5 * (Tl + Tr)
    if degenerate:
        quad = (mean, mean)
    else:
        root = np.sqrt(disc)
        quad = (mean + 0.5 * root, mean - 0.5 * root)
    scale = 1.0 + abs(s1) + abs(s2)
    err_a = abs(quad[0] - s1) + abs(quad[1] - s2)
    err_b = abs(quad[0] - s2) + abs(quad[1] - s1)
    if min(err_a, err_b) > BRANCH_TOL * scale:
        raise BranchMismatch(
            f"quadratic eigenvalues {quad} do not match (1 - Gamma, 1) at p = {amps.p}"
        )
    return SMatrixEigenvalues(p=amps.p, S1=s1, S2=s2, Gamma=gamma, degenerate=degenerate)


def check_generalized_unitarity(model: SeparableModel, p: float):
    """Residuals of the generalized unitarity relation at real p > 0.

    Returns four non-negative numbers, the moduli of the off-unity parts
    of adjoint-model amplitudes paired with conjugated direct amplitudes.
    """
    p = float(p)
    if p <= 0:
        raise ZeroMomentum("generalized unitarity is checked at real p > 0")
    d = amplitudes(model, p)
    h = amplitudes(model, p, hatted=True)
    return np.array([
        abs(h.Tl * np.conj(d.Tl) + h.Rl * np.conj(d.Rl) - 1.0),
        abs(h.Tr * np.conj(d.Tr) + h.Rr * np.conj(d.Rr) - 1.0),
        abs(np.conj(h.Tl) * d.Rr + d.Tr * np.conj(h.Rl)),
        abs(d.Tl * np.conj(h.Rr) + np.conj(h.Tr) * d.Rl),
    ])


def _s1(model, q):
    return s_eigenvalues(amplitudes(model, q)).S1


def check_pam_relations(model: SeparableModel, q):
    """Residuals of the three analytic S1 relations at complex momentum q.

    Relation 1: S1(q) = conj(S1_hat(-conj(q)))
    Relation 2: conj(S1_hat(conj(q))) * S1(q) = 1
    Relation 3: S1(q) * S1(-q) = 1
    All evaluation points must avoid core poles (CorePole propagates).
    """
    q = complex(q)
    hat = model.hatted()
    s = _s1(model, q)
    return np.array([
        abs(s - np.conj(_s1(hat, -np.conj(q)))),
        abs(np.conj(_s1(hat, np.conj(q))) * s - 1.0),
        abs(s * _s1(model, -q) - 1.0),
    ])
