"""Separable-potential models: form factors, coordinate kernels, resolvents.

Natural units hbar = m = 1 throughout. The momentum scale is p0 =
sqrt(|V0|) and the length scale L0 = 1/p0; with |V0| = 1 both scales are
unity and all quoted parameters are directly in p0 units.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .core import (
    Polynomial,
    RationalFunction,
    cluster_roots,
    polynomial_roots,
    rational_residue,
)
from .errors import NoConvergence, ParameterDomain, PoleHit, QuadratureNoConvergence

TWO_PI_I = 2j * np.pi


class Kind(enum.Enum):
    TIME_REVERSAL = "time_reversal"
    PARITY_PSEUDO_HERMITIAN = "parity"
    CUSTOM_RATIONAL = "custom"


@dataclass(frozen=True)
class Units:
    """Momentum/length scales derived from the interaction strength."""

    V0: float

    @property
    def p0(self):
        if self.V0 == 0:
            raise ParameterDomain("p0 undefined at V0 = 0")
        return math.sqrt(abs(self.V0))

    @property
    def L0(self):
        return 1.0 / self.p0


@dataclass(frozen=True)
class EnergyPoint:
    """Complex energy with its physical-sheet momentum (Im q > 0 branch)."""

    E: complex
    q: complex

    @classmethod
    def from_energy(cls, E):
        E = complex(E)
        q = np.sqrt(2 * E + 0j)
        if q.imag < 0 or (q.imag == 0 and q.real < 0):
            q = -q
        return cls(E, complex(q))

    @classmethod
    def from_momentum(cls, q):
        q = complex(q)
        return cls(q * q / 2, q)


@dataclass(frozen=True)
class SeparableModel:
    """Rank-one potential V = V0 |phi><chi| with rational form factors."""

    kind: Kind
    V0: float
    a: float
    b: float
    phi_p: RationalFunction
    chi_p: RationalFunction
    q0: RationalFunction  # resolvent overlap Q0 as a rational function of q
    phi_x: object = field(default=None, repr=False)  # callable or None
    chi_x: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def units(self):
        return Units(self.V0)

    # Schwarz-reflected conjugates, valid at complex momenta
    def phi_star(self):
        return self._memo("phi_star", lambda: self.phi_p.conj_coeffs())

    def chi_star(self):
        return self._memo("chi_star", lambda: self.chi_p.conj_coeffs())

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def hatted(self):
        """Model describing H^dagger: V^dagger = V0 |chi><phi|.

        Q0 transforms as Q0_hat(q) = conj(Q0(-conj(q))), a rational identity.
        """

        def build():
            return SeparableModel(
                kind=Kind.CUSTOM_RATIONAL,
                V0=self.V0,
                a=self.a,
                b=self.b,
                phi_p=self.chi_p,
                chi_p=self.phi_p,
                q0=self.q0.conj_coeffs().flip_sign(),
                phi_x=self.chi_x,
                chi_x=self.phi_x,
            )

        return self._memo("hatted", build)

    def core_polynomial(self):
        """Numerator polynomial of 1 - V0*Q0(q) after clearing denominators."""
        return self._memo(
            "core_poly",
            lambda: self.q0.denominator - self.V0 * self.q0.numerator,
        )

    def core_roots(self):
        return self._memo("core_roots", lambda: tuple(polynomial_roots(self.core_polynomial())))


def _tr_resolvent(a, b):
    # contour result for the time-reversal symmetric model
    K = -1j * math.sqrt(2 * b) / (a + b) ** 1.5
    num = Polynomial(
        K * np.array([2 * a * (a + b) ** 2, -1j * (2 * a + b) * (3 * a + b), -(3 * a + b)])
    )
    lin_q = Polynomial([0.0, 1.0])
    f_a = Polynomial([a, -1j])  # (a - i q)
    f_b = Polynomial([b, -1j])
    den = lin_q * f_a * f_a * f_b
    return RationalFunction(num, den)


def _parity_resolvent(a, b):
    s = 4 * a**2 + b**2
    num = Polynomial(
        np.array([-1j * a * s**2, -4 * a**2 * (10 * a**2 + b**2), 32j * a**3, 8 * a**2]) / s
    )
    lin_q = Polynomial([0.0, 1.0])
    f_a = Polynomial([a, -1j])
    shifted = f_a * f_a + Polynomial([b**2])  # b^2 + (a - i q)^2
    den = lin_q * f_a * f_a * shifted
    return RationalFunction(num, den)


def make_model(kind, V0, a=None, b=None, phi_p=None, chi_p=None, phi_x=None, chi_x=None):
    """Build a SeparableModel of the given kind.

    For the two built-in models the momentum form factors and the rational
    resolvent are filled in from their closed forms. A custom model takes
    arbitrary rational phi_p / chi_p (normalization is the caller's
    responsibility) and gets its resolvent from contour residues.
    """
    kind = Kind(kind)
    if V0 == 0:
        raise ParameterDomain("V0 must be nonzero (it sets the momentum scale)")
    if kind is Kind.TIME_REVERSAL:
        if a is None or b is None or a <= 0 or b <= 0:
            raise ParameterDomain("time-reversal model needs a > 0 and b > 0")
        chi = RationalFunction(
            Polynomial([math.sqrt(2 * a**3 / math.pi)]),
            Polynomial([a**2, 0.0, 1.0]),
        )
        phi = RationalFunction(
            Polynomial([math.sqrt(a * b * (a + b) / math.pi)]),
            Polynomial([1j * a, 1.0]) * Polynomial([-1j * b, 1.0]),
        )
        root_ab = math.sqrt(a)
        pref = math.sqrt(2 * a * b / (a + b))

        def chi_coord(x):
            return root_ab * np.exp(-a * np.abs(x))

        def phi_coord(x):
            x = np.asarray(x, dtype=float)
            return pref * np.where(x > 0, np.exp(-b * x), np.exp(a * x))

        return SeparableModel(kind, V0, a, b, phi, chi, _tr_resolvent(a, b), phi_coord, chi_coord)

    if kind is Kind.PARITY_PSEUDO_HERMITIAN:
        if a is None or b is None or a <= 0:
            raise ParameterDomain("parity model needs a > 0 (b any real)")
        amp = math.sqrt(a / (2 * math.pi)) * (2 * a + 1j * b)
        chi = RationalFunction(
            Polynomial([amp]),
            Polynomial([1j * a, 1.0]) * Polynomial([b - 1j * a, 1.0]),
        )
        phi = RationalFunction(
            Polynomial([amp]),
            Polynomial([-1j * a, 1.0]) * Polynomial([-b + 1j * a, 1.0]),
        )
        sa = math.sqrt(a)

        def chi_coord(x):
            x = np.asarray(x, dtype=complex)
            return sa * np.where(x.real > 0, np.exp(-(a + 1j * b) * x), np.exp(a * x))

        def phi_coord(x):
            x = np.asarray(x, dtype=complex)
            return sa * np.where(x.real > 0, np.exp(-a * x), np.exp((a + 1j * b) * x))

        return SeparableModel(
            kind, V0, a, b, phi, chi, _parity_resolvent(a, b), phi_coord, chi_coord
        )

    if phi_p is None or chi_p is None:
        raise ParameterDomain("custom model needs explicit phi_p and chi_p")
    q0 = fit_resolvent(phi_p, chi_p)
    return SeparableModel(
        kind, V0, a if a is not None else 1.0, b if b is not None else 0.0,
        phi_p, chi_p, q0, phi_x, chi_x,
    )


def kernel_xy(model: SeparableModel, x, y):
    """Coordinate kernel <x|V|y> = V0 * phi(x) * conj(chi(y))."""
    if model.phi_x is None or model.chi_x is None:
        raise ParameterDomain("model has no coordinate-space form factors")
    return model.V0 * np.asarray(model.phi_x(x)) * np.conj(np.asarray(model.chi_x(y)))


def q0_closed(model: SeparableModel, q):
    """Rational resolvent overlap Q0(q), continued to the whole q-plane."""
    q = complex(q)
    # numerically computed pole locations jitter by ~sqrt(eps) for
    # multiple roots, so the guard band must be wider than that
    for r in model.q0.poles():
        if abs(q - r) < 5e-8 * max(1.0, abs(r)):
            raise PoleHit(f"Q0 evaluated at its pole {r}")
    return model.q0(q)


def q0_quadrature(model: SeparableModel, E, tol: float = 1e-9):
    """Independent oracle: adaptive quadrature of <chi|(E - H0)^{-1}|phi>.

    Integrates chi*(p) phi(p) / (E - p^2/2) over the real p axis; E must
    stay off the positive real axis (the continuous spectrum).
    """
    E = complex(E)
    if E.imag == 0 and E.real >= 0:
        raise QuadratureNoConvergence("E on the continuous spectrum; integrand singular")
    chi_s = model.chi_star()
    phi = model.phi_p

    def integrand(p):
        return chi_s(p) * phi(p) / (E - p * p / 2)

    re, re_err = quad(lambda p: integrand(p).real, -np.inf, np.inf,
                      epsabs=tol / 100, epsrel=1e-12, limit=400)
    im, im_err = quad(lambda p: integrand(p).imag, -np.inf, np.inf,
                      epsabs=tol / 100, epsrel=1e-12, limit=400)
    if re_err + im_err > tol:
        raise QuadratureNoConvergence(
            f"quadrature error estimate {re_err + im_err:.2e} exceeds {tol:.1e}"
        )
    return re + 1j * im


def _cluster_scaled(roots):
    # np.roots splits multiple roots by roughly sqrt(eps); merge with a
    # tolerance loose enough to recover their multiplicity.
    tol = 1e-6 * max(1.0, max(abs(r) for r in roots))
    return cluster_roots(roots, tol=tol)


def resolvent_samples(phi_p: RationalFunction, chi_p: RationalFunction, qs):
    """Q0 at specific points with Im q > 0, via residues of the p-integral.

    For each q the integrand -2 f(p) / ((p-q)(p+q)) with f = chi* phi is
    closed in the upper half p-plane; contributing poles are p = q and the
    upper-half poles of f.
    """
    f = chi_p.conj_coeffs() * phi_p
    num, den = f.numerator, f.denominator
    clusters = _cluster_scaled(polynomial_roots(den))
    upper = [(z, m) for z, m in clusters if z.imag > 0]
    out = []
    for q in qs:
        q = complex(q)
        if q.imag <= 0:
            raise ValueError("residue evaluation needs Im q > 0")
        total = -f(q) / q
        den_full = den * Polynomial([-q, 1.0]) * Polynomial([q, 1.0])
        for z, m in upper:
            total += rational_residue(-2 * num, den_full, z, m)
        out.append(TWO_PI_I * total)
    return np.array(out)


def fit_resolvent(phi_p: RationalFunction, chi_p: RationalFunction, check_tol: float = 1e-8):
    """Construct Q0 as a rational function of q for arbitrary rational form factors.

    The residue formula gives Q0 pointwise in the upper half plane; its
    analytic continuation is rational with poles confined to q = 0, the
    reflected upper-half poles of chi* phi and the poles of the p-integrand.
    The numerator is recovered by sampling and least squares, then the
    quotient is reduced.
    """
    f = chi_p.conj_coeffs() * phi_p
    den_roots = polynomial_roots(f.denominator)
    clusters = _cluster_scaled(den_roots)
    merge_tol = 1e-6 * max(1.0, max(abs(r) for r in den_roots))
    # Poles of the continued Q0: q = 0, lower-half poles of the integrand,
    # and reflections -p_j of its upper-half poles (order = max of the two).
    candidates = {}  # position -> multiplicity

    def bump(pos, mult):
        for known in candidates:
            if abs(known - pos) < merge_tol:
                candidates[known] = max(candidates[known], mult)
                return
        candidates[pos] = mult

    for z, m in clusters:
        if z.imag < 0:
            bump(z, m)
        elif z.imag > 0:
            bump(-z, m)
    M = Polynomial([0.0, 1.0])
    for pos, mult in candidates.items():
        for _ in range(mult):
            M = M * Polynomial([-pos, 1.0])
    deg_m = M.degree
    deg_p = deg_m - 2  # Q0 decays at least like 1/q^2
    scale = max(1.0, max(abs(z) for z, _ in clusters) if clusters else 1.0)
    rng = np.random.default_rng(1234)
    qs = []
    while len(qs) < 3 * (deg_p + 1) + 12:
        cand = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2)) * scale
        if all(abs(cand - z) > 0.05 * scale and abs(cand + z) > 0.05 * scale for z, _ in clusters) \
                and abs(cand) > 0.05 * scale:
            qs.append(cand)
    qs = np.array(qs)
    vals = resolvent_samples(phi_p, chi_p, qs)
    # fit in the scaled variable w = q/scale for conditioning
    w = qs / scale
    A = np.vander(w, deg_p + 1, increasing=True)
    rhs = vals * M(qs)
    coef_w, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    coef = coef_w / scale ** np.arange(deg_p + 1)
    q0 = RationalFunction(Polynomial(coef), M, reduce_tol=1e-8)
    # verify on fresh points
    test_q = np.array([scale * complex(0.37, 0.61), scale * complex(-0.83, 0.29),
                       scale * complex(1.31, 1.07)])
    ref = resolvent_samples(phi_p, chi_p, test_q)
    got = np.array([q0(t) for t in test_q])
    err = np.max(np.abs(got - ref) / (1 + np.abs(ref)))
    if err > check_tol:
        raise NoConvergence(f"rational resolvent fit mismatch {err:.2e}")
    return q0
