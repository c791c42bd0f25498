"""Complex polynomial and rational-function primitives.

Coefficients are stored lowest degree first, as plain complex ndarrays.
Everything here is pure and immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLeadingCoefficient, NoConvergence, PoleHit

LEADING_TOL = 1e-14
ROOT_POLISH_TOL = 1e-12
CLUSTER_TOL = 1e-8


def _trim(coeffs):
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) < LEADING_TOL * scale:
        keep -= 1
    return c[:keep].copy()


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with complex coefficients, lowest degree first."""

    coefficients: np.ndarray

    def __init__(self, coefficients):
        object.__setattr__(self, "coefficients", _trim(coefficients))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_zero(self):
        return self.degree == 0 and self.coefficients[0] == 0

    def __call__(self, q):
        return np.polynomial.polynomial.polyval(q, self.coefficients)

    def deriv(self):
        c = self.coefficients
        if len(c) == 1:
            return Polynomial([0.0])
        return Polynomial(c[1:] * np.arange(1, len(c)))

    def __mul__(self, other):
        if np.isscalar(other):
            return Polynomial(self.coefficients * other)
        return Polynomial(np.convolve(self.coefficients, other.coefficients))

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=complex)
        out[: len(a)] += a
        out[: len(b)] += b
        return Polynomial(out)

    def __sub__(self, other):
        return self + Polynomial(-other.coefficients)

    def conj_coeffs(self):
        """Coefficient-wise conjugate: p -> conj(p(conj(q)))."""
        return Polynomial(np.conj(self.coefficients))

    def flip_sign(self):
        """Substitution q -> -q."""
        c = self.coefficients.copy()
        c[1::2] *= -1
        return Polynomial(c)

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        c = np.array([leading], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)


def polynomial_roots(p: Polynomial, polish_tol: float = ROOT_POLISH_TOL):
    """All complex roots of p, companion-matrix seeded and Newton polished.

    Returns exactly ``p.degree`` roots (with multiplicity). Raises
    NoConvergence if any polished root fails the residual bound
    |p(r)| < polish_tol * ||coefficients||.
    """
    c = p.coefficients
    if p.degree < 1:
        raise DegenerateLeadingCoefficient("polynomial has no roots (degree < 1)")
    scale = np.max(np.abs(c))
    if abs(c[-1]) <= 1e-14 * scale or abs(c[-1]) <= 1e-14:
        raise DegenerateLeadingCoefficient(
            f"leading coefficient {c[-1]} too small to normalize"
        )
    roots = np.roots(c[::-1] / c[-1])
    dp = p.deriv()
    norm = np.linalg.norm(c)
    polished = []
    for r in roots:
        x = complex(r)
        for _ in range(60):
            fx = p(x)
            if abs(fx) < 0.25 * polish_tol * norm:
                break
            d = dp(x)
            if d == 0:
                break
            step = fx / d
            if abs(step) > 1.0 + abs(x):  # runaway step, keep companion value
                break
            x -= step
        polished.append(x)
    residuals = [abs(p(x)) / norm for x in polished]
    if max(residuals) > polish_tol:
        raise NoConvergence(
            f"root polish stalled: worst residual {max(residuals):.3e} > {polish_tol:.1e}"
        )
    return polished


def cluster_roots(roots, tol: float = CLUSTER_TOL):
    """Group near-coincident roots.

    Returns a list of (center, multiplicity) with multiplicities summing to
    len(roots). Roots closer than tol are merged into one cluster.
    """
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for r in list(remaining):
                if any(abs(r - m) < tol for m in members):
                    members.append(r)
                    remaining.remove(r)
                    changed = True
        clusters.append((sum(members) / len(members), len(members)))
    return clusters


@dataclass(frozen=True)
class RationalFunction:
    """Ratio of two polynomials, reduced so shared roots are cancelled."""

    numerator: Polynomial
    denominator: Polynomial
    _den_roots: tuple = field(default=None, compare=False, repr=False)

    def __init__(self, numerator, denominator, reduce_tol: float = 1e-12):
        num = numerator if isinstance(numerator, Polynomial) else Polynomial(numerator)
        den = denominator if isinstance(denominator, Polynomial) else Polynomial(denominator)
        if den.is_zero:
            raise ZeroDivisionError("denominator is identically zero")
        if not num.is_zero and num.degree >= 1 and den.degree >= 1:
            num, den = _cancel_common_roots(num, den, reduce_tol)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        object.__setattr__(self, "_den_roots", None)

    def __call__(self, q):
        return self.numerator(q) / self.denominator(q)

    def poles(self):
        if self._den_roots is None:
            if self.denominator.degree < 1:
                object.__setattr__(self, "_den_roots", ())
            else:
                object.__setattr__(
                    self, "_den_roots", tuple(polynomial_roots(self.denominator))
                )
        return self._den_roots

    def conj_coeffs(self):
        return RationalFunction(self.numerator.conj_coeffs(), self.denominator.conj_coeffs())

    def flip_sign(self):
        return RationalFunction(self.numerator.flip_sign(), self.denominator.flip_sign())

    def __mul__(self, other):
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )


def _cancel_common_roots(num: Polynomial, den: Polynomial, tol: float):
    nr = polynomial_roots(num)
    dr = polynomial_roots(den)
    kept_d = list(dr)
    kept_n = []
    for r in nr:
        if kept_d:
            dists = [abs(r - d) for d in kept_d]
            j = int(np.argmin(dists))
            if dists[j] < tol * max(1.0, abs(r)):
                kept_d.pop(j)
                continue
        kept_n.append(r)
    if len(kept_n) == len(nr):
        return num, den
    lead_n = num.coefficients[-1]
    lead_d = den.coefficients[-1]
    return (
        Polynomial.from_roots(kept_n, lead_n),
        Polynomial.from_roots(kept_d, lead_d),
    )


def rational_eval(f: RationalFunction, q):
    """Evaluate f at q, refusing points that sit on a denominator root."""
    q = complex(q)
    if not np.isfinite(q):
        raise ValueError("evaluation point must be finite")
    for r in f.poles():
        if abs(q - r) < 1e-12:
            raise PoleHit(f"evaluation point {q} coincides with pole at {r}")
    return f(q)


# -- power-series helpers used by the generic resolvent construction --------


def taylor_shift(p: Polynomial, c):
    """Coefficients of p(t + c) in t, lowest first (Taylor expansion at c)."""
    n = len(p.coefficients)
    shifted = np.zeros(n, dtype=complex)
    cur = p.coefficients.copy()
    fact = 1.0
    for k in range(n):
        shifted[k] = np.polynomial.polynomial.polyval(c, cur) / fact
        cur = cur[1:] * np.arange(1, len(cur)) if len(cur) > 1 else np.array([0j])
        fact *= k + 1
    return shifted


def series_div(a, b, order):
    """First `order` coefficients of the power series a(t)/b(t), b[0] != 0."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros(order, dtype=complex)
    for k in range(order):
        acc = a[k] if k < len(a) else 0.0
        for j in range(1, k + 1):
            if j < len(b):
                acc -= b[j] * out[k - j]
        out[k] = acc / b[0]
    return out


def rational_residue(num: Polynomial, den: Polynomial, z0, mult: int):
    """Residue of num/den at the pole z0 of multiplicity mult.

    den must vanish at z0 to order mult; the leading mult coefficients of
    the shifted denominator are dropped.
    """
    a = taylor_shift(num, z0)
    b = taylor_shift(den, z0)[mult:]
    if len(b) == 0 or b[0] == 0:
        raise PoleHit(f"denominator does not have multiplicity-{mult} zero at {z0}")
    series = series_div(a, b, mult)
    return series[mult - 1]
