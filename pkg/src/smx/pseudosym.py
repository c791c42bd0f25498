"""Finite-matrix laboratory for pseudo-Hermiticity constructions.

Random matrices are projected onto one of the four symmetry classes that
force conjugate-pair spectra; from the biorthogonal eigensystem we build
the antilinear metric tau, the linear metric eta, and a symmetry B that
commutes with H.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, IllConditioned, UnpairedEigenvalue

PAIRING_TOL = 1e-8
CONDITION_LIMIT = 1e8
MAX_RESAMPLE = 10

CODES = ("II", "IV", "V", "VII")


@dataclass(frozen=True)
class AntilinearMap:
    """Antilinear operator acting as zeta -> matrix @ conj(zeta)."""

    matrix: np.ndarray

    def __call__(self, zeta):
        return self.matrix @ np.conj(zeta)

    @property
    def is_symmetric(self):
        m = self.matrix
        return bool(np.allclose(m, m.T, atol=1e-12 * np.linalg.norm(m)))


@dataclass(frozen=True)
class MatrixLabSystem:
    H: np.ndarray
    eigenvalues: np.ndarray
    right_vecs: np.ndarray  # columns psi_n
    left_vecs: np.ndarray  # columns phi_n, normalized so left^H right = 1
    symmetry_code: str
    seed: int


def _reversal(n):
    return np.eye(n)[::-1]


def _project(code, H):
    n = H.shape[0]
    P = _reversal(n)
    if code == "II":
        return 0.5 * (H + H.conj().T)
    if code == "V":
        return H.real.astype(complex)
    if code == "VII":
        return 0.5 * (H + P @ H.conj() @ P)
    if code == "IV":
        return 0.5 * (H + P @ H.conj().T @ P)
    raise ValueError(f"code must be one of {CODES}, got {code!r}")


def _eigensystem(H):
    """Eigenvalues with biorthonormal right and left eigenvector columns."""
    evals, right = np.linalg.eig(H)
    lvals, left = np.linalg.eig(H.conj().T)
    order = [int(np.argmin(np.abs(lvals - np.conj(e)))) for e in evals]
    if len(set(order)) != len(order):
        raise DegenerateSpectrum("left/right eigenvalue matching is ambiguous")
    left = left[:, order]
    # normalize <phi_n|psi_m> = delta_nm
    overlaps = np.einsum("in,in->n", np.conj(left), right)
    left = left / np.conj(overlaps)[None, :]
    return evals, right, left


def random_symmetric_hamiltonian(code, n, seed) -> MatrixLabSystem:
    """Seeded random matrix projected onto a conjugate-pairing symmetry class.

    Resamples (up to 10 times) when the spectrum is too close to
    degenerate for a stable biorthogonal eigensystem.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLE):
        raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = _project(code, raw)
        evals = np.linalg.eigvals(H)
        gaps = np.abs(evals[:, None] - evals[None, :]) + np.eye(n)
        if gaps.min() > 1e-6 * max(1.0, np.abs(evals).max()):
            evals, right, left = _eigensystem(H)
            return MatrixLabSystem(
                H=H, eigenvalues=evals, right_vecs=right, left_vecs=left,
                symmetry_code=code, seed=int(seed),
            )
    raise DegenerateSpectrum(f"no simple spectrum after {MAX_RESAMPLE} draws (n={n}, seed={seed})")


def build_tau(system: MatrixLabSystem) -> AntilinearMap:
    """Antilinear metric tau: zeta -> sum_n <zeta|phi_n> phi_n.

    Its matrix N = Phi Phi^T (Phi = left-eigenvector columns) is complex
    symmetric and intertwines H with its adjoint: N H* = H^dagger N.
    """
    phi = system.left_vecs
    cond = np.linalg.cond(system.right_vecs)
    if cond > CONDITION_LIMIT:
        raise IllConditioned(f"eigenvector condition number {cond:.2e}")
    return AntilinearMap(phi @ phi.T)


def _conjugate_partner(evals, tol=PAIRING_TOL):
    """partner[i] = index j with evals[j] = conj(evals[i]); j may equal i."""
    n = len(evals)
    scale = max(1.0, np.abs(evals).max())
    partner = np.full(n, -1, dtype=int)
    used = set()
    for i in range(n):
        if partner[i] >= 0:
            continue
        d = np.abs(evals - np.conj(evals[i]))
        for j in np.argsort(d):
            if j not in used or j == i:
                break
        if d[j] > tol * scale:
            raise UnpairedEigenvalue(
                f"eigenvalue {evals[i]} has no conjugate partner (best gap {d[j]:.2e})"
            )
        partner[i], partner[j] = j, i
        used.update((i, int(j)))
    return partner


def build_eta(system: MatrixLabSystem) -> np.ndarray:
    """Hermitian metric eta with eta H = H^dagger eta.

    Real-eigenvalue states map to their own left partners; complex
    conjugate pairs are cross-mapped.
    """
    evals, phi = system.eigenvalues, system.left_vecs
    partner = _conjugate_partner(evals)
    n = len(evals)
    eta = np.zeros((n, n), dtype=complex)
    for i in range(n):
        eta += np.outer(phi[:, partner[i]], np.conj(phi[:, i]))
    return eta


def build_commuting_B(system: MatrixLabSystem):
    """Symmetry B commuting with H, built from the metrics.

    Codes II and IV (linear defining operator) yield an antilinear B;
    codes V and VII (antilinear defining operator) yield a linear matrix.
    """
    tau = build_tau(system).matrix
    code = system.symmetry_code
    n = tau.shape[0]
    if code == "II":
        eta = build_eta(system)
        return AntilinearMap(np.linalg.solve(eta, tau))
    if code == "IV":
        return AntilinearMap(_reversal(n) @ tau)
    eta = build_eta(system)
    core = np.conj(np.linalg.solve(eta, tau))
    if code == "V":
        return core
    if code == "VII":
        return _reversal(n) @ core
    raise ValueError(f"unsupported code {code!r}")


def commutation_residual(system: MatrixLabSystem, B) -> float:
    """Relative commutator norm: BH - HB, with the antilinear twist for maps."""
    H = system.H
    norm = np.linalg.norm(H)
    if isinstance(B, AntilinearMap):
        M = B.matrix
        return float(np.linalg.norm(M @ np.conj(H) - H @ M) / norm)
    return float(np.linalg.norm(B @ H - H @ B) / norm)


def verify_conjugate_pairing(system: MatrixLabSystem, tol: float = PAIRING_TOL) -> bool:
    """True iff the eigenvalue multiset is closed under conjugation."""
    try:
        _conjugate_partner(system.eigenvalues, tol=tol)
    except UnpairedEigenvalue:
        return False
    return True
