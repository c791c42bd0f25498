"""Discrete kernel symmetries: the eight-element superoperator group.

A potential kernel K[i][j] = <x_i|V|x_j> on a sign-symmetric grid admits
three commuting involutions: entrywise conjugation (C), transposition
(T), and simultaneous reversal of both indices (I). Their compositions
form an elementary abelian group of order eight; each symmetry class of
the Hamiltonian corresponds to invariance of K under one group element.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import amplitudes
from .errors import BoxTooSmall
from .models import Kind, SeparableModel, kernel_xy

# symmetry code (Roman numeral) -> invariance label on the kernel
CODE_TO_LABEL = {
    "I": "1",
    "II": "CT",
    "III": "I",
    "IV": "CTI",
    "V": "C",
    "VI": "T",
    "VII": "IC",
    "VIII": "TI",
}

MIRROR_CODES = ("II", "IV", "V", "VII")

_CANONICAL = {
    frozenset(): "1",
    frozenset("I"): "I",
    frozenset("T"): "T",
    frozenset("C"): "C",
    frozenset("CT"): "CT",
    frozenset("TI"): "TI",
    frozenset("IC"): "IC",
    frozenset("CTI"): "CTI",
}

LABELS = tuple(_CANONICAL.values())

DEFAULT_THRESHOLD = 1e-8
DECAY_FRACTION = 1e-6


@dataclass(frozen=True)
class KernelMatrix:
    """Potential kernel sampled on a symmetric midpoint-offset grid."""

    grid: np.ndarray
    values: np.ndarray
    dx: float


@dataclass(frozen=True)
class SuperOp:
    """One element of the kernel symmetry group."""

    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            canon = _CANONICAL.get(frozenset(self.label) - {"1"})
            if canon is None:
                raise ValueError(f"unknown superoperator label {self.label!r}")
            object.__setattr__(self, "label", canon)

    @property
    def linearity(self):
        return "antiunitary" if "C" in self.label else "unitary"

    def compose(self, other: "SuperOp") -> "SuperOp":
        mine = frozenset(self.label) - {"1"}
        theirs = frozenset(other.label) - {"1"}
        return SuperOp(_CANONICAL[mine ^ theirs])


@dataclass(frozen=True)
class SymmetryReport:
    residuals: dict  # code -> relative Frobenius residual
    verdicts: dict  # code -> bool
    threshold: float


def discretize_kernel(model: SeparableModel, L: float, N: int) -> KernelMatrix:
    """Sample the coordinate kernel on a midpoint-offset grid over [-L, L].

    The offset keeps x = 0 off the grid, so index reversal maps the grid
    onto its negative exactly. Raises BoxTooSmall when the kernel has not
    decayed below 1e-6 of its peak at the boundary.
    """
    if N % 2 != 0 or N < 2:
        raise ValueError("N must be even and positive")
    dx = 2.0 * L / N
    x = -L + (np.arange(N) + 0.5) * dx
    K = kernel_xy(model, x[:, None], x[None, :])
    K = np.asarray(K, dtype=complex)
    peak = np.max(np.abs(K))
    if peak > 0:
        edge = max(
            np.max(np.abs(K[0, :])), np.max(np.abs(K[-1, :])),
            np.max(np.abs(K[:, 0])), np.max(np.abs(K[:, -1])),
        )
        if edge >= DECAY_FRACTION * peak:
            raise BoxTooSmall(
                f"kernel boundary magnitude {edge:.2e} vs peak {peak:.2e}; increase L"
            )
    return KernelMatrix(grid=x, values=K, dx=dx)


def superop_apply(op: SuperOp, K):
    """Apply a group element to a kernel (KernelMatrix or raw square array)."""
    values = K.values if isinstance(K, KernelMatrix) else np.asarray(K)
    out = values
    if "T" in op.label:
        out = out.T
    if "C" in op.label:
        out = np.conj(out)
    if "I" in op.label:
        out = out[::-1, ::-1]
    if isinstance(K, KernelMatrix):
        return KernelMatrix(grid=K.grid, values=out.copy(), dx=K.dx)
    return out.copy()


def _default_box(model: SeparableModel):
    if model.kind is Kind.TIME_REVERSAL:
        rate = min(model.a, model.b)
    elif model.kind is Kind.PARITY_PSEUDO_HERMITIAN:
        rate = model.a
    else:
        raise ValueError("custom models need an explicit box size L")
    # e^{-16} ~ 1e-7, comfortably under the boundary decay requirement
    return 16.0 / rate


def classify_kernel(K, threshold: float = DEFAULT_THRESHOLD) -> SymmetryReport:
    """Residual of K under each symmetry label, with verdicts at threshold."""
    values = K.values if isinstance(K, KernelMatrix) else np.asarray(K)
    norm = np.linalg.norm(values)
    residuals, verdicts = {}, {}
    for code, label in CODE_TO_LABEL.items():
        image = superop_apply(SuperOp(label), values)
        r = float(np.linalg.norm(values - image) / norm) if norm > 0 else 0.0
        residuals[code] = r
        verdicts[code] = r < threshold
    return SymmetryReport(residuals=residuals, verdicts=verdicts, threshold=threshold)


def classify(model: SeparableModel, threshold: float = DEFAULT_THRESHOLD,
             L: float = None, N: int = 128) -> SymmetryReport:
    """Classify which of the eight kernel symmetries the model satisfies."""
    if L is None:
        L = _default_box(model)
    return classify_kernel(discretize_kernel(model, L, N), threshold)


def momentum_kernel(K: KernelMatrix) -> np.ndarray:
    """Unitary discrete Fourier conjugate of the kernel, E K E^dagger.

    For the subgroup {1, I, CT, CTI} the kernel transforms identically in
    both representations, which classify_kernel can verify on this matrix.
    """
    values = K.values
    n = values.shape[0]
    # momentum grid offset like the coordinate grid, so that reversing
    # indices negates p exactly and the subgroup checks stay exact
    dp = 2.0 * np.pi / (n * K.dx)
    p = (np.arange(n) + 0.5 - n / 2) * dp
    E = np.exp(-1j * np.outer(p, K.grid)) / np.sqrt(n)
    return E @ values @ E.conj().T


# Amplitude selection rules: code -> targets for (Tl, Tr, Rl, Rr), where
# a leading "h" means the adjoint-model amplitude.
SELECTION_RULES = {
    "I": ("Tl", "Tr", "Rl", "Rr"),
    "II": ("hTl", "hTr", "hRl", "hRr"),
    "III": ("Tr", "Tl", "Rr", "Rl"),
    "IV": ("hTr", "hTl", "hRr", "hRl"),
    "V": ("hTr", "hTl", "hRl", "hRr"),
    "VI": ("Tr", "Tl", "Rl", "Rr"),
    "VII": ("hTl", "hTr", "hRr", "hRl"),
    "VIII": ("Tl", "Tr", "Rr", "Rl"),
}


def amplitude_selection_rules(model: SeparableModel, code: str, p_grid) -> float:
    """Max residual of the four amplitude identities implied by a symmetry."""
    targets = SELECTION_RULES[code]
    worst = 0.0
    for p in np.atleast_1d(p_grid):
        d = amplitudes(model, float(p))
        h = amplitudes(model, float(p), hatted=True)
        pool = {"Tl": d.Tl, "Tr": d.Tr, "Rl": d.Rl, "Rr": d.Rr,
                "hTl": h.Tl, "hTr": h.Tr, "hRl": h.Rl, "hRr": h.Rr}
        for lhs, rhs in zip(("Tl", "Tr", "Rl", "Rr"), targets):
            worst = max(worst, abs(pool[lhs] - pool[rhs]))
    return worst
