"""Scattering for 1D non-Hermitian separable potentials.

Amplitudes, S-matrix eigenvalues, complex-momentum pole structure,
kernel symmetry classification, and pseudo-Hermiticity constructions.
"""

__version__ = "0.1.0"

from .amplitudes import (
    ScatteringAmplitudes,
    SMatrixEigenvalues,
    alpha,
    amplitudes,
    check_generalized_unitarity,
    check_pam_relations,
    s_eigenvalues,
)
from .core import Polynomial, RationalFunction, polynomial_roots
from .errors import SmxError
from .models import (
    EnergyPoint,
    Kind,
    SeparableModel,
    Units,
    kernel_xy,
    make_model,
    q0_closed,
    q0_quadrature,
)
from .poles import (
    PoleClass,
    PoleRecord,
    PoleTrajectory,
    bound_state_census,
    check_mirror_symmetry,
    core_pole_polynomial,
    find_collision,
    find_poles,
    trace_trajectory,
)
from .pseudosym import (
    AntilinearMap,
    MatrixLabSystem,
    build_commuting_B,
    build_eta,
    build_tau,
    commutation_residual,
    random_symmetric_hamiltonian,
    verify_conjugate_pairing,
)
from .symmetry import (
    KernelMatrix,
    SuperOp,
    SymmetryReport,
    amplitude_selection_rules,
    classify,
    classify_kernel,
    discretize_kernel,
    momentum_kernel,
    superop_apply,
)

__all__ = [
    "__version__",
    "AntilinearMap",
    "EnergyPoint",
    "KernelMatrix",
    "Kind",
    "MatrixLabSystem",
    "Polynomial",
    "PoleClass",
    "PoleRecord",
    "PoleTrajectory",
    "RationalFunction",
    "ScatteringAmplitudes",
    "SeparableModel",
    "SMatrixEigenvalues",
    "SmxError",
    "SuperOp",
    "SymmetryReport",
    "Units",
    "alpha",
    "amplitudes",
    "amplitude_selection_rules",
    "bound_state_census",
    "build_commuting_B",
    "build_eta",
    "build_tau",
    "check_generalized_unitarity",
    "check_mirror_symmetry",
    "check_pam_relations",
    "classify",
    "classify_kernel",
    "commutation_residual",
    "core_pole_polynomial",
    "discretize_kernel",
    "find_collision",
    "find_poles",
    "kernel_xy",
    "make_model",
    "momentum_kernel",
    "polynomial_roots",
    "q0_closed",
    "q0_quadrature",
    "random_symmetric_hamiltonian",
    "s_eigenvalues",
    "superop_apply",
    "trace_trajectory",
    "verify_conjugate_pairing",
]
