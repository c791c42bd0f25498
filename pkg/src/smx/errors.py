"""Exception types shared across the library."""


class SmxError(Exception):
    """Base class for all numerical / domain errors raised by smx."""


class DegenerateLeadingCoefficient(SmxError):
    """Polynomial cannot be normalized to monic form."""


class NoConvergence(SmxError):
    """An iterative refinement failed to reach its tolerance."""


class PoleHit(SmxError):
    """Evaluation point coincides with a pole of a rational function."""


class ParameterDomain(SmxError):
    """Model parameters outside the admissible domain."""


class QuadratureNoConvergence(SmxError):
    """Adaptive quadrature could not reach the requested tolerance."""


class CorePole(SmxError):
    """Evaluation point sits on a core singularity (zero of 1 - V0*Q0)."""


class ZeroMomentum(SmxError):
    """Scattering amplitudes are undefined at p = 0."""


class BranchMismatch(SmxError):
    """Quadratic-formula S-matrix eigenvalues do not match the closed branch."""


class NotRational(SmxError):
    """Model does not carry a rational closed-form resolvent."""


class DomainExit(SmxError):
    """Parameter sweep left the model's admissible domain."""


class MatchingAmbiguity(SmxError):
    """Pole-track matching could not be resolved by step bisection."""


class NoCollisionInBracket(SmxError):
    """Requested bracket does not contain a pole collision."""


class BoxTooSmall(SmxError):
    """Discretization box does not contain the kernel's decay."""


class DegenerateSpectrum(SmxError):
    """Random Hamiltonian generation kept producing degenerate spectra."""


class IllConditioned(SmxError):
    """Eigenvector matrix too ill-conditioned for biorthogonal constructions."""


class UnpairedEigenvalue(SmxError):
    """Spectrum is not closed under complex conjugation within tolerance."""
