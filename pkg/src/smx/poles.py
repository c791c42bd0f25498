"""Core poles of the S matrix: extraction, classification, tracing.

The poles are the roots of 1 - V0*Q0(q) with Q0 rational, so everything
reduces to polynomial root finding plus bookkeeping: classification by
half-plane, mirror-symmetry testing, and continuation of root tracks
along a model parameter.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .core import Polynomial, cluster_roots, polynomial_roots
from .errors import (
    DomainExit,
    MatchingAmbiguity,
    NoCollisionInBracket,
    NotRational,
    ParameterDomain,
)
from .models import Kind, SeparableModel, make_model

AXIS_TOL = 1e-7  # |Re q| below this counts as "on the imaginary axis"
MULTIPLICITY_TOL = 1e-6
COLLISION_TOL = 1e-6
BISECTION_FLOOR = 1e-9

PARAMETER_NAMES = ("V0", "a", "b")


class PoleClass(enum.Enum):
    BOUND = "bound"
    COMPLEX_ENERGY_BOUND_PAIR = "complex_energy_bound_pair"
    VIRTUAL = "virtual"
    RESONANCE = "resonance"
    ANTIRESONANCE = "antiresonance"


@dataclass(frozen=True)
class PoleRecord:
    q: complex
    energy: complex
    pole_class: PoleClass
    residual: float
    multiplicity_flag: bool = False


@dataclass(frozen=True)
class PoleTrajectory:
    parameter_name: str
    samples: tuple  # of (parameter value, tuple of PoleRecord, track order)
    collisions: tuple  # of (parameter value, (label_a, label_b))


def classify_pole(q, axis_tol: float = AXIS_TOL) -> PoleClass:
    q = complex(q)
    if abs(q.real) < axis_tol:
        return PoleClass.BOUND if q.imag > 0 else PoleClass.VIRTUAL
    if q.imag > 0:
        return PoleClass.COMPLEX_ENERGY_BOUND_PAIR
    return PoleClass.RESONANCE if q.real > 0 else PoleClass.ANTIRESONANCE


def core_pole_polynomial(model: SeparableModel) -> Polynomial:
    """Numerator of 1 - V0*Q0(q) after clearing denominators."""
    if model.q0 is None:
        raise NotRational("model carries no rational resolvent")
    return model.core_polynomial()


def _pole_record(model, q, neighbors):
    q = complex(q)
    if model.V0 == 0:
        residual = 0.0
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            residual = abs(1.0 - model.V0 * model.q0(q))
        if not np.isfinite(residual):
            # root sits on a resolvent pole; fall back to the cleared form
            core = model.core_polynomial()
            residual = abs(core(q)) / np.linalg.norm(core.coefficients)
    mult = any(abs(q - r) < MULTIPLICITY_TOL for r in neighbors if r is not q)
    return PoleRecord(
        q=q,
        energy=q * q / 2,
        pole_class=classify_pole(q),
        residual=float(residual),
        multiplicity_flag=mult,
    )


def find_poles(model: SeparableModel):
    """Classified core poles, ordered by Im descending then Re ascending."""
    roots = polynomial_roots(core_pole_polynomial(model))
    roots.sort(key=lambda z: (-z.imag, z.real))
    return [_pole_record(model, q, roots) for q in roots]


def check_mirror_symmetry(poles, tol: float = 1e-9):
    """Is the pole multiset invariant under q -> -conj(q)?

    Returns (verdict, worst_mismatch): the largest distance from any
    mirrored pole to its nearest actual pole.
    """
    qs = [p.q if isinstance(p, PoleRecord) else complex(p) for p in poles]
    if not qs:
        raise ValueError("empty pole list")
    # collapse numerically split multiple roots to their cluster centers
    scale = max(1.0, max(abs(q) for q in qs))
    centers = [c for c, _ in cluster_roots(qs, tol=1e-6 * scale)]
    worst = max(min(abs(-np.conj(q) - r) for r in centers) for q in centers)
    return worst <= tol, float(worst)


def _model_at(model: SeparableModel, name: str, value: float) -> SeparableModel:
    if name == "V0":
        # Q0 describes the free resolvent only, so the form factors and
        # resolvent carry over; V0 = 0 is a legal interior point here.
        return dataclasses.replace(model, V0=float(value), _cache={})
    if model.kind is Kind.CUSTOM_RATIONAL:
        raise ParameterDomain("custom models only support V0 sweeps")
    kw = {"a": model.a, "b": model.b}
    kw[name] = float(value)
    return make_model(model.kind, model.V0, **kw)


def _roots_at(model, name, value):
    m = _model_at(model, name, value)
    return np.array(polynomial_roots(core_pole_polynomial(m))), m


def _assign(prev, cur):
    dist = np.abs(prev[:, None] - cur[None, :])
    rows, cols = linear_sum_assignment(dist)
    order = np.empty(len(cur), dtype=int)
    order[rows] = cols
    matched = cur[order]
    return matched, float(np.max(np.abs(prev - matched)))


def _median_separation(roots):
    n = len(roots)
    if n < 2:
        return np.inf
    d = [abs(roots[i] - roots[j]) for i in range(n) for j in range(i + 1, n)]
    return float(np.median(d))


def _continue_tracks(model, name, v0, roots0, v1, floor):
    """Roots at v1 ordered to continue the tracks of roots0 at v0."""
    roots1, _ = _roots_at(model, name, v1)
    matched, worst = _assign(roots0, roots1)
    limit = max(0.2 * _median_separation(roots0), 10 * floor)
    if worst <= limit:
        return matched
    if abs(v1 - v0) <= floor:
        raise MatchingAmbiguity(
            f"{name} step at bisection floor near {v1} with displacement {worst:.2e}"
        )
    mid = 0.5 * (v0 + v1)
    roots_mid = _continue_tracks(model, name, v0, roots0, mid, floor)
    return _continue_tracks(model, name, mid, roots_mid, v1, floor)


def _min_pair(roots):
    n = len(roots)
    best = (np.inf, (0, 0))
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(roots[i] - roots[j])
            if d < best[0]:
                best = (d, (i, j))
    return best


def trace_trajectory(model: SeparableModel, parameter_name: str, start, stop, steps: int):
    """Follow the pole tracks while one parameter sweeps [start, stop].

    Track labels are assigned by minimal-displacement matching between
    consecutive samples, with automatic step bisection when the pattern
    moves too far in one step. Collision events (two tracks meeting) are
    located by refining local minima of the pairwise root distance.
    """
    if parameter_name not in PARAMETER_NAMES:
        raise ValueError(f"parameter_name must be one of {PARAMETER_NAMES}")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    values = np.linspace(float(start), float(stop), int(steps))
    floor = max(BISECTION_FLOOR, 1e-12 * abs(stop - start))
    try:
        roots, m = _roots_at(model, parameter_name, values[0])
        track_roots = [np.array(sorted(roots, key=lambda z: (-z.imag, z.real)))]
        models = [m]
        for v_prev, v in zip(values[:-1], values[1:]):
            track_roots.append(
                _continue_tracks(model, parameter_name, v_prev, track_roots[-1], v, floor)
            )
            models.append(_model_at(model, parameter_name, v))
    except ParameterDomain as exc:
        raise DomainExit(str(exc)) from exc

    samples = tuple(
        (float(v), tuple(_pole_record(m, q, list(r)) for q in r))
        for v, r, m in zip(values, track_roots, models)
    )

    collisions = []
    dmin = [_min_pair(r) for r in track_roots]
    for i in range(len(values)):
        d, pair = dmin[i]
        if d < COLLISION_TOL:
            collisions.append((float(values[i]), pair))
            continue
        interior = 0 < i < len(values) - 1
        if interior and d <= dmin[i - 1][0] and d <= dmin[i + 1][0]:
            refined = _refine_collision(model, parameter_name, values[i - 1], values[i + 1])
            if refined is not None:
                v_star, d_star = refined
                roots_star, _ = _roots_at(model, parameter_name, v_star)
                _, pair_star = _min_pair(roots_star)
                matched, _ = _assign(track_roots[i], roots_star)
                # identify colliding entries with the tracks of sample i
                labels = tuple(sorted(
                    int(np.argmin(np.abs(matched - roots_star[k]))) for k in pair_star
                ))
                collisions.append((float(v_star), labels))
    # deduplicate events found from both neighbors of a minimum
    seen, unique = set(), []
    for v, pair in collisions:
        key = (round(v, 7), pair)
        if key not in seen:
            seen.add(key)
            unique.append((v, pair))
    return PoleTrajectory(parameter_name, samples, tuple(unique))


def _refine_collision(model, name, lo, hi, tol=COLLISION_TOL):
    def objective(v):
        try:
            roots, _ = _roots_at(model, name, v)
        except ParameterDomain:
            return np.inf
        return _min_pair(roots)[0]

    def pair_product(v):
        # discriminant-like quantity: analytic in v with a simple zero at
        # a collision, unlike the cusped min-distance itself
        try:
            roots, _ = _roots_at(model, name, v)
        except ParameterDomain:
            return None
        out = 1.0 + 0.0j
        n = len(roots)
        for i in range(n):
            for j in range(i + 1, n):
                out *= (roots[i] - roots[j]) ** 2
        return out

    lo, hi = float(lo), float(hi)
    grid = np.linspace(lo, hi, 41)
    vals = [objective(v) for v in grid]
    k = int(np.argmin(vals))
    v0 = grid[max(k - 1, 0)]
    v1 = grid[min(k + 1, len(grid) - 1)]
    g0, g1 = pair_product(v0), pair_product(v1)
    if g0 is None or g1 is None:
        return None
    scale = max(1.0, abs(hi))
    for _ in range(60):
        if g1 == g0:
            break
        step = (g1 * (v1 - v0) / (g1 - g0)).real
        v0, g0 = v1, g1
        v1 = min(max(v1 - step, lo), hi)
        g1 = pair_product(v1)
        if g1 is None:
            return None
        if abs(v1 - v0) < 1e-13 * scale:
            break
    fx = objective(v1)
    if fx < tol:
        return float(v1), float(fx)
    return None


def find_collision(model: SeparableModel, parameter_name: str, bracket):
    """Parameter value inside `bracket` where two core poles collide.

    Located by bounded golden-section/parabolic minimization of the
    minimum pairwise root distance; raises NoCollisionInBracket if that
    distance never becomes small inside the bracket.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    refined = _refine_collision(model, parameter_name, lo, hi, tol=1e-4)
    if refined is None:
        raise NoCollisionInBracket(
            f"minimum pairwise pole distance stays above 1e-4 for {parameter_name} in [{lo}, {hi}]"
        )
    return refined[0]


@dataclass(frozen=True)
class BoundStateCensus:
    count: int
    unique: bool


def bound_state_census(poles_or_trajectory) -> BoundStateCensus:
    """Count upper-half imaginary-axis poles; at most one may exist.

    Accepts a list of PoleRecord or a PoleTrajectory (checked per sample,
    reporting the maximum simultaneous count).
    """
    if isinstance(poles_or_trajectory, PoleTrajectory):
        counts = [
            sum(1 for rec in sample if rec.pole_class is PoleClass.BOUND)
            for _, sample in poles_or_trajectory.samples
        ]
        worst = max(counts) if counts else 0
    else:
        worst = sum(
            1 for rec in poles_or_trajectory if rec.pole_class is PoleClass.BOUND
        )
    return BoundStateCensus(count=worst, unique=worst <= 1)
