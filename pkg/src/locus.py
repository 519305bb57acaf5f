"""
The mixed equation φ(z) = conj ψ(z) and the equal-module locus

Points where φ = conj ψ are branch points of the immersion (the metric
4|h'|²|φ - conj ψ|² vanishes there). They are found by Newton iteration on
the real 2-system, and, for the two-parameter family behind the existence
lemma, by tracing the locus |L| = |R| of the two sides and scanning the
argument gap δ = arg R - arg L for multiples of 2π.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar
from scipy.spatial import cKDTree
from tqdm import tqdm

from src.complexkit import INF, CPoly, MeroExpr, point_key, poly_roots
from src.config import LOCUS, SEARCH, TOLERANCES
from src.weierstrass import WeierstrassData

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi


class DegenerateLocusError(ValueError):
    """|L| ≡ |R|: the equal-module locus is the whole plane"""


class CounterexampleCandidateError(RuntimeError):
    """No witness was found where existence is a theorem; signals a numerical failure"""

    def __init__(self, message: str, m: int, a: complex, b: complex):
        super().__init__(message)
        self.m = m
        self.a = a
        self.b = b


class LemmaPreconditionError(ValueError):
    """Parameters outside the range a lemma check is defined for"""


# ============= SEARCH REGION =============

@dataclass
class SearchRegion:
    """Annular sector r_min ≤ |z - center| ≤ r_max, theta_min ≤ arg ≤ theta_max"""
    r_min: float = SEARCH.r_min
    r_max: float = SEARCH.r_max
    theta_min: float = SEARCH.theta_min
    theta_max: float = SEARCH.theta_max
    resolution: int = SEARCH.seeds_per_decade
    center: complex = 0j

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"search region needs 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if not self.theta_min < self.theta_max:
            raise ValueError("search region needs theta_min < theta_max")
        if self.resolution < 16:
            raise ValueError(f"search resolution must be at least 16, got {self.resolution}")

    @property
    def full_turn(self) -> bool:
        return self.theta_max - self.theta_min >= TWO_PI - 1e-12

    def contains(self, z, slack: float = 1e-9) -> np.ndarray:
        w = np.asarray(z, dtype=complex) - self.center
        r = np.abs(w)
        inside = (r >= self.r_min * (1 - slack)) & (r <= self.r_max * (1 + slack))
        if not self.full_turn:
            theta = np.mod(np.angle(w) - self.theta_min, TWO_PI)
            inside &= theta <= (self.theta_max - self.theta_min) + slack
        return inside

    def radial_nodes(self) -> np.ndarray:
        decades = math.log10(self.r_max / self.r_min)
        count = max(self.resolution, int(math.ceil(decades * self.resolution)))
        return np.geomspace(self.r_min, self.r_max, count)

    def angular_nodes(self) -> np.ndarray:
        if self.full_turn:
            return self.theta_min + TWO_PI * np.arange(self.resolution) / self.resolution
        return np.linspace(self.theta_min, self.theta_max, self.resolution)

    def grid(self) -> np.ndarray:
        r, t = np.meshgrid(self.radial_nodes(), self.angular_nodes(), indexing='ij')
        return self.center + r * np.exp(1j * t)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'r_min': self.r_min,
            'r_max': self.r_max,
            'theta_min': self.theta_min,
            'theta_max': self.theta_max,
            'resolution': self.resolution,
            'center': [complex(self.center).real, complex(self.center).imag],
        }


def _singular_points(data: WeierstrassData) -> List[complex]:
    points: List[complex] = []
    for f in (data.phi, data.psi):
        points.extend(r for r, _ in poly_roots(f.den))
        points.extend(p for p in f.essential_points() if p is not INF)
    return points


def _shrink_region(region: SearchRegion, singular: Sequence[complex]) -> Tuple[SearchRegion, List[str]]:
    """Pull the annulus boundaries off poles and essential points lying on them"""
    warnings: List[str] = []
    r_min, r_max = region.r_min, region.r_max
    for q in singular:
        d = abs(q - region.center)
        if d > 0 and abs(d - r_min) <= 1e-2 * r_min:
            r_min = d * 1.02
            warnings.append(f"inner radius moved to {r_min:.6g} away from singular point at |z|={d:.6g}")
        if abs(d - r_max) <= 1e-2 * r_max:
            r_max = d / 1.02
            warnings.append(f"outer radius moved to {r_max:.6g} away from singular point at |z|={d:.6g}")
    for message in warnings:
        logger.warning(f"search region shrunk: {message}")
    if not warnings:
        return region, warnings
    return SearchRegion(r_min, r_max, region.theta_min, region.theta_max,
                        region.resolution, region.center), warnings


# ============= MIXED SOLUTIONS =============

@dataclass
class MixedSolution:
    """A root of φ(z) = conj ψ(z)"""
    z: complex
    residual: float
    multiplicity: int = 1
    isolated: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'z': [self.z.real, self.z.imag],
            'residual': self.residual,
            'multiplicity': self.multiplicity,
            'isolated': self.isolated,
        }


@dataclass
class SingularSearchReport:
    """Mixed solutions found on a region, with the region actually searched"""
    solutions: List[MixedSolution]
    region: Optional[SearchRegion]
    warnings: List[str] = field(default_factory=list)
    seed_count: int = 0

    @property
    def passed(self) -> bool:
        return not self.solutions

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'region': self.region.to_dict() if self.region is not None else None,
            'seed_count': self.seed_count,
            'solutions': [s.to_dict() for s in self.solutions],
            'warnings': self.warnings,
        }


class _MixedSystem:
    """F(z) = φ(z) - conj ψ(z) with its real Jacobian"""

    def __init__(self, phi: MeroExpr, psi: MeroExpr):
        self.phi = phi
        self.psi = psi
        self.dphi = phi.derivative()
        self.dpsi = psi.derivative()

    def residual(self, z) -> np.ndarray:
        with np.errstate(all='ignore'):
            return np.abs(np.asarray(self.phi(z)) - np.conj(np.asarray(self.psi(z))))

    def accepts(self, z) -> np.ndarray:
        """|φ - conj ψ| ≤ tol·(|φ| + |ψ|), refused where both values have underflowed"""
        with np.errstate(all='ignore'):
            phi = np.asarray(self.phi(z), dtype=complex)
            psi = np.asarray(self.psi(z), dtype=complex)
            size = np.abs(phi) + np.abs(psi)
            residual = np.abs(phi - np.conj(psi))
        return (np.isfinite(residual) & (size > TOLERANCES.mixed_magnitude_floor)
                & (residual <= TOLERANCES.mixed_residual * size))

    def jacobian(self, z) -> np.ndarray:
        """
        Jacobian of (Re F, Im F) in (u, v), z = u + iv

        With p = φ'(z), q = ψ'(z): F_u = p - conj q and F_v = i(p + conj q).
        """
        with np.errstate(all='ignore'):
            p = np.asarray(self.dphi(z), dtype=complex)
            q = np.asarray(self.dpsi(z), dtype=complex)
        return np.stack([
            np.stack([p.real - q.real, -p.imag + q.imag], axis=-1),
            np.stack([p.imag + q.imag, p.real + q.real], axis=-1),
        ], axis=-2)

    def step(self, z: np.ndarray) -> np.ndarray:
        """Damped Gauss-Newton step (Levenberg-Marquardt with a tiny μ)"""
        with np.errstate(all='ignore'):
            f_phi = np.asarray(self.phi(z), dtype=complex)
            f_psi = np.asarray(self.psi(z), dtype=complex)
            scale = np.maximum(1.0, np.maximum(np.abs(f_phi), np.abs(f_psi)))
            f = (f_phi - np.conj(f_psi)) / scale
            jac = self.jacobian(z) / scale[..., None, None]
            j00, j01 = jac[..., 0, 0], jac[..., 0, 1]
            j10, j11 = jac[..., 1, 0], jac[..., 1, 1]
            a00 = j00 ** 2 + j10 ** 2
            a01 = j00 * j01 + j10 * j11
            a11 = j01 ** 2 + j11 ** 2
            mu = 1e-12 * (a00 + a11)
            b0 = -(j00 * f.real + j10 * f.imag)
            b1 = -(j01 * f.real + j11 * f.imag)
            det = (a00 + mu) * (a11 + mu) - a01 ** 2
            du = ((a11 + mu) * b0 - a01 * b1) / det
            dv = ((a00 + mu) * b1 - a01 * b0) / det
        return du + 1j * dv


def _newton(system: _MixedSystem, seeds: np.ndarray, max_iter: Optional[int] = None) -> np.ndarray:
    """Batched Newton on all seeds; returns the final iterates"""
    max_iter = TOLERANCES.newton_max_iter if max_iter is None else max_iter
    z = np.asarray(seeds, dtype=complex).ravel().copy()
    active = np.ones(z.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        za = z[idx]
        step = system.step(za)
        bad = ~np.isfinite(step)
        step = np.where(bad, 0, step)
        limit = 0.5 * np.maximum(np.abs(za), 1e-3)
        size = np.abs(step)
        step = np.where(size > limit, step * limit / np.where(size > 0, size, 1), step)
        z_new = za + step
        z[idx] = z_new
        done = bad | (np.abs(step) <= TOLERANCES.newton_step * np.maximum(1.0, np.abs(z_new)))
        active[idx[done]] = False
    return z


def _winding(system: _MixedSystem, z: complex, radius: float, samples: int = 256) -> int:
    circle = z + radius * np.exp(1j * TWO_PI * np.arange(samples + 1) / samples)
    with np.errstate(all='ignore'):
        values = np.asarray(system.phi(circle)) - np.conj(np.asarray(system.psi(circle)))
    if not np.all(np.isfinite(values)) or np.any(values == 0):
        return 0
    phase = np.unwrap(np.angle(values))
    return int(round((phase[-1] - phase[0]) / TWO_PI))


def _deduplicate(points: np.ndarray, residuals: np.ndarray) -> List[int]:
    """Indices of one representative (least residual) per cluster of nearby roots"""
    if len(points) == 0:
        return []
    xy = np.column_stack([points.real, points.imag])
    tree = cKDTree(xy)
    order = np.lexsort((residuals, points.imag, points.real))
    taken = np.zeros(len(points), dtype=bool)
    keep = []
    for i in order:
        if taken[i]:
            continue
        radius = TOLERANCES.dedup_radius * max(1.0, abs(points[i]))
        group = tree.query_ball_point(xy[i], r=radius)
        best = min(group, key=lambda k: residuals[k])
        taken[group] = True
        keep.append(best)
    return keep


def search_singular_points(data: WeierstrassData, region: Optional[SearchRegion] = None,
                           seeds: Optional[Sequence[complex]] = None) -> SingularSearchReport:
    """
    Newton search for solutions of φ(z) = conj ψ(z)

    Seeds cover the region on a log-polar grid (or are given explicitly);
    converged roots with relative residual at most the configured mixed
    tolerance are deduplicated, checked for isolation (a curve of solutions
    makes nearby restarts converge to different points) and given a winding
    number as multiplicity estimate. Roots finer than the seed grid can be
    missed: the search is not a certified exclusion.

    Args:
        data: Weierstrass data
        region: Search region (default annulus when neither region nor seeds is given)
        seeds: Explicit starting points, used instead of the region grid

    Returns:
        SingularSearchReport with solutions sorted by (re, im)
    """
    warnings: List[str] = []
    if region is None and seeds is None:
        region = SearchRegion()
    singular = _singular_points(data)
    if region is not None:
        region, warnings = _shrink_region(region, singular)
    system = _MixedSystem(data.phi, data.psi)
    start = np.asarray(seeds, dtype=complex).ravel() if seeds is not None else region.grid().ravel()

    z = _newton(system, start)
    residual = system.residual(z)
    accepted = system.accepts(z)
    accepted &= np.abs(z) > 1e-8
    if region is not None:
        accepted &= region.contains(z)
    for q in list(singular) + data.finite_punctures():
        accepted &= np.abs(z - q) > SEARCH.pole_clearance * max(1.0, abs(q))
    candidates, cand_residual = z[accepted], residual[accepted]
    keep = _deduplicate(candidates, cand_residual)
    roots = candidates[keep]
    roots_residual = cand_residual[keep]

    solutions: List[MixedSolution] = []
    if len(roots):
        offset_radius = 1e-4 * np.maximum(1.0, np.abs(roots))
        offsets = np.exp(0.5j * np.pi * np.arange(4))
        restarts = (roots[:, None] + offset_radius[:, None] * offsets[None, :]).ravel()
        landed = _newton(system, restarts).reshape(len(roots), 4)
        landed_ok = system.accepts(landed).reshape(len(roots), 4)
        for k, root in enumerate(roots):
            moved = np.abs(landed[k] - root)
            converged = landed_ok[k]
            near = moved <= 3 * offset_radius[k]
            separate = moved > TOLERANCES.dedup_radius * max(1.0, abs(root))
            isolated = not np.any(converged & near & separate)
            multiplicity = _winding(system, complex(root), float(offset_radius[k])) if isolated else 0
            solutions.append(MixedSolution(
                z=complex(root),
                residual=float(roots_residual[k]),
                multiplicity=multiplicity,
                isolated=bool(isolated),
            ))
    solutions.sort(key=lambda s: point_key(s.z))
    if solutions:
        logger.info(f"{data.name}: {len(solutions)} solution(s) of phi = conj(psi)")
    return SingularSearchReport(solutions=solutions, region=region, warnings=warnings,
                                seed_count=int(start.size))


def find_singular_points(data: WeierstrassData, region: Optional[SearchRegion] = None,
                         seeds: Optional[Sequence[complex]] = None) -> List[MixedSolution]:
    """Solutions of φ(z) = conj ψ(z) on the region (see search_singular_points)"""
    return search_singular_points(data, region, seeds).solutions


# ============= EQUAL-MODULE LOCUS =============

_UNIT = MeroExpr.constant(1.0)


@dataclass(frozen=True)
class MixedTerm:
    """holo(z)·conj(anti(z)) for meromorphic holo and anti"""
    holo: MeroExpr
    anti: MeroExpr = _UNIT

    @classmethod
    def coerce(cls, value: Union['MixedTerm', MeroExpr]) -> 'MixedTerm':
        return value if isinstance(value, MixedTerm) else cls(value)

    @cached_property
    def _holo_log_derivative(self) -> MeroExpr:
        return self.holo.log_derivative()

    @cached_property
    def _anti_log_derivative(self) -> MeroExpr:
        return self.anti.log_derivative()

    def __call__(self, z):
        with np.errstate(all='ignore'):
            return np.asarray(self.holo(z)) * np.conj(np.asarray(self.anti(z)))

    def log_modulus(self, z) -> np.ndarray:
        with np.errstate(all='ignore'):
            return np.log(np.abs(np.asarray(self.holo(z)))) + np.log(np.abs(np.asarray(self.anti(z))))

    def argument(self, z) -> np.ndarray:
        return np.angle(np.asarray(self.holo(z))) - np.angle(np.asarray(self.anti(z)))

    def log_gradient(self, z) -> np.ndarray:
        """∇ log|·| packed as a complex number (∂_u + i ∂_v)"""
        with np.errstate(all='ignore'):
            total = np.asarray(self._holo_log_derivative(z), dtype=complex)
            total = total + np.asarray(self._anti_log_derivative(z), dtype=complex)
        return np.conj(total)


@dataclass
class LocusCurve:
    """A traced component of |L| = |R| with the unwound argument gap"""
    points: np.ndarray
    delta: np.ndarray
    closed: bool
    gaps: List[complex] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def delta_change(self) -> float:
        """Net change of δ along the curve, including the closing segment when closed"""
        if len(self.delta) < 2:
            return 0.0
        change = float(self.delta[-1] - self.delta[0])
        if self.closed:
            step = (self.delta[0] - self.delta[-1] + np.pi) % TWO_PI - np.pi
            change += float(step)
        return change

    def winding(self) -> float:
        return self.delta_change() / TWO_PI

    def crossings(self) -> List[Tuple[complex, int]]:
        """Points where δ passes a multiple 2πk, linearly interpolated, with k"""
        points = list(self.points)
        delta = list(self.delta)
        if self.closed and len(points) > 1:
            points.append(points[0])
            delta.append(self.delta[-1] + ((self.delta[0] - self.delta[-1] + np.pi) % TWO_PI - np.pi))
        found = []
        for (p0, d0), (p1, d1) in zip(zip(points[:-1], delta[:-1]), zip(points[1:], delta[1:])):
            k0, k1 = math.floor(d0 / TWO_PI), math.floor(d1 / TWO_PI)
            if k0 == k1:
                if d0 % TWO_PI == 0:
                    found.append((complex(p0), k0))
                continue
            k = max(k0, k1)
            s = (TWO_PI * k - d0) / (d1 - d0)
            found.append((complex(p0 + s * (p1 - p0)), k))
        return found


class _Locus:
    """G = log|L| - log|R| with its gradient and argument gap"""

    def __init__(self, left: MixedTerm, right: MixedTerm):
        self.left = left
        self.right = right

    def value(self, z) -> np.ndarray:
        return self.left.log_modulus(z) - self.right.log_modulus(z)

    def gradient(self, z) -> np.ndarray:
        return self.left.log_gradient(z) - self.right.log_gradient(z)

    def gap(self, z) -> np.ndarray:
        return self.right.argument(z) - self.left.argument(z)

    def correct(self, z: complex) -> Tuple[complex, bool, int]:
        """Newton projection onto G = 0 along the gradient"""
        for k in range(LOCUS.corrector_iterations):
            g_value = complex(self.value(z)).real
            gradient = complex(self.gradient(z))
            if not (np.isfinite(g_value) and np.isfinite(gradient)) or gradient == 0:
                return z, False, k
            if abs(g_value) <= LOCUS.corrector_tol:
                return z, True, k
            z = z - g_value * gradient / abs(gradient) ** 2
        g_value = complex(self.value(z)).real
        return z, bool(np.isfinite(g_value) and abs(g_value) <= LOCUS.corrector_tol), LOCUS.corrector_iterations


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = min(1.0, max(0.0, ((p - a) * np.conj(ab)).real / abs(ab) ** 2))
    return abs(p - (a + s * ab))


def _wrapped(angle: float) -> float:
    return (angle + np.pi) % TWO_PI - np.pi


def _march(locus: _Locus, region: SearchRegion, z0: complex,
           direction: int) -> Tuple[List[complex], bool, List[complex]]:
    """Predictor-corrector continuation from z0 in one direction"""
    points = [z0]
    gaps: List[complex] = []
    z = z0
    tangent_prev: Optional[complex] = None
    gap_prev = float(locus.gap(z0))

    def base_step(w: complex) -> float:
        return LOCUS.initial_step_fraction * max(abs(w - region.center), region.r_min)

    h = base_step(z0)
    left_start = False
    for _ in range(LOCUS.max_steps):
        gradient = complex(locus.gradient(z))
        if not np.isfinite(gradient) or gradient == 0:
            gaps.append(z)
            break
        tangent = 1j * gradient / abs(gradient) * direction
        if tangent_prev is not None and (tangent * np.conj(tangent_prev)).real < 0:
            tangent = -tangent

        accepted = False
        floor = LOCUS.step_floor * max(1.0, abs(z))
        while h >= floor:
            predicted = z + h * tangent
            corrected, ok, iterations = locus.correct(predicted)
            if ok and abs(corrected - predicted) <= 0.5 * h:
                new_gradient = complex(locus.gradient(corrected))
                turn_ok = np.isfinite(new_gradient) and (
                    (1j * new_gradient * np.conj(1j * gradient)).real > 0.5 * abs(new_gradient) * abs(gradient))
                gap_new = float(locus.gap(corrected))
                if turn_ok and abs(_wrapped(gap_new - gap_prev)) < 0.5 * np.pi:
                    accepted = True
                    break
            h *= 0.5
        if not accepted:
            logger.warning(f"locus continuation stalled at {z:.6g}; curve split")
            gaps.append(z)
            break

        if not left_start and abs(corrected - z0) > 2 * h:
            left_start = True
        if left_start and len(points) > 2 and _segment_distance(z0, z, corrected) <= LOCUS.closure_fraction * h:
            return points, True, gaps
        if not bool(region.contains(corrected)):
            break
        points.append(corrected)
        z = corrected
        tangent_prev = tangent
        gap_prev = gap_new
        h_max = LOCUS.max_step_growth * base_step(z)
        if iterations <= 2:
            h = min(2 * h, h_max)
        h = min(h, h_max)
    return points, False, gaps


def _trace_component(locus: _Locus, region: SearchRegion, z0: complex) -> LocusCurve:
    forward, closed, gaps = _march(locus, region, z0, +1)
    if closed:
        points = forward
    else:
        backward, _, back_gaps = _march(locus, region, z0, -1)
        points = backward[::-1] + forward[1:]
        gaps = back_gaps + gaps
    points_arr = np.asarray(points, dtype=complex)
    delta = np.unwrap(np.asarray(locus.gap(points_arr), dtype=float))
    return LocusCurve(points=points_arr, delta=delta, closed=closed, gaps=gaps)


def _edge_roots(locus: _Locus, region: SearchRegion) -> List[complex]:
    """Points of G = 0 on the edges of the log-polar grid (sign changes + brentq)"""
    radii = region.radial_nodes()
    angles = region.angular_nodes()
    grid = region.grid()
    values = np.asarray(locus.value(grid), dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size and np.max(np.abs(finite)) <= 1e-12:
        raise DegenerateLocusError("|L| = |R| on the whole search grid")
    seeds: List[complex] = []

    def radial(i: int, j: int):
        lo, hi = math.log(radii[i]), math.log(radii[i + 1])
        direction = np.exp(1j * angles[j])
        return lambda s: complex(region.center + math.exp(s) * direction), lo, hi

    def angular(i: int, j: int):
        lo = angles[j]
        hi = angles[j + 1] if j + 1 < len(angles) else angles[0] + TWO_PI
        return lambda s: complex(region.center + radii[i] * np.exp(1j * s)), lo, hi

    n_r, n_a = grid.shape
    edges = []
    for i in range(n_r - 1):
        for j in range(n_a):
            edges.append(((i, j), (i + 1, j), radial(i, j)))
    last = n_a if region.full_turn else n_a - 1
    for i in range(n_r):
        for j in range(last):
            edges.append(((i, j), (i, (j + 1) % n_a), angular(i, j)))
    for a, b, (path, lo, hi) in edges:
        ga, gb = values[a], values[b]
        if not (np.isfinite(ga) and np.isfinite(gb)) or ga * gb > 0 or ga == gb:
            continue
        try:
            s = brentq(lambda t: float(locus.value(path(t))), lo, hi, xtol=1e-14)
        except ValueError:
            continue
        seeds.append(path(s))
    return seeds


def trace_equal_module_locus(left: Union[MixedTerm, MeroExpr], right: Union[MixedTerm, MeroExpr],
                             region: SearchRegion) -> List[LocusCurve]:
    """
    Trace the components of {z : |L(z)| = |R(z)|} inside the region

    Sign changes of log|L| - log|R| on the seed grid start a
    predictor-corrector continuation (tangent step, then Newton projection
    along the gradient). A component stops when it returns within half a step
    of its start (closed) or leaves the region; it is then traced backwards
    too. A stalled continuation splits the curve and records a gap.

    Args:
        left: L, a MixedTerm holo·conj(anti) or a plain meromorphic expression
        right: R, likewise
        region: Region to trace in

    Returns:
        Curves carrying their vertices and the unwound gap δ = arg R - arg L

    Raises:
        DegenerateLocusError: when |L| ≡ |R|
    """
    left, right = MixedTerm.coerce(left), MixedTerm.coerce(right)
    if left == right:
        raise DegenerateLocusError("L and R are the same expression")
    locus = _Locus(left, right)
    seeds = _edge_roots(locus, region)
    curves: List[LocusCurve] = []
    tree: Optional[cKDTree] = None
    for seed in seeds:
        reach = LOCUS.max_step_growth * LOCUS.initial_step_fraction * max(abs(seed - region.center), region.r_min)
        if tree is not None and tree.query([seed.real, seed.imag], distance_upper_bound=reach)[0] <= reach:
            continue
        seed, ok, _ = locus.correct(seed)
        if not ok:
            continue
        curve = _trace_component(locus, region, seed)
        if len(curve) < 2:
            continue
        curves.append(curve)
        vertices = np.concatenate([c.points for c in curves])
        tree = cKDTree(np.column_stack([vertices.real, vertices.imag]))
    curves.sort(key=lambda c: point_key(complex(c.points[np.lexsort((c.points.imag, c.points.real))[0]])))
    logger.info(f"equal-module locus: {len(curves)} component(s) from {len(seeds)} seed(s)")
    return curves


def module_defect(left: Union[MixedTerm, MeroExpr], right: Union[MixedTerm, MeroExpr], z) -> np.ndarray:
    """| |L| - |R| | / (|L| + |R|) at z"""
    lv = np.abs(MixedTerm.coerce(left)(z))
    rv = np.abs(MixedTerm.coerce(right)(z))
    return np.abs(lv - rv) / (lv + rv)


def locus_frame(curves: Sequence[LocusCurve]) -> pd.DataFrame:
    """Polyline table with columns re, im, delta, component"""
    frames = [
        pd.DataFrame({'re': c.points.real, 'im': c.points.imag, 'delta': c.delta, 'component': k})
        for k, c in enumerate(curves)
    ]
    if not frames:
        return pd.DataFrame(columns=['re', 'im', 'delta', 'component'])
    return pd.concat(frames, ignore_index=True)


# ============= EXISTENCE LEMMA (TWO GOOD SINGULAR ENDS) =============

def case5_mixed_terms(m: int, a: complex, b: complex,
                      lam: complex = 1.0) -> Tuple[MixedTerm, MixedTerm]:
    """L = (z̄ - ā)(z - b) and R = λ z^{m+1} / z̄^m"""
    left = MixedTerm(MeroExpr.from_coeffs([-b, 1.0]), MeroExpr.from_coeffs([-a, 1.0]))
    right = MixedTerm(MeroExpr(CPoly.monomial(m + 1, lam)), MeroExpr(CPoly((1.0,)), CPoly.monomial(m)))
    return left, right


def lemma_a1_residual(m: int, a: complex, b: complex, z: complex) -> float:
    """|(z̄ - ā)(z - b) - z^{m+1}/z̄^m|"""
    z = complex(z)
    return abs((np.conj(z) - np.conj(a)) * (z - b) - z ** (m + 1) / np.conj(z) ** m)


def _check_a1_parameters(m: int, a: complex, b: complex):
    if int(m) != m or m < 1:
        raise LemmaPreconditionError(f"m must be a positive integer, got {m}")
    if a == 0 or b == 0:
        raise LemmaPreconditionError("a and b must be nonzero")
    if abs(abs(a + b) - 1) > 1e-12:
        raise LemmaPreconditionError(f"|a + b| must be 1, got {abs(a + b):.15g}")


def lemma_a1_witness(m: int, a: complex, b: complex) -> MixedSolution:
    """
    A nonzero solution of (z̄ - ā)(z - b) = z^{m+1}/z̄^m with a + b = -e^{it}

    The substitution z = e^{it}w gives the normalized equation with
    a' = a e^{-it}, b' = b e^{-it}, a' + b' = -1 and the factor
    λ = e^{it(2m+1)}. The equal-module locus of the normalized equation is
    traced, δ is scanned for multiples of 2π and each crossing (mapped back to
    z) seeds a Newton polish on φ = z^m(z - a), ψ = z^{m+1}/(z - b).

    Args:
        m: Positive integer
        a: Nonzero complex
        b: Nonzero complex with |a + b| = 1

    Returns:
        MixedSolution with the polished witness

    Raises:
        LemmaPreconditionError: for parameters outside the lemma
        CounterexampleCandidateError: when no witness is found
    """
    from src.gallery import case5_data

    a, b = complex(a), complex(b)
    _check_a1_parameters(m, a, b)
    t = float(np.angle(-(a + b)))
    rotation = np.exp(1j * t)
    a_red, b_red = a / rotation, b / rotation
    lam = np.exp(1j * t * (2 * m + 1))
    left, right = case5_mixed_terms(m, a_red, b_red, lam)
    region = SearchRegion(
        r_min=1e-2 * min(1.0, abs(a_red) * abs(b_red)),
        r_max=2.0 * (1.0 + abs(a_red) + abs(b_red)),
        resolution=LOCUS.angular_seeds,
    )
    curves = trace_equal_module_locus(left, right, region)
    seeds = [rotation * w for curve in curves for w, _ in curve.crossings()]
    if seeds:
        data = case5_data(m, a, b, np.exp(-0.5j * t), validate=False)
        candidates = find_singular_points(data, seeds=seeds)
        candidates = [
            s for s in candidates
            if abs(s.z) > 1e-6 and lemma_a1_residual(m, a, b, s.z) <= TOLERANCES.mixed_residual
        ]
        if candidates:
            best = min(candidates, key=lambda s: (s.residual, point_key(s.z)))
            return best
    message = (f"no solution found for m={m}, a={a}, b={b} "
               f"({len(curves)} locus component(s), {len(seeds)} crossing(s))")
    logger.error(f"counterexample candidate: {message}")
    raise CounterexampleCandidateError(message, m, a, b)


def reduced_a_grid(n: int) -> List[complex]:
    """n values of a' on a' + b' = -1, alternating |a' - b'| < 1 and > 1"""
    values = []
    for k in range(n):
        radius = 0.3 if k % 2 == 0 else 1.2
        values.append(complex(-0.5 + radius * np.exp(1j * (TWO_PI * k / n + 0.3))))
    return values


def lemma_a1_sweep(ms: Sequence[int] = (1, 2, 3),
                   ts: Sequence[float] = (0.0, np.pi / 5, np.pi / 2),
                   a_values: Optional[Sequence[complex]] = None,
                   progress: bool = False) -> List[Dict[str, Any]]:
    """
    Run lemma_a1_witness over m × t × a'

    For each reduced a' (with b' = -1 - a') the lemma parameters are
    a = a' e^{it}, b = b' e^{it}.

    Returns:
        One row per grid cell with status 'witness' or 'counterexample_candidate'
    """
    a_values = reduced_a_grid(5) if a_values is None else list(a_values)
    cells = [(m, t, a_red) for m in ms for t in ts for a_red in a_values]
    rows = []
    for m, t, a_red in tqdm(cells, desc='lemma-a1', disable=not progress):
        rotation = np.exp(1j * t)
        a, b = a_red * rotation, (-1 - a_red) * rotation
        row: Dict[str, Any] = {'m': int(m), 't': float(t), 'a': [a.real, a.imag], 'b': [b.real, b.imag]}
        try:
            solution = lemma_a1_witness(m, a, b)
            row.update({'status': 'witness', 'z': [solution.z.real, solution.z.imag],
                        'residual': solution.residual,
                        'lemma_residual': lemma_a1_residual(m, a, b, solution.z)})
        except CounterexampleCandidateError:
            row.update({'status': 'counterexample_candidate', 'z': None,
                        'residual': None, 'lemma_residual': None})
        rows.append(row)
    return rows


# ============= NON-EXISTENCE LEMMA (a = b REAL, m = 1) =============

@dataclass
class LemmaA2Verdict:
    """Margins min_r (|rω^j - a|² - r) on the three rays that can carry solutions"""
    a: float
    margins: List[float]
    minimizers: List[float]

    @property
    def margin(self) -> float:
        return min(self.margins)

    @property
    def no_solution(self) -> bool:
        return self.margin > 0

    @property
    def verdict(self) -> str:
        return 'no-solution' if self.no_solution else 'solution-found'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'verdict': self.verdict,
            'margin': self.margin,
            'margins': self.margins,
            'minimizers': self.minimizers,
        }


def lemma_a2_check(a: float) -> LemmaA2Verdict:
    """
    Verify that |z - a|² = z³/|z|² has no solution for real a < -1

    The right side is real and positive only on the rays z = rω^j with
    ω = e^{2πi/3}, where the equation reads |rω^j - a|² = r. On each ray the
    gap g(r) = |rω^j - a|² - r is minimized over r > 0 by a log grid refined
    with a bounded scalar minimization. On the real ray the infimum is a²,
    approached as r → 0; on the other two it is (3a - 1)(a + 1)/4.

    Raises:
        LemmaPreconditionError: when a is not real or -a ≤ 1
    """
    value = complex(a)
    if abs(value.imag) > 0 or not -value.real > 1:
        raise LemmaPreconditionError(f"check needs real a with -a > 1, got {a}")
    a = value.real
    r_hi = 100.0 * max(1.0, abs(a))
    grid = np.geomspace(1e-9, r_hi, 4001)
    margins, minimizers = [], []
    for j in range(3):
        omega = np.exp(TWO_PI * 1j * j / 3)

        def gap(r: float, omega=omega) -> float:
            return float(abs(r * omega - a) ** 2 - r)

        values = np.abs(grid * omega - a) ** 2 - grid
        k = int(np.argmin(values))
        best_r, best = float(grid[k]), float(values[k])
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, len(grid) - 1)]
        if hi > lo:
            refined = minimize_scalar(gap, bounds=(lo, hi), method='bounded',
                                      options={'xatol': 1e-12})
            if refined.success and refined.fun < best:
                best_r, best = float(refined.x), float(refined.fun)
        margins.append(best)
        minimizers.append(best_r)
    verdict = LemmaA2Verdict(a=a, margins=margins, minimizers=minimizers)
    logger.info(f"a={a}: {verdict.verdict} (margin {verdict.margin:.6g})")
    return verdict


if __name__ == "__main__":
    from src.gallery import make_example

    print("=" * 60)
    print("MIXED EQUATION DEMO")
    print("=" * 60)
    case5 = make_example('case5', m=1, a=-0.5, b=-0.5, rho=1.0)
    for solution in find_singular_points(case5.data, SearchRegion(1e-2, 1e2)):
        print(f"  case5 solution z={solution.z:.10f} residual={solution.residual:.2e}")
    witness = lemma_a1_witness(2, -0.25, -0.75)
    print(f"\nWitness for m=2, a=-0.25, b=-0.75: z={witness.z:.10f}")
    for a in (-1.01, -2.0, -10.0):
        print(f"a={a}: {lemma_a2_check(a).to_dict()}")
