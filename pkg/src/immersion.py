"""
Immersion x = 2 Re ∫ x_z dz of Weierstrass data into R^4_1

Evaluates x_z, integrates it along paths and over polar grids, exports
meshes, and checks involution symmetry and completeness of ends.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import quad, quad_vec

from src.complexkit import INF, ExtComplex, PoleEvaluationError, format_point, poly_roots, same_point
from src.config import COMPLETENESS, IMMERSION, QUADRATURE, TOLERANCES
from src.weierstrass import WeierstrassData, WeierstrassDataError, classify_end, encode_point

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

LORENTZ_SIGNATURE = np.array([1.0, 1.0, 1.0, -1.0])
MESH_COLUMNS = ['u', 'v', 'x1', 'x2', 'x3', 'x4', 'conformal_factor']


class MeshExportError(ValueError):
    """Mesh arrays disagree with the grid shape or with each other"""


def lorentz_inner(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Complex-bilinear Lorentz product x1y1 + x2y2 + x3y3 - x4y4 over the last axis"""
    return np.sum(np.asarray(u) * np.asarray(v) * LORENTZ_SIGNATURE, axis=-1)


def xz_vector(data: WeierstrassData, z) -> np.ndarray:
    """
    x_z = (φ+ψ, -i(φ-ψ), 1-φψ, 1+φψ)·h' at z (vectorized)

    Evaluated through the reduced forms φdh, ψdh, dh, φψdh so that poles of φ
    or ψ cancelled by zeros of dh evaluate cleanly.

    Raises:
        PoleEvaluationError: when z is a pole or essential point of the data
    """
    h = np.asarray(data.dh(z), dtype=complex)
    a = np.asarray(data.phi_dh(z), dtype=complex)
    b = np.asarray(data.psi_dh(z), dtype=complex)
    p = np.asarray(data.phipsi_dh(z), dtype=complex)
    vector = np.stack([a + b, -1j * (a - b), h - p, h + p], axis=-1)
    if not np.all(np.isfinite(vector)):
        raise PoleEvaluationError("x_z is not finite at the requested point(s)")
    return vector


def conformal_factor(data: WeierstrassData, z) -> np.ndarray:
    """e^{2ω} = 4|h'|²|φ - conj ψ|², falling back to 2⟨x_z, conj x_z⟩ at poles of φ, ψ"""
    zz = np.asarray(z, dtype=complex)
    with np.errstate(invalid='ignore', over='ignore'):
        closed = 4 * np.abs(data.dh(zz)) ** 2 * np.abs(data.phi(zz) - np.conj(data.psi(zz))) ** 2
    closed = np.asarray(closed, dtype=float)
    bad = ~np.isfinite(closed)
    if np.any(bad):
        direct = direct_conformal_factor(data, zz[bad] if zz.ndim else zz)
        if zz.ndim:
            closed[bad] = direct
        else:
            closed = np.asarray(direct)
    return closed if closed.ndim else float(closed)


def direct_conformal_factor(data: WeierstrassData, z) -> np.ndarray:
    """2⟨x_z, conj x_z⟩ straight from the vector x_z"""
    v = xz_vector(data, z)
    return 2 * np.real(lorentz_inner(v, np.conj(v)))


# ============= PATH INTEGRATION =============

def _integrate(data: WeierstrassData, path: Callable[[float], complex],
               velocity: Callable[[float], complex], t0: float, t1: float,
               tol: Optional[float] = None) -> np.ndarray:
    tol = QUADRATURE.path_tol if tol is None else tol
    if t0 == t1:
        return np.zeros(4)

    def integrand(t: float) -> np.ndarray:
        return 2 * np.real(xz_vector(data, path(t)) * velocity(t))

    value, _ = quad_vec(integrand, t0, t1, epsabs=tol, epsrel=tol)
    return np.asarray(value, dtype=float)


def integrate_segment(data: WeierstrassData, z0: complex, z1: complex) -> np.ndarray:
    """2 Re ∫ x_z dz along the straight segment z0 → z1"""
    delta = complex(z1) - complex(z0)
    return _integrate(data, lambda t: z0 + t * delta, lambda _t: delta, 0.0, 1.0)


def integrate_radial(data: WeierstrassData, theta: float, r0: float, r1: float,
                     center: complex = 0j) -> np.ndarray:
    direction = np.exp(1j * theta)
    return _integrate(data, lambda r: center + r * direction, lambda _r: direction, r0, r1)


def integrate_arc(data: WeierstrassData, radius: float, theta0: float, theta1: float,
                  center: complex = 0j) -> np.ndarray:
    return _integrate(data, lambda t: center + radius * np.exp(1j * t),
                      lambda t: 1j * radius * np.exp(1j * t), theta0, theta1)


def integrate_path(data: WeierstrassData, points: Sequence[complex]) -> np.ndarray:
    """2 Re ∫ x_z dz along the polyline through `points`"""
    total = np.zeros(4)
    for z0, z1 in zip(points[:-1], points[1:]):
        total = total + integrate_segment(data, z0, z1)
    return total


def loop_closure_residual(data: WeierstrassData, center: complex, radius: float) -> float:
    """|2 Re ∮ x_z dz| over the circle; zero exactly when the periods vanish"""
    value = _integrate(data, lambda t: center + radius * np.exp(1j * t),
                       lambda t: 1j * radius * np.exp(1j * t), 0.0, 2 * np.pi,
                       tol=QUADRATURE.loop_tol)
    return float(np.linalg.norm(value))


# ============= GRIDS AND MESHES =============

@dataclass
class PolarGrid:
    """radii × angles around a center; `closed` when the angles wrap the full circle"""
    radii: np.ndarray
    angles: np.ndarray
    center: complex = 0j
    closed: bool = True

    @classmethod
    def regular(cls, r_min: float, r_max: float, n_radii: int, n_angles: int,
                center: complex = 0j, geometric: bool = True) -> 'PolarGrid':
        if geometric:
            radii = np.geomspace(r_min, r_max, n_radii)
        else:
            radii = np.linspace(r_min, r_max, n_radii)
        angles = 2 * np.pi * np.arange(n_angles) / n_angles
        return cls(radii=radii, angles=angles, center=center, closed=True)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.radii), len(self.angles))

    def points(self) -> np.ndarray:
        r, t = np.meshgrid(self.radii, self.angles, indexing='ij')
        return self.center + r * np.exp(1j * t)


@dataclass
class Mesh:
    """Vertices of the immersed grid (radius-major) with triangle faces"""
    z: np.ndarray
    x: np.ndarray
    conformal: np.ndarray
    faces: np.ndarray
    shape: Tuple[int, int]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'u': self.z.real,
            'v': self.z.imag,
            'x1': self.x[:, 0],
            'x2': self.x[:, 1],
            'x3': self.x[:, 2],
            'x4': self.x[:, 3],
            'conformal_factor': self.conformal,
        }, columns=MESH_COLUMNS)


def _grid_faces(shape: Tuple[int, int], closed: bool) -> np.ndarray:
    n_r, n_a = shape
    faces = []
    last = n_a if closed else n_a - 1
    for i in range(n_r - 1):
        for j in range(last):
            j1 = (j + 1) % n_a
            a, b = i * n_a + j, (i + 1) * n_a + j
            c, d = (i + 1) * n_a + j1, i * n_a + j1
            faces.append((a, b, c))
            faces.append((a, c, d))
    return np.asarray(faces, dtype=int).reshape(-1, 3)


def _check_grid(data: WeierstrassData, grid: PolarGrid):
    r_lo, r_hi = float(np.min(grid.radii)), float(np.max(grid.radii))
    for p in data.finite_punctures():
        distance = abs(p - grid.center)
        if r_lo <= distance <= r_hi:
            raise ValueError(f"puncture {format_point(p)} lies inside the grid annulus")
    if r_lo == 0 and data.is_puncture(grid.center):
        raise ValueError("grid starts at a puncture")


def immerse_grid(data: WeierstrassData, grid: PolarGrid,
                 basepoint: Optional[complex] = None) -> Mesh:
    """
    Immersed positions and conformal factors on a polar grid

    x(basepoint) = 0. A serial pass goes radially from the basepoint to the
    innermost circle and then along that circle through every grid angle;
    each angle's spoke is then integrated outward radius by radius.

    Args:
        data: Weierstrass data (period conditions should hold)
        grid: Polar grid avoiding the punctures
        basepoint: Start point, the first grid vertex by default

    Returns:
        Mesh with positions, conformal factors and triangle faces
    """
    _check_grid(data, grid)
    n_r, n_a = grid.shape
    r0 = float(grid.radii[0])
    theta_start = float(grid.angles[0])
    positions = np.zeros((n_r, n_a, 4))

    base_shift = np.zeros(4)
    if basepoint is not None:
        offset = complex(basepoint) - grid.center
        rho_b, theta_b = abs(offset), float(np.angle(offset))
        base_shift = integrate_radial(data, theta_b, rho_b, r0, grid.center)
        base_shift = base_shift + integrate_arc(data, r0, theta_b, theta_start, grid.center)

    current = base_shift
    previous_angle = theta_start
    for j, theta in enumerate(grid.angles):
        current = current + integrate_arc(data, r0, previous_angle, float(theta), grid.center)
        previous_angle = float(theta)
        positions[0, j] = current

    for j, theta in enumerate(grid.angles):
        spoke = positions[0, j].copy()
        for i in range(1, n_r):
            spoke = spoke + integrate_radial(data, float(theta), float(grid.radii[i - 1]),
                                             float(grid.radii[i]), grid.center)
            positions[i, j] = spoke

    z = grid.points().reshape(-1)
    logger.info(f"{data.name}: immersed {n_r}x{n_a} grid")
    return Mesh(
        z=z,
        x=positions.reshape(-1, 4),
        conformal=np.asarray(conformal_factor(data, z), dtype=float),
        faces=_grid_faces(grid.shape, grid.closed),
        shape=grid.shape,
    )


def _check_mesh(mesh: Mesh):
    n_r, n_a = mesh.shape
    expected = n_r * n_a
    counts = {'z': len(mesh.z), 'x': len(mesh.x), 'conformal_factor': len(mesh.conformal)}
    for name, count in counts.items():
        if count != expected:
            logger.error(f"mesh {name} has {count} entries for a {n_r}x{n_a} grid")
            raise MeshExportError(f"mesh {name} has {count} entries, expected {expected} for a {n_r}x{n_a} grid")
    if np.ndim(mesh.x) != 2 or np.shape(mesh.x)[1] != 4:
        raise MeshExportError(f"mesh vertices must have 4 coordinates, got shape {np.shape(mesh.x)}")
    faces = np.asarray(mesh.faces)
    if faces.size and (faces.ndim != 2 or faces.shape[1] != 3 or faces.min() < 0 or faces.max() >= expected):
        raise MeshExportError(f"mesh faces must be index triples below {expected}")


def export_mesh(mesh: Mesh, prefix: str) -> Dict[str, Path]:
    """
    Write `<prefix>.csv` (u, v, x1..x4, conformal_factor) and `<prefix>.obj`

    The OBJ file carries the (x1, x2, x3) projection with 1-based triangle
    faces. Floats are written in shortest round-trip form.

    Raises:
        MeshExportError: when the vertex count differs from the grid size or a
            face refers to a missing vertex; nothing is written
    """
    _check_mesh(mesh)
    base = Path(prefix)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path = base.with_suffix('.csv')
    obj_path = base.with_suffix('.obj')
    mesh.to_frame().to_csv(csv_path, index=False)
    with open(obj_path, 'w') as handle:
        handle.write(f"# stationary surface mesh {mesh.shape[0]}x{mesh.shape[1]}\n")
        for x in mesh.x:
            handle.write(f"v {x[0]!r} {x[1]!r} {x[2]!r}\n")
        for face in mesh.faces:
            handle.write(f"f {face[0] + 1} {face[1] + 1} {face[2] + 1}\n")
    logger.info(f"Mesh exported to {csv_path} and {obj_path}")
    return {'csv': csv_path, 'obj': obj_path}


def load_mesh_csv(path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision='round_trip')


# ============= INVOLUTION =============

@dataclass
class InvolutionReport:
    max_residual: float
    residuals: Dict[str, float] = field(default_factory=dict)
    passed: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {'passed': self.passed, 'max_residual': self.max_residual,
                'residuals': self.residuals}


def involution(z):
    """I(z) = -1/conj(z), fixed-point free and antiholomorphic"""
    return -1.0 / np.conj(z)


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def involution_check(data: WeierstrassData, n_samples: Optional[int] = None,
                     seed: Optional[int] = None) -> InvolutionReport:
    """
    Residuals of φ∘I = conj ψ, ψ∘I = conj φ and I*dh = conj dh

    With I = J∘conj and J(w) = -1/w, the pullback of h'(z)dz is
    h'(-1/z̄)/z̄² dz̄, compared with conj(h'(z)) dz̄. Samples are drawn in
    0.5 ≤ |z| ≤ 2 from a seeded generator.

    Raises:
        WeierstrassDataError: when the data are not flagged as carrying the involution
    """
    if not data.has_involution:
        logger.error(f"{data.name}: involution check requested for orientable data")
        raise WeierstrassDataError(f"{data.name}: data are not flagged with the involution I(z) = -1/conj(z)")
    n_samples = IMMERSION.involution_samples if n_samples is None else n_samples
    rng = np.random.default_rng(IMMERSION.involution_seed if seed is None else seed)
    radii = np.exp(rng.uniform(np.log(0.5), np.log(2.0), n_samples))
    z = radii * np.exp(1j * rng.uniform(0, 2 * np.pi, n_samples))
    iz = involution(z)
    residuals = {
        'phi': _relative(data.phi(iz), np.conj(data.psi(z))),
        'psi': _relative(data.psi(iz), np.conj(data.phi(z))),
        'dh': _relative(data.dh(iz) / np.conj(z) ** 2, np.conj(data.dh(z))),
    }
    worst = max(residuals.values())
    passed = bool(worst <= TOLERANCES.involution)
    if not passed:
        logger.warning(f"{data.name}: involution residual {worst:.3e}")
    return InvolutionReport(max_residual=worst, residuals=residuals, passed=passed)


# ============= COMPLETENESS =============

@dataclass
class CompletenessVerdict:
    point: ExtComplex
    complete: bool
    method: str  # 'pole_order' | 'ray_integration'
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'point': encode_point(self.point), 'complete': self.complete,
                'method': self.method, 'detail': self.detail}


def metric_density(data: WeierstrassData, z) -> np.ndarray:
    """e^ω = 2|h'||φ - conj ψ|, evaluated through logarithms to survive exponential factors"""
    zz = np.asarray(z, dtype=complex)
    with np.errstate(all='ignore'):
        log_h = data.dh.log_value(zz)
        first = np.exp(log_h + data.phi.log_value(zz))
        second = np.exp(log_h + np.conj(data.psi.log_value(zz)))
    return 2 * np.abs(first - second)


def _special_points(data: WeierstrassData) -> List[complex]:
    points: List[complex] = list(data.finite_punctures())
    for f in (data.phi, data.psi, data.dh):
        if f.is_zero:
            continue
        points.extend(r for r, _ in poly_roots(f.num))
        points.extend(r for r, _ in poly_roots(f.den))
    return points


def _ray_integrals(data: WeierstrassData, p: ExtComplex) -> List[List[float]]:
    special = _special_points(data)
    if p is INF:
        r0 = max([1.0] + [2 * abs(s) for s in special])
        center = 0j
        radii = r0 * 10.0 ** np.arange(COMPLETENESS.ray_decades + 1)
    else:
        center = complex(p)
        others = [abs(s - center) for s in special if not same_point(s, center)]
        r0 = 0.5 * min([1.0] + others)
        radii = r0 * 10.0 ** (-np.arange(COMPLETENESS.ray_decades + 1, dtype=float))

    rays = []
    for k in range(COMPLETENESS.ray_count):
        direction = np.exp(1j * (2 * np.pi * k / COMPLETENESS.ray_count + 0.1))

        def integrand(s: float, direction=direction) -> float:
            r = np.exp(s)
            return float(metric_density(data, center + r * direction) * r)

        partial = []
        total = 0.0
        for a, b in zip(radii[:-1], radii[1:]):
            lo, hi = sorted((np.log(a), np.log(b)))
            value, _ = quad(integrand, lo, hi, limit=200)
            total += value
            partial.append(total if np.isfinite(total) else float('inf'))
        rays.append(partial)
    return rays


def completeness_check(data: WeierstrassData, p: ExtComplex) -> CompletenessVerdict:
    """
    Completeness of the end at p

    Non-essential ends are complete exactly when x_z dz has a pole of order
    at least 2. Essential ends are judged by integrating e^ω |dz| along rays
    into the end: divergence on every ray (partial integrals growing beyond
    the configured factor times the first decade) means complete.
    """
    report = classify_end(data, p)
    if report.kind != 'essential':
        complete = report.pole_order is not None and report.pole_order >= 2
        detail = {'pole_order': report.pole_order, 'd': report.d, 'd_tilde': report.d_tilde}
        if report.d_tilde is not None and report.d_tilde < 1:
            complete = False
            detail['flag'] = 'reduced multiplicity below 1'
        if not complete:
            logger.warning(f"{data.name}: end {format_point(p)} is not complete")
        return CompletenessVerdict(point=p, complete=complete, method='pole_order', detail=detail)

    rays = _ray_integrals(data, p)
    growth = []
    for partial in rays:
        first = partial[0]
        last = partial[-1]
        growth.append(float('inf') if not np.isfinite(last) or first <= 0 else last / first)
    complete = all(g >= COMPLETENESS.divergence_factor for g in growth)
    return CompletenessVerdict(
        point=p, complete=complete, method='ray_integration',
        detail={'min_growth': float(min(growth)), 'rays': len(rays)},
    )


if __name__ == "__main__":
    from src.gallery import make_example

    print("=" * 60)
    print("IMMERSION DEMO: classical catenoid")
    print("=" * 60)
    example = make_example('catenoid', t=0.0, s=1.0)
    grid = PolarGrid.regular(0.5, 2.0, 4, 8)
    mesh = immerse_grid(example.data, grid, basepoint=1.0)
    print(mesh.to_frame().head())
    print(f"\nLoop closure on |z|=1: {loop_closure_residual(example.data, 0j, 1.0):.2e}")
    for end in example.data.punctures:
        print(f"Complete at {format_point(end)}: {completeness_check(example.data, end).complete}")
