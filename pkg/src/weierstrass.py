"""
Weierstrass data for stationary surfaces in R^4_1

A surface is given by two Gauss maps φ, ψ and a height differential dh on a
punctured sphere; the immersion is x = 2 Re ∫ (φ+ψ, -i(φ-ψ), 1-φψ, 1+φψ) dh.
This module checks the regularity and period conditions, classifies ends and
computes their multiplicities.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.complexkit import (
    INF,
    EssentialSingularityError,
    ExtComplex,
    MeroExpr,
    divisor_of,
    format_point,
    point_key,
    poly_roots,
    residue,
    same_point,
)
from src.config import TOLERANCES

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

FORM_NAMES = ('dh', 'phi_dh', 'psi_dh', 'phipsi_dh')


class WeierstrassDataError(ValueError):
    """Weierstrass data that cannot describe a surface"""


class NotAlgebraicError(ValueError):
    """An operation that needs algebraic (rational) data got an exponential factor"""


def encode_point(point: ExtComplex) -> Any:
    return 'inf' if point is INF else [complex(point).real, complex(point).imag]


def encode_value(value: Optional[ExtComplex]) -> Any:
    if value is None:
        return None
    return encode_point(value)


@dataclass(frozen=True)
class WeierstrassData:
    """(φ, ψ, dh) on the sphere minus `punctures`; dh is stored by its coefficient"""
    phi: MeroExpr
    psi: MeroExpr
    dh: MeroExpr
    punctures: Tuple[ExtComplex, ...]
    has_involution: bool = False
    name: str = 'custom'

    def __post_init__(self):
        if self.phi.is_constant or self.psi.is_constant:
            raise WeierstrassDataError("Gauss maps φ and ψ must both be nonconstant")
        if self.dh.is_zero:
            raise WeierstrassDataError("height differential dh is identically zero")
        if len(self.punctures) == 0:
            raise WeierstrassDataError("at least one puncture is required")
        unique: List[ExtComplex] = []
        for p in self.punctures:
            p = p if p is INF else complex(p)
            if not any(same_point(p, q) for q in unique):
                unique.append(p)
        object.__setattr__(self, 'punctures', tuple(sorted(unique, key=point_key)))

    @cached_property
    def phi_dh(self) -> MeroExpr:
        return self.phi * self.dh

    @cached_property
    def psi_dh(self) -> MeroExpr:
        return self.psi * self.dh

    @cached_property
    def phipsi_dh(self) -> MeroExpr:
        return self.phi * self.psi * self.dh

    def forms(self) -> Dict[str, MeroExpr]:
        """The four coefficient forms spanning x_z dz"""
        return {
            'dh': self.dh,
            'phi_dh': self.phi_dh,
            'psi_dh': self.psi_dh,
            'phipsi_dh': self.phipsi_dh,
        }

    @property
    def is_algebraic(self) -> bool:
        return self.phi.is_algebraic and self.psi.is_algebraic and self.dh.is_algebraic

    def is_puncture(self, point: ExtComplex) -> bool:
        return any(same_point(point, p) for p in self.punctures)

    def finite_punctures(self) -> List[complex]:
        return [p for p in self.punctures if p is not INF]


@dataclass
class SurfaceTopology:
    """Genus-zero topology; for involution data the quotient has half the ends"""
    genus: int
    ends: int
    orientable: bool

    @property
    def quotient_ends(self) -> int:
        return self.ends if self.orientable else self.ends // 2

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.ends

    def to_dict(self) -> Dict[str, Any]:
        return {
            'genus': self.genus,
            'ends': self.ends,
            'orientable': self.orientable,
            'quotient_ends': self.quotient_ends,
        }


@dataclass
class AdmissibilityReport:
    passed: bool
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {'passed': self.passed, 'violations': self.violations}


@dataclass
class PeriodReport:
    passed: bool
    max_residual: float
    per_puncture: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'max_residual': self.max_residual,
            'per_puncture': self.per_puncture,
        }


@dataclass
class EndReport:
    """Classification of one end with its index data and multiplicity"""
    point: ExtComplex
    kind: str  # 'regular' | 'good_singular' | 'bad_singular' | 'essential'
    phi_value: Optional[ExtComplex] = None
    psi_value: Optional[ExtComplex] = None
    m: Optional[int] = None
    n: Optional[int] = None
    ind: Optional[int] = None
    ind_plus: Optional[int] = None
    ind_10: Optional[int] = None
    ind_01: Optional[int] = None
    pole_order: Optional[int] = None  # pole order of x_z dz, that is d + 1
    d: Optional[int] = None
    d_tilde: Optional[int] = None
    normalized: bool = False

    @property
    def is_singular(self) -> bool:
        return self.kind in ('good_singular', 'bad_singular')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'point': encode_point(self.point),
            'kind': self.kind,
            'phi_value': encode_value(self.phi_value),
            'psi_value': encode_value(self.psi_value),
            'm': self.m,
            'n': self.n,
            'ind': self.ind,
            'ind_plus': self.ind_plus,
            'ind_10': self.ind_10,
            'ind_01': self.ind_01,
            'pole_order': self.pole_order,
            'd': self.d,
            'd_tilde': self.d_tilde,
            'normalized': self.normalized,
        }


def surface_topology(data: WeierstrassData) -> SurfaceTopology:
    return SurfaceTopology(genus=0, ends=len(data.punctures), orientable=not data.has_involution)


def form_order(f: MeroExpr, p: ExtComplex) -> int:
    """Order of the 1-form f(z) dz at p; dz itself has a double pole at INF"""
    return f.order_at(p) - (2 if p is INF else 0)


# ============= ADMISSIBILITY =============

def _candidate_points(data: WeierstrassData) -> List[ExtComplex]:
    points: List[ExtComplex] = []
    for f in (data.phi, data.psi, data.dh):
        for entry in divisor_of(f).entries:
            if entry.kind == 'essential':
                continue
            if not any(same_point(entry.point, q) for q in points):
                points.append(entry.point)
    if INF not in points:
        points.append(INF)
    return [p for p in points if not data.is_puncture(p)]


def check_admissibility(data: WeierstrassData) -> AdmissibilityReport:
    """
    Pole/zero conditions on the domain (the sphere minus the punctures)

    (a) poles of φ and ψ never coincide; (b) zeros of dh sit exactly at the
    poles of φ or ψ, with order equal to the larger pole order, and dh has
    no poles. Essential singularities inside the domain are violations too.

    Args:
        data: Weierstrass data

    Returns:
        AdmissibilityReport listing every violated condition by point
    """
    violations: List[Dict[str, Any]] = []
    essential_points: List[ExtComplex] = []
    for label, f in (('phi', data.phi), ('psi', data.psi), ('dh', data.dh)):
        for p in f.essential_points():
            essential_points.append(p)
            if not data.is_puncture(p):
                violations.append({
                    'point': encode_point(p),
                    'condition': 'essential singularity in the domain',
                    'detail': f"{label} has an essential singularity at {format_point(p)}",
                })

    for q in _candidate_points(data):
        if any(same_point(q, e) for e in essential_points):
            continue
        pole_phi = max(0, -data.phi.order_at(q))
        pole_psi = max(0, -data.psi.order_at(q))
        if pole_phi and pole_psi:
            violations.append({
                'point': encode_point(q),
                'condition': 'poles of phi and psi coincide',
                'detail': f"phi pole order {pole_phi}, psi pole order {pole_psi}",
            })
        order = form_order(data.dh, q)
        expected = max(pole_phi, pole_psi)
        if order < 0:
            violations.append({
                'point': encode_point(q),
                'condition': 'dh has a pole in the domain',
                'detail': f"dh has order {order} at {format_point(q)}",
            })
        elif order != expected:
            violations.append({
                'point': encode_point(q),
                'condition': 'zeros of dh must match poles of phi/psi with the same order',
                'detail': f"dh order {order}, max pole order of phi/psi {expected}",
            })

    if violations:
        logger.warning(f"{data.name}: {len(violations)} admissibility violation(s)")
    return AdmissibilityReport(passed=not violations, violations=violations)


# ============= PERIODS =============

def _residue_radius(data: WeierstrassData, p: ExtComplex) -> float:
    special: List[complex] = []
    for f in data.forms().values():
        if f.is_zero:
            continue
        special.extend(r for r, _ in poly_roots(f.den))
        special.extend(q for q in f.essential_points() if q is not INF)
    special.extend(data.finite_punctures())
    if p is INF:
        return 2.0 * max([1.0] + [abs(s) for s in special])
    others = [abs(s - complex(p)) for s in special if not same_point(s, p)]
    return 0.5 * min([1.0] + others)


def _form_residue(f: MeroExpr, p: ExtComplex, radius: float) -> complex:
    if f.is_zero:
        return 0j
    return residue(f, p, radius=radius)


def check_periods(data: WeierstrassData) -> PeriodReport:
    """
    Horizontal and vertical period conditions, puncture by puncture

    On a punctured sphere every cycle is a sum of small loops around
    punctures, so with R1..R4 the residues of φdh, ψdh, dh, φψdh the
    conditions read R1 = conj(R2), Im R3 = 0, Im R4 = 0.

    Args:
        data: Weierstrass data

    Returns:
        PeriodReport with per-puncture residues and residuals
    """
    rows: List[Dict[str, Any]] = []
    worst = 0.0
    for p in data.punctures:
        radius = _residue_radius(data, p)
        r_phi = _form_residue(data.phi_dh, p, radius)
        r_psi = _form_residue(data.psi_dh, p, radius)
        r_dh = _form_residue(data.dh, p, radius)
        r_phipsi = _form_residue(data.phipsi_dh, p, radius)
        horizontal = abs(r_phi - np.conj(r_psi))
        vertical = max(abs(r_dh.imag), abs(r_phipsi.imag))
        worst = max(worst, horizontal, vertical)
        rows.append({
            'point': encode_point(p),
            'res_phi_dh': [r_phi.real, r_phi.imag],
            'res_psi_dh': [r_psi.real, r_psi.imag],
            'res_dh': [r_dh.real, r_dh.imag],
            'res_phipsi_dh': [r_phipsi.real, r_phipsi.imag],
            'horizontal_residual': float(horizontal),
            'vertical_residual': float(vertical),
        })
    passed = worst <= TOLERANCES.period
    if not passed:
        logger.warning(f"{data.name}: period conditions violated (max residual {worst:.3e})")
    return PeriodReport(passed=passed, max_residual=float(worst), per_puncture=rows)


# ============= MÖBIUS MOVES =============

def apply_lorentz_move(data: WeierstrassData, a: complex, b: complex, c: complex,
                       d: complex) -> WeierstrassData:
    """
    Möbius move on the Gauss maps with the induced change of dh

    φ → (aφ+b)/(cφ+d), ψ → (āψ+b̄)/(c̄ψ+d̄), dh → (cφ+d)(c̄ψ+d̄)dh with
    ad - bc = 1. The image surface differs by a Lorentz transformation.
    """
    if abs(a * d - b * c - 1) > 1e-12:
        raise WeierstrassDataError(f"Möbius move must be unimodular, got ad-bc = {a * d - b * c}")
    if not (data.phi.is_algebraic and data.psi.is_algebraic):
        raise NotAlgebraicError("Möbius moves need rational Gauss maps")
    ac, bc_, cc, dc = np.conj(a), np.conj(b), np.conj(c), np.conj(d)
    phi = data.phi.mobius(a, b, c, d)
    psi = data.psi.mobius(ac, bc_, cc, dc)
    factor = (data.phi * c + d) * (data.psi * cc + dc)
    return WeierstrassData(phi, psi, factor * data.dh, data.punctures,
                           data.has_involution, data.name)


_UNIT_CANDIDATES = (1.0, 1j, -1.0, -1j, np.exp(0.25j * np.pi), np.exp(0.75j * np.pi),
                    np.exp(1.25j * np.pi), np.exp(1.75j * np.pi))


def _finite_after(value: ExtComplex, coefficient: complex) -> bool:
    return value is INF or abs(coefficient * complex(value) + 1) > 0.1


def normalize_at_end(data: WeierstrassData, p: ExtComplex) -> WeierstrassData:
    """
    Move φ(p), ψ(p) off infinity with a unitary Möbius move

    The move is (1/√2)[[1, -u], [ū, 1]] for the first unit u that keeps both
    images finite; data already finite at p is returned unchanged.
    """
    phi_value = data.phi.evaluate(p)
    psi_value = data.psi.evaluate(p)
    if phi_value is not INF and psi_value is not INF:
        return data
    for u in _UNIT_CANDIDATES:
        u = complex(u)
        if _finite_after(phi_value, np.conj(u)) and _finite_after(psi_value, u):
            s = 1 / np.sqrt(2)
            return apply_lorentz_move(data, s, -u * s, np.conj(u) * s, s)
    raise WeierstrassDataError(f"no unitary move makes the Gauss maps finite at {format_point(p)}")


# ============= ENDS =============

def _value_multiplicity(f: MeroExpr, p: ExtComplex, value: ExtComplex) -> int:
    """Multiplicity with which f takes `value` at p"""
    if value is INF:
        return -f.order_at(p)
    if f.is_algebraic:
        return (f - value).order_at(p)
    if p is INF:
        return _value_multiplicity(f.compose_reciprocal(), 0j, value)
    terms = 16
    series = f.series_at(complex(p), terms)
    series[0] -= complex(value)
    scale = max(1.0, float(np.max(np.abs(series))))
    for k, c in enumerate(series):
        if abs(c) > TOLERANCES.order_detection * scale * 10:
            return k
    return terms


def _xz_pole_order(data: WeierstrassData, p: ExtComplex) -> int:
    orders = [form_order(f, p) for f in data.forms().values() if not f.is_zero]
    return max(0, -min(orders))


def _is_singular(phi_value: ExtComplex, psi_value: ExtComplex) -> bool:
    if phi_value is INF or psi_value is INF:
        return phi_value is INF and psi_value is INF
    gap = abs(complex(phi_value) - np.conj(complex(psi_value)))
    return gap <= TOLERANCES.regular_gap * max(1.0, abs(complex(phi_value)))


def classify_end(data: WeierstrassData, p: ExtComplex) -> EndReport:
    """
    Classify the end at puncture p and fill in its index data

    Regular when φ(p) ≠ conj ψ(p); otherwise good or bad singular according
    to the multiplicities m, n with which φ and ψ take their values at p
    (bad when m = n). ind = m if m < n, -n if m > n. Infinite values are
    first moved to finite ones by a unitary Möbius move (algebraic data),
    which preserves the multiplicities.

    Args:
        data: Weierstrass data
        p: A puncture

    Returns:
        EndReport; kind 'essential' with empty index data when φ, ψ or dh is
        essential at p
    """
    if any(f.is_essential_at(p) for f in (data.phi, data.psi, data.dh)):
        return EndReport(point=p, kind='essential')

    phi_value = data.phi.evaluate(p)
    psi_value = data.psi.evaluate(p)
    work = data
    normalized = False
    if (phi_value is INF or psi_value is INF) and data.phi.is_algebraic and data.psi.is_algebraic:
        work = normalize_at_end(data, p)
        normalized = work is not data
    work_phi = work.phi.evaluate(p)
    work_psi = work.psi.evaluate(p)

    pole_order = _xz_pole_order(data, p)
    d = pole_order - 1
    if not _is_singular(work_phi, work_psi):
        return EndReport(point=p, kind='regular', phi_value=phi_value, psi_value=psi_value,
                         m=0, n=0, ind=0, ind_plus=0, ind_10=0, ind_01=0,
                         pole_order=pole_order, d=d, d_tilde=d, normalized=normalized)

    m = _value_multiplicity(work.phi, p, work_phi)
    n = _value_multiplicity(work.psi, p, work_psi)
    if m == n:
        logger.warning(f"{data.name}: bad singular end at {format_point(p)} (m = n = {m})")
        return EndReport(point=p, kind='bad_singular', phi_value=phi_value, psi_value=psi_value,
                         m=m, n=n, pole_order=pole_order, d=d, normalized=normalized)
    ind = m if m < n else -n
    ind_plus = abs(ind)
    return EndReport(point=p, kind='good_singular', phi_value=phi_value, psi_value=psi_value,
                     m=m, n=n, ind=ind, ind_plus=ind_plus,
                     ind_10=(ind_plus + ind) // 2, ind_01=(ind_plus - ind) // 2,
                     pole_order=pole_order, d=d, d_tilde=d - ind_plus, normalized=normalized)


def end_multiplicity(data: WeierstrassData, p: ExtComplex) -> Tuple[int, int, int]:
    """
    (d, ind⁺, d̃) at an end: d + 1 is the pole order of x_z dz, d̃ = d - ind⁺

    Raises:
        EssentialSingularityError: at essential ends
    """
    report = classify_end(data, p)
    if report.kind == 'essential':
        raise EssentialSingularityError(f"no pole order at essential end {format_point(p)}")
    ind_plus = report.ind_plus if report.ind_plus is not None else 0
    return report.d, ind_plus, report.d - ind_plus


def classify_all_ends(data: WeierstrassData) -> List[EndReport]:
    return [classify_end(data, p) for p in data.punctures]


def ambient_space(data: WeierstrassData) -> str:
    """
    'R3' when φψ ≡ -1, 'R3_1' when φψ ≡ 1, otherwise 'full'

    These are the degenerate cases where the surface lies in a spacelike or a
    Lorentzian hyperplane.
    """
    if not (data.phi.is_algebraic and data.psi.is_algebraic):
        return 'full'
    product = data.phi * data.psi
    if not product.is_constant:
        return 'full'
    value = product.num.coeffs[0] / product.den.coeffs[0]
    if abs(value + 1) <= 1e-10:
        return 'R3'
    if abs(value - 1) <= 1e-10:
        return 'R3_1'
    return 'full'


def weierstrass_summary(data: WeierstrassData) -> Dict[str, Any]:
    """Compact description used in reports"""
    return {
        'name': data.name,
        'punctures': [encode_point(p) for p in data.punctures],
        'has_involution': data.has_involution,
        'algebraic': data.is_algebraic,
        'ambient': ambient_space(data),
        'divisors': {
            'phi': divisor_of(data.phi).to_dict(),
            'psi': divisor_of(data.psi).to_dict(),
            'dh': divisor_of(data.dh).to_dict(),
        },
    }


def make_data(phi: MeroExpr, psi: MeroExpr, dh: MeroExpr, punctures: Sequence[ExtComplex],
              has_involution: bool = False, name: str = 'custom') -> WeierstrassData:
    return WeierstrassData(phi, psi, dh, tuple(punctures), has_involution, name)


if __name__ == "__main__":
    print("=" * 60)
    print("WEIERSTRASS DATA DEMO: catenoid t=0.3")
    print("=" * 60)
    t = 0.3
    catenoid = make_data(
        MeroExpr.from_coeffs([t, 1.0]),
        MeroExpr.from_coeffs([-1.0], [-t, 1.0]),
        MeroExpr.from_coeffs([-t, 1.0], [0, 0, 1.0]),
        [0j, INF],
        name='catenoid',
    )
    print(f"\nAdmissible: {check_admissibility(catenoid).passed}")
    print(f"Periods: {check_periods(catenoid).to_dict()}")
    for end in classify_all_ends(catenoid):
        print(f"End {format_point(end.point)}: {end.kind}, d={end.d}, d~={end.d_tilde}")
