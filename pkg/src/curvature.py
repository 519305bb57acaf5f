"""
Total Gaussian and normal curvature of stationary surfaces

The curvature 2-form is (-K + iK⊥) dM = 2i φ_z conj(ψ)_z̄ / (φ - conj ψ)² dz∧dz̄,
and by Stokes' theorem its integral over the surface reduces to boundary
integrals of φ'/(φ - conj ψ) dz (or of conj(ψ')/(φ - conj ψ) dz̄) around the
ends and around interior poles of φ (of ψ). For algebraic data the totals
also follow exactly from degrees and end indices; this module computes both
and checks the global identities between them.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.complexkit import (
    INF,
    ContourError,
    ConvergenceError,
    ExtComplex,
    MeroExpr,
    contour_integral,
    format_point,
    poly_roots,
    same_point,
)
from src.config import CONTOUR, QUADRATURE, TOLERANCES
from src.immersion import conformal_factor
from src.weierstrass import (
    EndReport,
    NotAlgebraicError,
    WeierstrassData,
    classify_all_ends,
    encode_point,
    surface_topology,
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

FOUR_PI = 4 * math.pi
TWO_PI = 2 * math.pi
_EXP_CLIP = 700.0


class BadSingularEndError(ValueError):
    """φ and ψ take the same value with the same multiplicity at an end; ∫K diverges"""


class SingularPointError(ValueError):
    """The curvature density was requested where φ = conj ψ"""


# ============= POINTWISE DENSITY =============

def curvature_density(data: WeierstrassData, z) -> np.ndarray:
    """
    -K + iK⊥ at z: 4 φ'(z) conj(ψ'(z)) / ((φ - conj ψ)² e^{2ω})

    Raises:
        SingularPointError: at points with φ(z) = conj ψ(z) (branch points)
    """
    zz = np.asarray(z, dtype=complex)
    with np.errstate(all='ignore'):
        phi = np.asarray(data.phi(zz))
        psi_bar = np.conj(np.asarray(data.psi(zz)))
        gap = phi - psi_bar
        if np.any(np.abs(gap) <= TOLERANCES.regular_gap * np.maximum(1.0, np.abs(phi))):
            raise SingularPointError("curvature density requested at a point with phi = conj(psi)")
        numerator = 4 * np.asarray(data.phi.derivative()(zz)) * np.conj(np.asarray(data.psi.derivative()(zz)))
        value = numerator / (gap ** 2 * np.asarray(conformal_factor(data, zz)))
    return value if np.ndim(value) else complex(value)


def curvature_form_density(data: WeierstrassData, z) -> np.ndarray:
    """(-K + iK⊥) e^{2ω}: the curvature 2-form per unit du dv"""
    zz = np.asarray(z, dtype=complex)
    with np.errstate(all='ignore'):
        gap = np.asarray(data.phi(zz)) - np.conj(np.asarray(data.psi(zz)))
        return 4 * np.asarray(data.phi.derivative()(zz)) * np.conj(np.asarray(data.psi.derivative()(zz))) / gap ** 2


# ============= BOUNDARY FORMS =============

def _clip(exponent: np.ndarray) -> np.ndarray:
    return np.minimum(exponent.real, _EXP_CLIP) + 1j * exponent.imag


def phi_boundary_form(data: WeierstrassData) -> Callable[[np.ndarray], np.ndarray]:
    """g = φ'/(φ - conj ψ) written as (φ'/φ) / (1 - exp(conj log ψ - log φ))"""
    log_derivative = data.phi.log_derivative()

    def g(z: np.ndarray) -> np.ndarray:
        with np.errstate(all='ignore'):
            exponent = _clip(np.conj(data.psi.log_value(z)) - data.phi.log_value(z))
            return log_derivative(z) / (1 - np.exp(exponent))
    return g


def psi_boundary_form(data: WeierstrassData) -> Callable[[np.ndarray], np.ndarray]:
    """k = conj(ψ')/(φ - conj ψ) written as conj(ψ'/ψ) / (exp(log φ - conj log ψ) - 1), a dz̄ form"""
    log_derivative = data.psi.log_derivative()

    def k(z: np.ndarray) -> np.ndarray:
        with np.errstate(all='ignore'):
            exponent = _clip(data.phi.log_value(z) - np.conj(data.psi.log_value(z)))
            return np.conj(log_derivative(z)) / (np.exp(exponent) - 1)
    return k


# ============= CONTOUR SCHEDULES =============

def _special_points(data: WeierstrassData) -> List[complex]:
    points: List[complex] = list(data.finite_punctures())
    for f in (data.phi, data.psi, data.dh):
        points.extend(r for r, _ in poly_roots(f.num))
        points.extend(r for r, _ in poly_roots(f.den))
        points.extend(p for p in f.essential_points() if p is not INF)
    return points


def _interior_poles(f: MeroExpr, data: WeierstrassData) -> List[complex]:
    return [r for r, _ in poly_roots(f.den) if not data.is_puncture(r)]


def _at_stage(radii: List[float], stage: int) -> float:
    return radii[min(stage, len(radii) - 1)]


@dataclass
class AnnulusSpec:
    """
    Radius schedules approaching each end and shrinking onto each interior pole

    Outer schedules (around INF) increase; inner schedules (around finite
    ends and interior poles) decrease. Stage i uses the i-th radius of every
    schedule, the last radius once a schedule is exhausted.
    """
    ends: List[Tuple[ExtComplex, List[float]]]
    phi_poles: List[Tuple[complex, List[float]]] = field(default_factory=list)
    psi_poles: List[Tuple[complex, List[float]]] = field(default_factory=list)

    def __post_init__(self):
        for p, radii in self.ends:
            if not radii:
                raise ValueError(f"empty radius schedule at {format_point(p)}")
            steps = np.diff(radii)
            if p is INF and np.any(steps <= 0):
                raise ValueError("outer radii must increase toward infinity")
            if p is not INF and np.any(steps >= 0):
                raise ValueError(f"inner radii must decrease toward {format_point(p)}")
        for q, radii in self.phi_poles + self.psi_poles:
            if not radii or np.any(np.diff(radii) >= 0):
                raise ValueError(f"pole radii must be nonempty and decrease toward {format_point(q)}")

    @classmethod
    def default(cls, data: WeierstrassData) -> 'AnnulusSpec':
        special = _special_points(data)
        scale = max([1.0] + [abs(s) for s in special])
        ends: List[Tuple[ExtComplex, List[float]]] = []
        for p in data.punctures:
            essential = any(f.is_essential_at(p) for f in (data.phi, data.psi, data.dh))
            if essential:
                factors = [CONTOUR.essential_start * CONTOUR.essential_factor ** k
                           for k in range(CONTOUR.essential_steps)]
            else:
                factors = list(CONTOUR.algebraic_outer)
            if p is INF:
                ends.append((INF, [scale * f for f in factors]))
            else:
                others = [abs(s - p) for s in special if not same_point(s, p)]
                distance = min([1.0] + others)
                ends.append((p, [distance / f for f in factors]))

        def circles(poles: List[complex]) -> List[Tuple[complex, List[float]]]:
            out = []
            for q in poles:
                others = [abs(s - q) for s in special if not same_point(s, q)]
                distance = min([1.0] + others)
                out.append((q, [distance * f for f in CONTOUR.interior_radii]))
            return out

        return cls(ends=ends,
                   phi_poles=circles(_interior_poles(data.phi, data)),
                   psi_poles=circles(_interior_poles(data.psi, data)))

    @property
    def stages(self) -> int:
        return max(len(radii) for _, radii in self.ends + self.phi_poles + self.psi_poles)

    def radius(self, index: int, stage: int) -> float:
        return _at_stage(self.ends[index][1], stage)

    def scaled(self, factor: float) -> 'AnnulusSpec':
        """Every radius multiplied by factor (schedules keep their direction)"""
        return AnnulusSpec(
            ends=[(p, [r * factor for r in radii]) for p, radii in self.ends],
            phi_poles=[(q, [r * factor for r in radii]) for q, radii in self.phi_poles],
            psi_poles=[(q, [r * factor for r in radii]) for q, radii in self.psi_poles],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ends': [{'point': encode_point(p), 'radii': list(radii)} for p, radii in self.ends],
            'phi_poles': [{'point': encode_point(q), 'radii': list(radii)} for q, radii in self.phi_poles],
            'psi_poles': [{'point': encode_point(q), 'radii': list(radii)} for q, radii in self.psi_poles],
        }


def _circle_integral(func: Callable, center: complex, radius: float, differential: str) -> complex:
    """Contour integral, nudging the radius off singular points of the integrand"""
    for attempt in range(4):
        try:
            return contour_integral(func, center, radius, differential=differential,
                                    tol=QUADRATURE.curvature_tol)
        except ContourError:
            if attempt == 3:
                raise
            radius *= CONTOUR.radius_nudge
            logger.warning(f"contour around {format_point(center)} nudged to radius {radius:.6g}")
    raise ContourError("unreachable")


@dataclass
class ContourTotals:
    """Numeric totals from the boundary forms with their per-stage history"""
    total_K: float
    total_Kperp: float
    psi_total_K: float
    psi_total_Kperp: float
    history: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def form_difference(self) -> float:
        return abs(complex(self.total_K, self.total_Kperp) - complex(self.psi_total_K, self.psi_total_Kperp))

    @property
    def last_change(self) -> Optional[float]:
        if len(self.history) < 2:
            return None
        return abs(self.history[-1]['total_K'] - self.history[-2]['total_K'])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'total_K': self.total_K,
            'total_Kperp': self.total_Kperp,
            'psi_total_K': self.psi_total_K,
            'psi_total_Kperp': self.psi_total_Kperp,
            'form_difference': self.form_difference,
            'last_change': self.last_change,
            'history': self.history,
        }


def _stage_total(data: WeierstrassData, annuli: AnnulusSpec, stage: int,
                 func: Callable, poles: List[Tuple[complex, List[float]]], differential: str) -> complex:
    total = 0j
    for index, (p, _) in enumerate(annuli.ends):
        radius = annuli.radius(index, stage)
        if p is INF:
            total += _circle_integral(func, 0j, radius, differential)
        else:
            total -= _circle_integral(func, complex(p), radius, differential)
    for q, radii in poles:
        total -= _circle_integral(func, q, _at_stage(radii, stage), differential)
    return -2j * total


def total_curvature_contour(data: WeierstrassData, annuli: Optional[AnnulusSpec] = None) -> ContourTotals:
    """
    ∫K and ∫K⊥ from the boundary forms, stage by stage

    W = -∫K + i∫K⊥ = -2i (∮_outer - Σ ∮_inner - Σ ∮_poles) g dz with every
    circle counterclockwise. The conj(ψ') form is evaluated the same way
    against dz̄ with the poles of ψ removed. When ∞ is not a puncture its
    boundary term tends to zero and no outer circle is used.

    Args:
        data: Weierstrass data, regular on the swept region
        annuli: Radius schedules (AnnulusSpec.default when omitted)

    Returns:
        ContourTotals at the last stage, with the whole history

    Raises:
        ConvergenceError: when node doubling hits the cap
    """
    annuli = AnnulusSpec.default(data) if annuli is None else annuli
    g = phi_boundary_form(data)
    k = psi_boundary_form(data)
    history = []
    w_phi = w_psi = 0j
    for stage in range(annuli.stages):
        w_phi = _stage_total(data, annuli, stage, g, annuli.phi_poles, 'dz')
        w_psi = _stage_total(data, annuli, stage, k, annuli.psi_poles, 'dzbar')
        history.append({
            'stage': stage,
            'radii': [annuli.radius(i, stage) for i in range(len(annuli.ends))],
            'total_K': -w_phi.real,
            'total_Kperp': w_phi.imag,
            'psi_total_K': -w_psi.real,
            'psi_total_Kperp': w_psi.imag,
        })
    totals = ContourTotals(total_K=-w_phi.real, total_Kperp=w_phi.imag,
                           psi_total_K=-w_psi.real, psi_total_Kperp=w_psi.imag, history=history)
    logger.info(f"{data.name}: contour total K = {totals.total_K:.10f} ({totals.total_K / math.pi:.8f}π)")
    return totals


def annulus_total(data: WeierstrassData, r_inner: float, r_outer: float, center: complex = 0j) -> complex:
    """∫(-K + iK⊥) dM over r_inner ≤ |z - center| ≤ r_outer (no interior poles of φ allowed)"""
    for q in _interior_poles(data.phi, data) + [p for p in data.finite_punctures()]:
        if r_inner < abs(q - center) < r_outer:
            raise ContourError(f"annulus contains pole or puncture {format_point(q)}")
    g = phi_boundary_form(data)
    outer = _circle_integral(g, center, r_outer, 'dz')
    inner = _circle_integral(g, center, r_inner, 'dz')
    return -2j * (outer - inner)


# ============= EXACT TOTALS =============

@dataclass
class ExactCurvature:
    """∫K = -4π(deg φ - Σ ind^{1,0}) = -4π(deg ψ - Σ ind^{0,1})"""
    total_K: float
    total_K_psi: float
    deg_phi: int
    deg_psi: int
    sum_ind_10: int
    sum_ind_01: int

    @property
    def agree(self) -> bool:
        return self.deg_phi - self.sum_ind_10 == self.deg_psi - self.sum_ind_01

    def to_dict(self) -> Dict[str, Any]:
        return {
            'total_K': self.total_K,
            'total_K_psi': self.total_K_psi,
            'deg_phi': self.deg_phi,
            'deg_psi': self.deg_psi,
            'sum_ind_10': self.sum_ind_10,
            'sum_ind_01': self.sum_ind_01,
            'agree': self.agree,
        }


def _require_exact(data: WeierstrassData, ends: List[EndReport]):
    if not data.is_algebraic:
        raise NotAlgebraicError(f"{data.name}: exact totals need algebraic data")
    bad = [e for e in ends if e.kind == 'bad_singular']
    if bad:
        points = ', '.join(format_point(e.point) for e in bad)
        logger.error(f"{data.name}: bad singular end(s) at {points}")
        raise BadSingularEndError(
            f"bad singular end at {points}: phi and psi take the same value with equal "
            "multiplicity, so the total curvature integral does not converge absolutely"
        )


def total_curvature_exact(data: WeierstrassData, ends: Optional[List[EndReport]] = None) -> ExactCurvature:
    """
    Exact ∫K from degrees and end indices, evaluated via φ and via ψ

    Raises:
        NotAlgebraicError: for data with exponential factors
        BadSingularEndError: when some end is bad singular
    """
    ends = classify_all_ends(data) if ends is None else ends
    _require_exact(data, ends)
    deg_phi, deg_psi = data.phi.degree, data.psi.degree
    sum_10 = sum(e.ind_10 or 0 for e in ends)
    sum_01 = sum(e.ind_01 or 0 for e in ends)
    exact = ExactCurvature(
        total_K=-FOUR_PI * (deg_phi - sum_10),
        total_K_psi=-FOUR_PI * (deg_psi - sum_01),
        deg_phi=deg_phi, deg_psi=deg_psi, sum_ind_10=sum_10, sum_ind_01=sum_01,
    )
    if not exact.agree:
        logger.warning(f"{data.name}: exact totals via phi and psi disagree")
    return exact


# ============= GLOBAL IDENTITIES =============

@dataclass
class IdentityCheck:
    """One identity or inequality with both sides; passed is None when not applicable"""
    name: str
    relation: str
    lhs: Optional[float]
    rhs: Optional[float]
    passed: Optional[bool]
    note: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'relation': self.relation, 'lhs': self.lhs,
                'rhs': self.rhs, 'passed': self.passed, 'note': self.note}


def _close(a: float, b: float, rel: float = 1e-9) -> bool:
    return abs(a - b) <= rel * (1 + abs(b))


def _not_applicable(name: str, relation: str, note: str) -> IdentityCheck:
    return IdentityCheck(name, relation, None, None, None, note)


def quotient_ends(data: WeierstrassData, ends: List[EndReport]) -> List[EndReport]:
    """One end per pair {p, I(p)} under I(z) = -1/conj(z)"""
    chosen: List[EndReport] = []
    for end in ends:
        image: ExtComplex
        if end.point is INF:
            image = 0j
        elif complex(end.point) == 0:
            image = INF
        else:
            image = -1 / np.conj(complex(end.point))
        if not any(same_point(c.point, image) for c in chosen):
            chosen.append(end)
    return chosen


@dataclass
class CurvatureReport:
    """Totals, ends and identity checks for one surface"""
    name: str
    orientable: bool
    ends: List[EndReport]
    exact: Optional[ExactCurvature] = None
    numeric: Optional[ContourTotals] = None
    checks: List[IdentityCheck] = field(default_factory=list)
    quotient_total: Optional[float] = None
    refusal: Optional[str] = None

    @property
    def exact_total_K(self) -> Optional[float]:
        return self.exact.total_K if self.exact is not None else None

    @property
    def numeric_total_K(self) -> Optional[float]:
        return self.numeric.total_K if self.numeric is not None else None

    @property
    def numeric_total_Kperp(self) -> Optional[float]:
        return self.numeric.total_Kperp if self.numeric is not None else None

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def check(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'orientable': self.orientable,
            'exact_total_K': self.exact_total_K,
            'numeric_total_K': self.numeric_total_K,
            'numeric_total_Kperp': self.numeric_total_Kperp,
            'quotient_total': self.quotient_total,
            'refusal': self.refusal,
            'exact': self.exact.to_dict() if self.exact is not None else None,
            'numeric': self.numeric.to_dict() if self.numeric is not None else None,
            'ends': [e.to_dict() for e in self.ends],
            'checks': [c.to_dict() for c in self.checks],
        }


def _orientable_checks(data: WeierstrassData, ends: List[EndReport], exact: ExactCurvature,
                       genus: int) -> List[IdentityCheck]:
    total = exact.total_K
    r = len(ends)
    checks = []
    sum_ind = sum(e.ind or 0 for e in ends)
    checks.append(IdentityCheck('index_sum', '=', float(sum_ind), float(exact.deg_phi - exact.deg_psi),
                                sum_ind == exact.deg_phi - exact.deg_psi,
                                'sum of end indices equals deg phi - deg psi'))
    checks.append(IdentityCheck('exact_phi_psi', '=', exact.total_K, exact.total_K_psi, exact.agree))
    sum_plus = sum(e.ind_plus or 0 for e in ends)
    rhs = -TWO_PI * (exact.deg_phi + exact.deg_psi - sum_plus)
    checks.append(IdentityCheck('index_plus', '=', total, rhs, _close(total, rhs),
                                '-2π(deg phi + deg psi - Σ ind⁺)'))
    if all(e.d_tilde is not None for e in ends):
        sum_dt = sum(e.d_tilde for e in ends)
        rhs = TWO_PI * (2 - 2 * genus - r - sum_dt)
        checks.append(IdentityCheck('jorge_meeks', '=', total, rhs, _close(total, rhs),
                                    '2π(2 - 2g - r - Σ d̃)'))
    else:
        checks.append(_not_applicable('jorge_meeks', '=', 'end multiplicity unavailable'))
    bound = FOUR_PI * (1 - genus - r)
    checks.append(IdentityCheck('chern_osserman', '<=', total, bound, total <= bound + 1e-9 * (1 + abs(bound)),
                                '∫K ≤ 2π(χ(M) - r)'))
    k = -total / FOUR_PI
    checks.append(IdentityCheck('quantization', 'in -4πZ', total, -FOUR_PI * round(k),
                                _close(k, round(k)) and round(k) >= 1, '-∫K = 4πk with k ≥ 1'))
    return checks


def _quotient_checks(data: WeierstrassData, ends: List[EndReport], quotient: float,
                     exact: Optional[ExactCurvature], genus: int) -> List[IdentityCheck]:
    checks = []
    reps = quotient_ends(data, ends)
    r_q = len(reps)
    algebraic = exact is not None
    if algebraic and all(e.d_tilde is not None for e in reps):
        rhs = TWO_PI * (genus + r_q - 1 + sum(e.d_tilde for e in reps))
        checks.append(IdentityCheck('nonorientable_jorge_meeks', '=', quotient, rhs, _close(quotient, rhs),
                                    '-∫K = 2π(g + r - 1 + Σ d̃) over quotient ends'))
        rhs = TWO_PI * (exact.deg_phi - sum(abs(e.ind or 0) for e in reps))
        checks.append(IdentityCheck('nonorientable_index', '=', quotient, rhs, _close(quotient, rhs),
                                    '-∫K = 2π(deg phi - Σ |ind|) over quotient ends'))
    else:
        checks.append(_not_applicable('nonorientable_jorge_meeks', '=', 'algebraic data only'))
        checks.append(_not_applicable('nonorientable_index', '=', 'algebraic data only'))
    if algebraic:
        for name, shift in (('lower_bound_g2', 2), ('lower_bound_g3', 3)):
            bound = TWO_PI * (genus + shift)
            checks.append(IdentityCheck(name, '>=', quotient, bound, quotient >= bound - 1e-9 * (1 + bound),
                                        f'-∫K ≥ 2π(g + {shift})'))
        if any(e.is_singular for e in ends):
            checks.append(_not_applicable('parity', '≡ g-1 mod 2', 'surface has singular ends'))
        else:
            multiple = quotient / TWO_PI
            nearest = round(multiple)
            ok = _close(multiple, nearest) and (nearest - (genus - 1)) % 2 == 0
            checks.append(IdentityCheck('parity', '≡ g-1 mod 2', float(nearest), float(genus - 1), ok,
                                        '-∫K = 2πm with m ≡ g - 1 (mod 2)'))
    else:
        for name, relation in (('lower_bound_g2', '>='), ('lower_bound_g3', '>='), ('parity', '≡ g-1 mod 2')):
            checks.append(_not_applicable(name, relation, 'algebraic data only'))
    return checks


def _numeric_checks(numeric: ContourTotals, exact: Optional[ExactCurvature],
                    essential: bool) -> List[IdentityCheck]:
    checks = []
    if exact is not None:
        tol = 1e-5 * (1 + abs(exact.total_K))
        checks.append(IdentityCheck('numeric_vs_exact', '=', numeric.total_K, exact.total_K,
                                    abs(numeric.total_K - exact.total_K) <= tol))
    else:
        k = -numeric.total_K / FOUR_PI
        checks.append(IdentityCheck('quantization', 'in -4πZ', numeric.total_K, -FOUR_PI * round(k),
                                    abs(k - round(k)) <= 1e-3 and round(k) >= 1,
                                    'numeric total of non-algebraic data'))
    kperp_tol = 1e-5 if essential else 1e-7
    checks.append(IdentityCheck('normal_curvature_zero', '=', numeric.total_Kperp, 0.0,
                                abs(numeric.total_Kperp) <= kperp_tol))
    form_tol = 1e-3 if essential else 1e-6
    checks.append(IdentityCheck('boundary_forms_agree', '=', numeric.total_K, numeric.psi_total_K,
                                numeric.form_difference <= form_tol))
    return checks


def global_identity_report(data: WeierstrassData, annuli: Optional[AnnulusSpec] = None,
                           numeric: bool = True) -> CurvatureReport:
    """
    Exact and numeric totals with every applicable global identity

    Orientable data get the index-sum, Jorge-Meeks, Chern-Osserman and
    quantization checks. Data with the involution I(z) = -1/conj(z) are
    treated as double covers: the quotient carries half the total, and the
    non-orientable Jorge-Meeks form, the 2π(g+2) and 2π(g+3) lower bounds and
    the parity rule are checked on the quotient. A bad singular end makes the
    exact total refuse; the report records the refusal as a failed check.

    Args:
        data: Weierstrass data
        annuli: Contour schedules for the numeric totals
        numeric: Whether to run the contour integrals

    Returns:
        CurvatureReport
    """
    topology = surface_topology(data)
    genus = topology.genus
    ends = classify_all_ends(data)
    report = CurvatureReport(name=data.name, orientable=topology.orientable, ends=ends)
    essential = not data.is_algebraic
    bad = any(e.kind == 'bad_singular' for e in ends)

    if not essential:
        try:
            report.exact = total_curvature_exact(data, ends)
        except BadSingularEndError as exc:
            report.refusal = str(exc)
            report.checks.append(IdentityCheck('exact_total', '=', None, None, False, str(exc)))
    if report.exact is not None:
        report.checks.extend(_orientable_checks(data, ends, report.exact, genus))

    if numeric and not bad:
        try:
            report.numeric = total_curvature_contour(data, annuli)
        except (ContourError, ConvergenceError) as exc:
            logger.error(f"{data.name}: contour totals failed: {exc}")
            report.checks.append(IdentityCheck('numeric_total', '=', None, None, False, str(exc)))
        if report.numeric is not None:
            report.checks.extend(_numeric_checks(report.numeric, report.exact, essential))

    if not topology.orientable:
        cover_total = report.exact_total_K if report.exact is not None else report.numeric_total_K
        if cover_total is not None:
            report.quotient_total = -cover_total / 2
            report.checks.extend(_quotient_checks(data, ends, report.quotient_total, report.exact, genus))
    return report


if __name__ == "__main__":
    from src.gallery import make_example

    print("=" * 60)
    print("TOTAL CURVATURE DEMO")
    print("=" * 60)
    for family in ('catenoid', 'two_singular', 'meeks'):
        example = make_example(family)
        report = global_identity_report(example.data)
        print(f"\n[{family}] exact={report.exact_total_K / math.pi:.6f}π "
              f"numeric={report.numeric_total_K / math.pi:.8f}π")
        for check in report.checks:
            print(f"  {check.name:<28} {check.passed}")
