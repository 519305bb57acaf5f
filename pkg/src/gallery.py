"""
Gallery of stationary surfaces with known Weierstrass data

Each family has a constructor, a validity predicate on its parameters and
the ground truth a correct analysis must reproduce: total curvature, end
data and whether the surface is regular. Family names and parameter names
double as the vocabulary of the `gallery` CLI command.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.complexkit import INF, MeroExpr, same_point
from src.weierstrass import WeierstrassData, encode_point, make_data

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

PI = math.pi
_PARAM_TOL = 1e-12


class GalleryParameterError(ValueError):
    """Parameters outside the range where the family is a complete stationary surface"""


@dataclass
class ExampleSpec:
    """
    A constructed example with its expected behaviour

    expected_total_K is ∫K dM over the (orientable cover of the) surface;
    expected_quotient_total is -∫K dM over the non-orientable quotient when
    the data carry the involution.
    """
    family: str
    params: Dict[str, Any]
    data: WeierstrassData
    expected_total_K: Optional[float]
    expected_quotient_total: Optional[float] = None
    exact_available: bool = True
    expected_regular: bool = True
    expected_admissible: bool = True
    expected_ends: List[Dict[str, Any]] = field(default_factory=list)
    note: str = ''

    @property
    def orientable(self) -> bool:
        return not self.data.has_involution

    @property
    def punctures(self) -> List[Any]:
        return [encode_point(p) for p in self.data.punctures]

    def expected_end(self, point) -> Dict[str, Any]:
        for end in self.expected_ends:
            target = INF if end['point'] == 'inf' else complex(*end['point'])
            if same_point(target, point):
                return end
        raise KeyError(point)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'params': {k: _encode_param(v) for k, v in self.params.items()},
            'punctures': self.punctures,
            'orientable': self.orientable,
            'expected_total_K': self.expected_total_K,
            'expected_quotient_total': self.expected_quotient_total,
            'exact_available': self.exact_available,
            'expected_regular': self.expected_regular,
            'expected_admissible': self.expected_admissible,
            'expected_ends': self.expected_ends,
            'note': self.note,
        }


def _encode_param(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _end(point, kind: str, d: Optional[int], ind_plus: Optional[int], d_tilde: Optional[int]) -> Dict[str, Any]:
    return {'point': encode_point(point), 'kind': kind, 'd': d, 'ind_plus': ind_plus, 'd_tilde': d_tilde}


# ============= PARAMETER COERCION =============

def _as_complex(family: str, name: str, value: Any) -> complex:
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise GalleryParameterError(f"{family}: parameter {name} must be a number, got {value!r}")


def _as_real(family: str, name: str, value: Any) -> float:
    z = _as_complex(family, name, value)
    if abs(z.imag) > _PARAM_TOL:
        raise GalleryParameterError(f"{family}: parameter {name} must be real, got {value!r}")
    return z.real


def _as_int(family: str, name: str, value: Any) -> int:
    x = _as_real(family, name, value)
    if abs(x - round(x)) > _PARAM_TOL:
        raise GalleryParameterError(f"{family}: parameter {name} must be an integer, got {value!r}")
    return int(round(x))


def _shift(coeffs: List[complex], k: int) -> List[complex]:
    """Coefficients of z^k·p(z)"""
    return [0j] * k + [complex(c) for c in coeffs]


def _poly(coeffs: Dict[int, complex]) -> List[complex]:
    """Ascending coefficient list from {power: coefficient}"""
    out = [0j] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] += c
    return out


# ============= FAMILIES =============

def _enneper(family: str, shift: float, c: Any, s: Any, validate: bool) -> ExampleSpec:
    c = _as_complex(family, 'c', c)
    s = _as_complex(family, 's', s)
    if validate:
        if s == 0:
            raise GalleryParameterError(f"{family}: s must be nonzero")
        if shift == 0 and (c == 0 or (abs(c.imag) <= _PARAM_TOL and c.real > 0)):
            raise GalleryParameterError(
                f"{family}: c must not be zero or a positive real number (got c={c})")
        if shift != 0 and not (c.real - c.imag ** 2 + 0.25 < 0):
            raise GalleryParameterError(
                f"{family}: c must satisfy c1 - c2^2 + 1/4 < 0 (got c={c})")
    data = make_data(
        MeroExpr.from_coeffs([shift, 1.0]),
        MeroExpr.from_coeffs([c], [0, 1.0]),
        MeroExpr.from_coeffs([0, s]),
        [INF],
        name=family,
    )
    return ExampleSpec(
        family=family, params={'c': c, 's': s}, data=data,
        expected_total_K=-4 * PI,
        expected_ends=[_end(INF, 'regular', 3, 0, 3)],
    )


def enneper1(c: Any = -1.0, s: Any = 1.0, validate: bool = True) -> ExampleSpec:
    """Generalized Enneper surface: φ = z, ψ = c/z, dh = s·z dz on ℂ"""
    return _enneper('enneper1', 0.0, c, s, validate)


def enneper2(c: Any = complex(-1.0, 0.5), s: Any = 1.0, validate: bool = True) -> ExampleSpec:
    """Enneper variant φ = z + 1, ψ = c/z, dh = s·z dz; regular iff c1 - c2² + 1/4 < 0"""
    return _enneper('enneper2', 1.0, c, s, validate)


def catenoid(t: Any = 0.3, s: Any = 1.0, validate: bool = True) -> ExampleSpec:
    """
    Generalized catenoid: φ = z + t, ψ = -1/(z - t), dh = s(z - t)/z² dz on ℂ \\ {0}

    t = 0 gives the classical catenoid in a spacelike hyperplane.
    """
    t = _as_real('catenoid', 't', t)
    s = _as_real('catenoid', 's', s)
    if validate:
        if not -1 < t < 1:
            raise GalleryParameterError(f"catenoid: t must satisfy -1 < t < 1 (got t={t})")
        if s == 0:
            raise GalleryParameterError("catenoid: s must be a nonzero real number")
    data = make_data(
        MeroExpr.from_coeffs([t, 1.0]),
        MeroExpr.from_coeffs([-1.0], [-t, 1.0]),
        MeroExpr.from_coeffs([-t * s, s], [0, 0, 1.0]),
        [0j, INF],
        name='catenoid',
    )
    return ExampleSpec(
        family='catenoid', params={'t': t, 's': s}, data=data,
        expected_total_K=-4 * PI,
        expected_ends=[_end(0j, 'regular', 1, 0, 1), _end(INF, 'regular', 1, 0, 1)],
    )


def case5_data(m: Any, a: Any, b: Any, rho: Any, validate: bool = True) -> WeierstrassData:
    """
    φ = z^m(z - a), ψ = z^{m+1}/(z - b), dh = ρ(z - b)/z^{m+2} dz on ℂ \\ {0}

    The period conditions force a + b = -conj(ρ)/ρ.
    """
    m = _as_int('case5', 'm', m)
    a = _as_complex('case5', 'a', a)
    b = _as_complex('case5', 'b', b)
    rho = _as_complex('case5', 'rho', rho)
    if m < 1:
        raise GalleryParameterError(f"case5: m must be a positive integer (got m={m})")
    if rho == 0:
        raise GalleryParameterError("case5: rho must be nonzero")
    if validate:
        if a == 0 or b == 0:
            raise GalleryParameterError("case5: a and b must be nonzero")
        target = -np.conj(rho) / rho
        if abs(a + b - target) > 1e-10:
            raise GalleryParameterError(
                f"case5: a + b must equal -conj(rho)/rho = {target:.6g} (got a + b = {a + b:.6g})")
    return make_data(
        MeroExpr.from_coeffs(_poly({m: -a, m + 1: 1.0})),
        MeroExpr.from_coeffs(_poly({m + 1: 1.0}), [-b, 1.0]),
        MeroExpr.from_coeffs([-rho * b, rho], _poly({m + 2: 1.0})),
        [0j, INF],
        name='case5',
    )


def case5(m: Any = 1, a: Any = -0.5, b: Any = -0.5, rho: Any = 1.0, validate: bool = True) -> ExampleSpec:
    """Case-5 family; its totals are those of a complete surface but mixed solutions always exist"""
    data = case5_data(m, a, b, rho, validate=validate)
    m = _as_int('case5', 'm', m)
    return ExampleSpec(
        family='case5',
        params={'m': m, 'a': complex(a), 'b': complex(b), 'rho': complex(rho)},
        data=data,
        expected_total_K=-4 * PI,
        expected_regular=False,
        expected_ends=[_end(0j, 'good_singular', m + 1, m, 1), _end(INF, 'good_singular', m + 1, m, 1)],
        note='phi = conj(psi) has solutions in the domain, so the data do not define a regular surface',
    )


def two_singular(a: Any = -2.0, validate: bool = True) -> ExampleSpec:
    """
    Two good singular ends: φ = w²(w² - a), ψ = w⁴/(w² - a), dh = (w² - a)/w⁴ dw

    Regular for real a with -a > 1; ∫K = -8π.
    """
    a = _as_real('two_singular', 'a', a)
    if validate and not -a > 1:
        raise GalleryParameterError(f"two_singular: a must be real with -a > 1 (got a={a})")
    data = make_data(
        MeroExpr.from_coeffs([0, 0, -a, 0, 1.0]),
        MeroExpr.from_coeffs([0, 0, 0, 0, 1.0], [-a, 0, 1.0]),
        MeroExpr.from_coeffs([-a, 0, 1.0], [0, 0, 0, 0, 1.0]),
        [0j, INF],
        name='two_singular',
    )
    return ExampleSpec(
        family='two_singular', params={'a': a}, data=data,
        expected_total_K=-8 * PI,
        expected_ends=[_end(0j, 'good_singular', 3, 2, 1), _end(INF, 'good_singular', 5, 2, 3)],
    )


def meeks(m: Any = 1, lam: Any = cmath.exp(1j * PI / 3), validate: bool = True) -> ExampleSpec:
    """
    Stationary Meeks Möbius strip, given by its orientable double cover

    φ = (z - λ)/(z - λ̄)·z^{2m}, ψ = (1 + λ̄z)/(1 + λz)·z^{-2m},
    dh = i(z - λ̄)(1 + λz)/z² dz, invariant under I(z) = -1/conj(z).
    """
    m = _as_int('meeks', 'm', m)
    lam = _as_complex('meeks', 'lam', lam)
    if validate:
        if m < 1:
            raise GalleryParameterError(f"meeks: m must be a positive integer (got m={m})")
        if abs(abs(lam) - 1) > 1e-12:
            raise GalleryParameterError(f"meeks: lam must satisfy |lam| = 1 (got |lam|={abs(lam):.12g})")
        if abs(lam - 1) <= 1e-12 or abs(lam + 1) <= 1e-12:
            raise GalleryParameterError("meeks: lam must not be 1 or -1")
    lam_bar = complex(np.conj(lam))
    # i(z - λ̄)(1 + λz) = i(-λ̄ + (1 - |λ|²)z + λz²)
    dh_num = [-1j * lam_bar, 1j * (1 - lam * lam_bar), 1j * lam]
    data = make_data(
        MeroExpr.from_coeffs(_shift([-lam, 1.0], 2 * m), [-lam_bar, 1.0]),
        MeroExpr.from_coeffs([1.0, lam_bar], _shift([1.0, lam], 2 * m)),
        MeroExpr.from_coeffs(dh_num, [0, 0, 1.0]),
        [0j, INF],
        has_involution=True,
        name='meeks',
    )
    d = 2 * m + 1
    return ExampleSpec(
        family='meeks', params={'m': m, 'lam': lam}, data=data,
        expected_total_K=-4 * d * PI,
        expected_quotient_total=2 * d * PI,
        expected_ends=[_end(0j, 'regular', d, 0, d), _end(INF, 'regular', d, 0, d)],
    )


def essential(k: Any = 2, a: Any = 0.5, validate: bool = True) -> ExampleSpec:
    """M_{k,a}: φ = z^k e^{az}, ψ = -e^{az}/z^k, dh = e^{-az} dz on ℂ \\ {0}; ∫K = -4πk"""
    k = _as_int('essential', 'k', k)
    a = _as_real('essential', 'a', a)
    if validate:
        if k < 2:
            raise GalleryParameterError(f"essential: k must be an integer >= 2 (got k={k})")
        if not 0 < a < PI / 2:
            raise GalleryParameterError(f"essential: a must satisfy 0 < a < pi/2 (got a={a})")
    data = make_data(
        MeroExpr.from_coeffs(_poly({k: 1.0}), exp_num=[0, a]),
        MeroExpr.from_coeffs([-1.0], _poly({k: 1.0}), exp_num=[0, a]),
        MeroExpr.from_coeffs([1.0], exp_num=[0, -a]),
        [0j, INF],
        name='essential',
    )
    return ExampleSpec(
        family='essential', params={'k': k, 'a': a}, data=data,
        expected_total_K=-4 * k * PI,
        exact_available=False,
        expected_ends=[_end(0j, 'regular', k - 1, 0, k - 1), _end(INF, 'essential', None, None, None)],
    )


def essential_mobius(p: Any = 2, validate: bool = True) -> ExampleSpec:
    """
    Möbius strip with essential ends: with E = (z - 1/z)/2,
    φ = z^{2p-1} e^E, ψ = -e^E/z^{2p-1}, dh = d(e^{-E}).

    p = 1 is accepted only with validate=False: the horizontal period then fails.
    """
    p = _as_int('essential_mobius', 'p', p)
    if p < 1 or (validate and p < 2):
        raise GalleryParameterError(f"essential_mobius: p must be an integer >= 2 (got p={p})")
    power = 2 * p - 1
    exponent = {'exp_num': [-0.5, 0, 0.5], 'exp_den': [0, 1.0]}
    data = make_data(
        MeroExpr.from_coeffs(_poly({power: 1.0}), **exponent),
        MeroExpr.from_coeffs([-1.0], _poly({power: 1.0}), **exponent),
        MeroExpr.from_coeffs([-0.5, 0, -0.5], [0, 0, 1.0], exp_num=[0.5, 0, -0.5], exp_den=[0, 1.0]),
        [0j, INF],
        has_involution=True,
        name='essential_mobius',
    )
    return ExampleSpec(
        family='essential_mobius', params={'p': p}, data=data,
        expected_total_K=-4 * power * PI,
        expected_quotient_total=2 * power * PI,
        exact_available=False,
        expected_admissible=False,
        expected_ends=[_end(0j, 'essential', None, None, None), _end(INF, 'essential', None, None, None)],
        note='dh vanishes at z = ±i where phi and psi are finite: two branch points of the immersion',
    )


@dataclass(frozen=True)
class Family:
    builder: Callable[..., ExampleSpec]
    defaults: Dict[str, Any]
    description: str


FAMILIES: Dict[str, Family] = {
    'enneper1': Family(enneper1, {'c': -1.0, 's': 1.0}, 'generalized Enneper, phi = z'),
    'enneper2': Family(enneper2, {'c': complex(-1.0, 0.5), 's': 1.0}, 'generalized Enneper, phi = z + 1'),
    'catenoid': Family(catenoid, {'t': 0.3, 's': 1.0}, 'generalized catenoid'),
    'case5': Family(case5, {'m': 1, 'a': -0.5, 'b': -0.5, 'rho': 1.0}, 'Case-5 family (never regular)'),
    'two_singular': Family(two_singular, {'a': -2.0}, 'two good singular ends, total -8pi'),
    'meeks': Family(meeks, {'m': 1, 'lam': cmath.exp(1j * PI / 3)}, 'stationary Meeks Mobius strip'),
    'essential': Family(essential, {'k': 2, 'a': 0.5}, 'essential ends M_{k,a}'),
    'essential_mobius': Family(essential_mobius, {'p': 2}, 'Mobius strip with essential ends'),
}


def make_example(family: str, validate: bool = True, **params) -> ExampleSpec:
    """
    Build a gallery example; missing parameters take the family defaults

    Args:
        family: One of FAMILIES
        validate: Enforce the family's parameter predicate
        **params: Family parameters

    Returns:
        ExampleSpec with the assembled data and expected totals

    Raises:
        GalleryParameterError: unknown family or parameter, or a violated predicate

    Example:
        >>> make_example('catenoid', t=0.0).expected_total_K / math.pi
        -4.0
    """
    if family not in FAMILIES:
        raise GalleryParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    entry = FAMILIES[family]
    unknown = sorted(set(params) - set(entry.defaults))
    if unknown:
        raise GalleryParameterError(
            f"{family}: unknown parameter(s) {', '.join(unknown)}; expected {', '.join(entry.defaults)}")
    merged = {**entry.defaults, **params}
    try:
        example = entry.builder(validate=validate, **merged)
    except GalleryParameterError as exc:
        logger.error(str(exc))
        raise
    logger.info(f"Built {family} example with {example.to_dict()['params']}")
    return example


def default_examples() -> List[ExampleSpec]:
    """Every family at its default parameters"""
    return [make_example(name) for name in FAMILIES]


def meeks_cross_ratio(lam: complex) -> complex:
    """Cross ratio of (0, ∞; λ, λ̄), which is λ/λ̄"""
    lam = complex(lam)
    return lam / np.conj(lam)


def meeks_congruent(lam1: complex, lam2: complex, tol: float = 1e-12) -> bool:
    """
    Whether two Meeks strips with the same m are congruent

    The cross ratio is invariant up to conjugation: λ → -λ is the
    reparametrization z → -z and λ → λ̄ a reflection.
    """
    c1, c2 = meeks_cross_ratio(lam1), meeks_cross_ratio(lam2)
    return abs(c1 - c2) <= tol or abs(c1 - np.conj(c2)) <= tol


if __name__ == "__main__":
    print("=" * 60)
    print("GALLERY")
    print("=" * 60)
    for name, entry in FAMILIES.items():
        example = make_example(name)
        total = example.expected_total_K / PI
        print(f"{name:<18} {entry.description:<36} expected ∫K = {total:g}π")
    print(f"\nmeeks_congruent(e^(iπ/3), e^(-iπ/3)) = "
          f"{meeks_congruent(cmath.exp(1j * PI / 3), cmath.exp(-1j * PI / 3))}")
