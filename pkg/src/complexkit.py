"""
Complex analysis toolkit on the Riemann sphere

Polynomials, meromorphic expressions R(z)·exp(E(z)) with R, E rational,
divisors, residues and periodic contour integrals. Everything downstream
(Weierstrass data, curvature, immersion) is built on these types.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.config import QUADRATURE, TOLERANCES

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    """Simultaneous iteration did not converge; `partial` holds the last iterates"""

    def __init__(self, message: str, partial: Sequence[complex]):
        super().__init__(message)
        self.partial = list(partial)


class EssentialSingularityError(ValueError):
    """A value or order was requested at an essential singularity"""


class PoleEvaluationError(ValueError):
    """A finite value was requested at a pole"""


class ContourError(ValueError):
    """A contour passes through (or too close to) a singular point"""


class ConvergenceError(RuntimeError):
    """Node doubling did not reach the requested tolerance"""

    def __init__(self, message: str, estimates: Tuple[complex, complex]):
        super().__init__(message)
        self.estimates = estimates


class _Infinity:
    """The point at infinity of the Riemann sphere (singleton)"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return 'INF'

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ExtComplex = Union[complex, _Infinity]


def is_inf(point) -> bool:
    return point is INF


def point_key(point: ExtComplex) -> Tuple[int, float, float]:
    """Deterministic sort key: finite points by (re, im), infinity last"""
    if point is INF:
        return (1, 0.0, 0.0)
    z = complex(point)
    return (0, round(z.real, 9), round(z.imag, 9))


def same_point(p: ExtComplex, q: ExtComplex, tol: Optional[float] = None) -> bool:
    if p is INF or q is INF:
        return p is q
    tol = TOLERANCES.point_match if tol is None else tol
    return abs(complex(p) - complex(q)) <= tol * max(1.0, abs(complex(p)))


def _snap(z: complex) -> complex:
    scale = max(1.0, abs(z))
    re = 0.0 if abs(z.real) <= 1e-14 * scale else z.real
    im = 0.0 if abs(z.imag) <= 1e-14 * scale else z.imag
    return complex(re, im)


# ============= POLYNOMIALS =============

def _trim(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.size == 0:
        return np.zeros(1, dtype=complex)
    norm = np.max(np.abs(coeffs))
    if norm == 0 or not np.isfinite(norm):
        return np.zeros(1, dtype=complex) if norm == 0 else coeffs
    keep = np.nonzero(np.abs(coeffs) > TOLERANCES.coefficient_trim * norm)[0]
    return coeffs[: keep[-1] + 1]


@dataclass(frozen=True)
class CPoly:
    """Complex polynomial with ascending coefficients, trailing zeros trimmed"""
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        arr = _trim(np.atleast_1d(np.asarray(self.coeffs, dtype=complex)))
        object.__setattr__(self, 'coeffs', tuple(complex(c) for c in arr))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> 'CPoly':
        if len(roots) == 0:
            return cls((leading,))
        return cls(tuple(leading * npoly.polyfromroots(np.asarray(roots, dtype=complex))))

    @classmethod
    def monomial(cls, k: int, coefficient: complex = 1.0) -> 'CPoly':
        return cls(tuple([0j] * k + [coefficient]))

    @property
    def arr(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, z):
        return npoly.polyval(z, self.arr)

    def derivative(self) -> 'CPoly':
        return CPoly(tuple(npoly.polyder(self.arr)))

    def __add__(self, other) -> 'CPoly':
        other = other if isinstance(other, CPoly) else CPoly((complex(other),))
        return CPoly(tuple(npoly.polyadd(self.arr, other.arr)))

    def __sub__(self, other) -> 'CPoly':
        other = other if isinstance(other, CPoly) else CPoly((complex(other),))
        return CPoly(tuple(npoly.polysub(self.arr, other.arr)))

    def __mul__(self, other) -> 'CPoly':
        if isinstance(other, CPoly):
            return CPoly(tuple(npoly.polymul(self.arr, other.arr)))
        return CPoly(tuple(self.arr * complex(other)))

    __rmul__ = __mul__

    def __neg__(self) -> 'CPoly':
        return CPoly(tuple(-self.arr))

    def quotient(self, divisor: 'CPoly') -> 'CPoly':
        """Exact-division quotient; coefficients at rounding level are zeroed"""
        quo, _ = npoly.polydiv(self.arr, divisor.arr)
        norm = max(np.max(np.abs(self.arr)), np.max(np.abs(quo)))
        quo = np.where(np.abs(quo) <= TOLERANCES.coefficient_trim * norm, 0, quo)
        return CPoly(tuple(quo))

    def reversed(self, n: Optional[int] = None) -> 'CPoly':
        """w^n · p(1/w), with n defaulting to the degree"""
        n = self.degree if n is None else n
        padded = np.zeros(n + 1, dtype=complex)
        padded[: len(self.coeffs)] = self.arr
        return CPoly(tuple(padded[::-1]))

    def taylor(self, p: complex, n: int) -> np.ndarray:
        """First n Taylor coefficients of p(p0 + u) in u, via repeated synthetic division"""
        out = np.zeros(n, dtype=complex)
        c = self.arr
        divisor = np.array([-complex(p), 1.0], dtype=complex)
        for j in range(min(n, len(c))):
            if len(c) == 1:
                out[j] = c[0]
                break
            quo, rem = npoly.polydiv(c, divisor)
            out[j] = rem[0]
            c = quo
        return out

    def _taylor_scale(self, p: complex, n: int) -> np.ndarray:
        absolute = CPoly(tuple(np.abs(self.arr)))
        return np.abs(absolute.taylor(abs(complex(p)), n))

    def order_at(self, p: complex, tol: Optional[float] = None) -> int:
        """Multiplicity of p as a root (0 when p is not a root)"""
        if self.is_zero:
            raise ValueError("order of the zero polynomial is undefined")
        tol = TOLERANCES.order_detection if tol is None else tol
        n = len(self.coeffs)
        coeffs = self.taylor(p, n)
        # measured against the whole expansion, not coefficient by coefficient
        scale = max(float(np.max(self._taylor_scale(p, n))), _EPS)
        order = 0
        for c in coeffs:
            if abs(c) > tol * scale:
                break
            order += 1
        return min(order, self.degree)

    def conj_coeffs(self) -> 'CPoly':
        return CPoly(tuple(np.conj(self.arr)))


ONE = CPoly((1.0,))
ZERO = CPoly((0.0,))


def _aberth(coeffs: np.ndarray, max_iter: int = 200) -> np.ndarray:
    """Aberth simultaneous iteration seeded with companion-matrix eigenvalues"""
    n = len(coeffs) - 1
    z = np.asarray(npoly.polyroots(coeffs), dtype=complex)
    # coincident seeds break the Aberth correction sum
    for i in range(n):
        for j in range(i):
            if z[i] == z[j]:
                z[i] += 1e-10 * (1 + abs(z[i])) * np.exp(2j * np.pi * (i + 1) / (n + 1))
    dcoeffs = npoly.polyder(coeffs)
    abs_coeffs = np.abs(coeffs)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        pz = npoly.polyval(z, coeffs)
        bound = 8 * _EPS * npoly.polyval(np.abs(z), abs_coeffs)
        active &= np.abs(pz) > bound
        if not active.any():
            return z
        with np.errstate(divide='ignore', invalid='ignore'):
            dpz = npoly.polyval(z, dcoeffs)
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            sums = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * sums)
        step = np.where(np.isfinite(step), step, 1e-12 * (1 + np.abs(z)))
        z = np.where(active, z - step, z)
        active &= np.abs(step) > 1e-15 * np.maximum(1.0, np.abs(z))
        if not active.any():
            return z
    raise RootFindingError(
        f"Aberth iteration did not converge for degree {n} after {max_iter} steps", z
    )


def _derivatives_vanish(coeffs: np.ndarray, z: complex, k: int) -> bool:
    c = coeffs
    abs_c = np.abs(coeffs)
    for _ in range(k):
        value = abs(npoly.polyval(z, c))
        scale = npoly.polyval(abs(z), abs_c)
        if value > TOLERANCES.derivative_confirm * max(scale, _EPS):
            return False
        c = npoly.polyder(c)
        abs_c = npoly.polyder(abs_c)
    return True


def _cluster_roots(coeffs: np.ndarray, approx: np.ndarray) -> List[Tuple[complex, int]]:
    groups: List[List[complex]] = []
    for r in sorted(approx, key=abs):
        for group in groups:
            center = np.mean(group)
            if abs(r - center) <= TOLERANCES.cluster_radius * max(1.0, abs(center)):
                group.append(r)
                break
        else:
            groups.append([r])

    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                ci, cj = np.mean(groups[i]), np.mean(groups[j])
                if abs(ci - cj) > TOLERANCES.cluster_merge_radius * max(1.0, abs(ci)):
                    continue
                candidate = groups[i] + groups[j]
                if _derivatives_vanish(coeffs, complex(np.mean(candidate)), len(candidate)):
                    groups[i] = candidate
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    return [(complex(np.mean(g)), len(g)) for g in groups]


def poly_roots(p: CPoly) -> List[Tuple[complex, int]]:
    """
    Roots of a polynomial with multiplicities

    Exact zeros at the origin are split off first; the rest come from
    Aberth iteration followed by clustering (near-coincident roots are merged
    when the derivatives up to the cluster size vanish at the centroid).

    Args:
        p: Polynomial to factor

    Returns:
        List of (root, multiplicity) sorted by (re, im); empty for constants

    Example:
        >>> poly_roots(CPoly((0.25, 1, 1)))
        [((-0.5+0j), 2)]
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has no finite root multiset")
    if p.degree <= 0:
        return []
    coeffs = p.arr
    roots: List[Tuple[complex, int]] = []
    k0 = 0
    while coeffs[k0] == 0:
        k0 += 1
    if k0:
        roots.append((0j, k0))
    rest = coeffs[k0:]
    if len(rest) > 1:
        approx = _aberth(rest)
        roots.extend(_cluster_roots(rest, approx))
    roots = [(_snap(r), m) for r, m in roots]
    return sorted(roots, key=lambda rm: point_key(rm[0]))


# ============= MEROMORPHIC EXPRESSIONS =============

def _common_roots(a: CPoly, b: CPoly) -> List[Tuple[complex, int]]:
    if a.degree <= 0 or b.degree <= 0:
        return []
    roots_b = poly_roots(b)
    common = []
    for rb, kb in roots_b:
        ka = a.order_at(rb, tol=1e-8)
        if ka:
            common.append((rb, min(ka, kb)))
    return common


def _reduce(num: CPoly, den: CPoly) -> Tuple[CPoly, CPoly]:
    if den.is_zero:
        raise ZeroDivisionError("denominator polynomial is identically zero")
    if num.is_zero:
        return ZERO, ONE
    for root, k in _common_roots(num, den):
        factor = CPoly.from_roots([root] * k)
        num = num.quotient(factor)
        den = den.quotient(factor)
    lead = den.leading
    if lead != 1:
        num = num * (1.0 / lead)
        den = den * (1.0 / lead)
    return num, den


def _eval_rational(num: CPoly, den: CPoly, z):
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        return num(z) / den(z)


@dataclass(frozen=True)
class MeroExpr:
    """
    Meromorphic expression R(z)·exp(E(z)) with R = num/den and E = exp_num/exp_den

    Both rational parts are kept reduced (no common roots, monic denominators).
    A zero exponent marks an algebraic expression.
    """
    num: CPoly
    den: CPoly = ONE
    exp_num: CPoly = ZERO
    exp_den: CPoly = ONE

    def __post_init__(self):
        num, den = _reduce(self.num, self.den)
        exp_num, exp_den = _reduce(self.exp_num, self.exp_den)
        if not exp_num.is_zero and exp_num.degree == 0 and exp_den.degree == 0:
            num = num * np.exp(exp_num.coeffs[0] / exp_den.coeffs[0])
            exp_num, exp_den = ZERO, ONE
        object.__setattr__(self, 'num', num)
        object.__setattr__(self, 'den', den)
        object.__setattr__(self, 'exp_num', exp_num)
        object.__setattr__(self, 'exp_den', exp_den)

    # ----- constructors -----

    @classmethod
    def from_coeffs(cls, num: Sequence[complex], den: Sequence[complex] = (1.0,),
                    exp_num: Sequence[complex] = (0.0,),
                    exp_den: Sequence[complex] = (1.0,)) -> 'MeroExpr':
        return cls(CPoly(tuple(num)), CPoly(tuple(den)), CPoly(tuple(exp_num)), CPoly(tuple(exp_den)))

    @classmethod
    def constant(cls, c: complex) -> 'MeroExpr':
        return cls(CPoly((complex(c),)))

    @classmethod
    def identity(cls) -> 'MeroExpr':
        return cls(CPoly((0.0, 1.0)))

    @property
    def rat(self) -> Tuple[CPoly, CPoly]:
        return (self.num, self.den)

    @property
    def expo(self) -> Tuple[CPoly, CPoly]:
        return (self.exp_num, self.exp_den)

    @property
    def is_algebraic(self) -> bool:
        return self.exp_num.is_zero

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.is_algebraic and self.num.degree <= 0 and self.den.degree == 0

    @property
    def degree(self) -> int:
        """Mapping degree of the rational function (algebraic expressions only)"""
        if not self.is_algebraic:
            raise EssentialSingularityError("an expression with an exponential factor has no finite degree")
        return max(self.num.degree, self.den.degree)

    def _exponent_with(self, other: 'MeroExpr', sign: int) -> Tuple[CPoly, CPoly]:
        if other.is_algebraic:
            return self.exp_num, self.exp_den
        if self.is_algebraic:
            return (other.exp_num if sign > 0 else -other.exp_num), other.exp_den
        if sign > 0:
            num = self.exp_num * other.exp_den + other.exp_num * self.exp_den
        else:
            num = self.exp_num * other.exp_den - other.exp_num * self.exp_den
        return num, self.exp_den * other.exp_den

    def _same_exponent(self, other: 'MeroExpr') -> bool:
        if self.is_algebraic or other.is_algebraic:
            return self.is_algebraic and other.is_algebraic
        diff, _ = self._exponent_with(other, -1)
        return diff.is_zero

    # ----- arithmetic -----

    @staticmethod
    def _coerce(other) -> 'MeroExpr':
        return other if isinstance(other, MeroExpr) else MeroExpr.constant(other)

    def __mul__(self, other) -> 'MeroExpr':
        other = self._coerce(other)
        en, ed = self._exponent_with(other, +1)
        return MeroExpr(self.num * other.num, self.den * other.den, en, ed)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'MeroExpr':
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero expression")
        en, ed = self._exponent_with(other, -1)
        return MeroExpr(self.num * other.den, self.den * other.num, en, ed)

    def __rtruediv__(self, other) -> 'MeroExpr':
        return self._coerce(other) / self

    def __add__(self, other) -> 'MeroExpr':
        other = self._coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if not self._same_exponent(other):
            raise ValueError("sum of expressions with different exponential parts is not representable")
        num = self.num * other.den + other.num * self.den
        return MeroExpr(num, self.den * other.den, self.exp_num, self.exp_den)

    __radd__ = __add__

    def __neg__(self) -> 'MeroExpr':
        return MeroExpr(-self.num, self.den, self.exp_num, self.exp_den)

    def __sub__(self, other) -> 'MeroExpr':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'MeroExpr':
        return self._coerce(other) - self

    def __pow__(self, k: int) -> 'MeroExpr':
        if k < 0:
            return MeroExpr.constant(1.0) / (self ** (-k))
        result = MeroExpr.constant(1.0)
        for _ in range(k):
            result = result * self
        return result

    def mobius(self, a: complex, b: complex, c: complex, d: complex) -> 'MeroExpr':
        """(a·f + b) / (c·f + d) for an algebraic expression"""
        if not self.is_algebraic:
            raise EssentialSingularityError("Möbius moves are only applied to algebraic expressions")
        num = self.num * a + self.den * b
        den = self.num * c + self.den * d
        return MeroExpr(num, den)

    def compose_reciprocal(self) -> 'MeroExpr':
        """The pullback w ↦ f(1/w)"""
        dn, dd = self.num.degree, self.den.degree
        num = self.num.reversed() * CPoly.monomial(max(dd - dn, 0))
        den = self.den.reversed() * CPoly.monomial(max(dn - dd, 0))
        if self.is_algebraic:
            return MeroExpr(num, den)
        en, ed = self.exp_num.degree, self.exp_den.degree
        exp_num = self.exp_num.reversed() * CPoly.monomial(max(ed - en, 0))
        exp_den = self.exp_den.reversed() * CPoly.monomial(max(en - ed, 0))
        return MeroExpr(num, den, exp_num, exp_den)

    # ----- calculus -----

    def derivative(self) -> 'MeroExpr':
        n, d = self.num, self.den
        rat_num = n.derivative() * d - n * d.derivative()
        if self.is_algebraic:
            return MeroExpr(rat_num, d * d)
        en, ed = self.exp_num, self.exp_den
        e_num = en.derivative() * ed - en * ed.derivative()
        e_den = ed * ed
        return MeroExpr(rat_num * e_den + n * d * e_num, d * d * e_den, en, ed)

    def log_derivative(self) -> 'MeroExpr':
        """f'/f, always algebraic"""
        if self.is_zero:
            raise ValueError("log-derivative of the zero expression")
        n, d = self.num, self.den
        rat_num = n.derivative() * d - n * d.derivative()
        if self.is_algebraic:
            return MeroExpr(rat_num, n * d)
        en, ed = self.exp_num, self.exp_den
        e_num = en.derivative() * ed - en * ed.derivative()
        e_den = ed * ed
        return MeroExpr(rat_num * e_den + n * d * e_num, n * d * e_den)

    # ----- evaluation -----

    def __call__(self, z):
        """Vectorized evaluation at finite points (inf/nan at poles)"""
        zz = np.asarray(z, dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            value = _eval_rational(self.num, self.den, zz)
            if not self.is_algebraic:
                value = value * np.exp(_eval_rational(self.exp_num, self.exp_den, zz))
        if np.ndim(value) == 0:
            return complex(value)
        return value

    def exponent_value(self, z):
        if self.is_algebraic:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return _eval_rational(self.exp_num, self.exp_den, np.asarray(z, dtype=complex))

    def log_value(self, z):
        """A branch of log f(z); exp of differences of these is branch independent"""
        zz = np.asarray(z, dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            value = np.log(self.num(zz)) - np.log(self.den(zz))
            if not self.is_algebraic:
                value = value + _eval_rational(self.exp_num, self.exp_den, zz)
        return value

    def series_at(self, p: complex, n: int) -> np.ndarray:
        """First n Taylor coefficients of f(p + u); f must be holomorphic at p"""
        p = complex(p)
        if self.den.order_at(p) > 0 or self.is_essential_at(p):
            raise PoleEvaluationError(f"expression is not holomorphic at {p}")
        series = _series_div(self.num.taylor(p, n), self.den.taylor(p, n), n)
        if not self.is_algebraic:
            exponent = _series_div(self.exp_num.taylor(p, n), self.exp_den.taylor(p, n), n)
            series = _series_mul(series, _series_exp(exponent, n), n)
        return series

    def essential_points(self) -> List[ExtComplex]:
        if self.is_algebraic:
            return []
        points: List[ExtComplex] = [r for r, _ in poly_roots(self.exp_den)]
        if self.exp_num.degree > self.exp_den.degree:
            points.append(INF)
        return points

    def is_essential_at(self, p: ExtComplex) -> bool:
        if self.is_algebraic:
            return False
        if p is INF:
            return self.exp_num.degree > self.exp_den.degree
        return self.exp_den.order_at(complex(p)) > 0

    def order_at(self, p: ExtComplex) -> int:
        """Order of zero (>0) or pole (<0) at p"""
        if self.is_essential_at(p):
            raise EssentialSingularityError(f"{p!r} is an essential singularity")
        if self.is_zero:
            raise ValueError("order of the zero expression is undefined")
        if p is INF:
            return self.den.degree - self.num.degree
        z = complex(p)
        return self.num.order_at(z) - self.den.order_at(z)

    def evaluate(self, p: ExtComplex) -> ExtComplex:
        """Value on the extended plane; INF at poles, pullback under w = 1/z at INF"""
        if self.is_essential_at(p):
            raise EssentialSingularityError(f"cannot evaluate at essential singularity {p!r}")
        if self.is_zero:
            return 0j
        order = self.order_at(p)
        if order < 0:
            return INF
        if order > 0:
            return 0j
        if p is INF:
            value = self.num.leading / self.den.leading
            if not self.is_algebraic and self.exp_num.degree == self.exp_den.degree:
                value *= np.exp(self.exp_num.leading / self.exp_den.leading)
            return _snap(complex(value))
        return complex(self(complex(p)))

    def finite_value(self, p: ExtComplex) -> complex:
        value = self.evaluate(p)
        if value is INF:
            raise PoleEvaluationError(f"expression has a pole at {p!r}")
        return value

    def __repr__(self) -> str:
        text = f"({list(self.num.coeffs)})/({list(self.den.coeffs)})"
        if not self.is_algebraic:
            text += f"·exp(({list(self.exp_num.coeffs)})/({list(self.exp_den.coeffs)}))"
        return f"MeroExpr[{text}]"


def expr_eval(f: MeroExpr, p: ExtComplex) -> ExtComplex:
    """Evaluate f on the extended plane (see MeroExpr.evaluate)"""
    return f.evaluate(p)


def expr_derivative(f: MeroExpr) -> MeroExpr:
    """
    Derivative f' as a reduced expression

    For f = R·exp(E) the result is (R' + R·E')·exp(E), so the exponential
    part is unchanged and f' has the same essential points as f.

    Args:
        f: Expression to differentiate

    Returns:
        f' (algebraic whenever f is)
    """
    return f.derivative()


# ============= DIVISORS =============

@dataclass(frozen=True)
class DivisorEntry:
    point: ExtComplex
    order: int  # >0 zero, <0 pole; for essential entries the pole order of the exponent
    kind: str  # 'zero' | 'pole' | 'essential'


@dataclass(frozen=True)
class Divisor:
    """Zeros, poles and essential singularities of an expression"""
    entries: Tuple[DivisorEntry, ...]

    def zeros(self) -> List[DivisorEntry]:
        return [e for e in self.entries if e.kind == 'zero']

    def poles(self) -> List[DivisorEntry]:
        return [e for e in self.entries if e.kind == 'pole']

    def essentials(self) -> List[DivisorEntry]:
        return [e for e in self.entries if e.kind == 'essential']

    def points(self) -> List[ExtComplex]:
        return [e.point for e in self.entries]

    def order_at(self, point: ExtComplex) -> int:
        for e in self.entries:
            if e.kind != 'essential' and same_point(e.point, point):
                return e.order
        return 0

    def to_dict(self) -> List[dict]:
        return [
            {'point': 'inf' if e.point is INF else [e.point.real, e.point.imag],
             'order': e.order, 'kind': e.kind}
            for e in self.entries
        ]


def divisor_of(f: MeroExpr, include_infinity: bool = True) -> Divisor:
    """
    Divisor of a meromorphic expression

    Essential points come from the exponent's poles; zeros and poles of the
    rational part at those points are absorbed by the essential singularity.
    """
    if f.is_zero:
        raise ValueError("the zero expression has no divisor")
    entries: List[DivisorEntry] = []
    essentials: List[ExtComplex] = []
    if not f.is_algebraic:
        for r, k in poly_roots(f.exp_den):
            essentials.append(r)
            entries.append(DivisorEntry(r, k, 'essential'))
        if f.exp_num.degree > f.exp_den.degree:
            essentials.append(INF)
            if include_infinity:
                entries.append(DivisorEntry(INF, f.exp_num.degree - f.exp_den.degree, 'essential'))

    def absorbed(point: complex) -> bool:
        return any(e is not INF and same_point(e, point) for e in essentials)

    for r, k in poly_roots(f.num):
        if not absorbed(r):
            entries.append(DivisorEntry(r, k, 'zero'))
    for r, k in poly_roots(f.den):
        if not absorbed(r):
            entries.append(DivisorEntry(r, -k, 'pole'))
    if include_infinity and INF not in essentials:
        k = f.den.degree - f.num.degree
        if k > 0:
            entries.append(DivisorEntry(INF, k, 'zero'))
        elif k < 0:
            entries.append(DivisorEntry(INF, k, 'pole'))
    entries.sort(key=lambda e: point_key(e.point))
    return Divisor(tuple(entries))


# ============= SERIES AND RESIDUES =============

def _series_div(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    a = np.concatenate([a, np.zeros(max(0, n - len(a)), dtype=complex)])
    b = np.concatenate([b, np.zeros(max(0, n - len(b)), dtype=complex)])
    for j in range(n):
        acc = a[j] - np.dot(b[1: j + 1], out[j - 1::-1][:j]) if j else a[0]
        out[j] = acc / b[0]
    return out


def _series_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n]


def _series_exp(e: np.ndarray, n: int) -> np.ndarray:
    """Power series of exp(e(u)) from the series e(u)"""
    out = np.zeros(n, dtype=complex)
    out[0] = np.exp(e[0])
    for j in range(1, n):
        k = np.arange(1, j + 1)
        out[j] = np.sum(k * e[k] * out[j - k]) / j
    return out


def _laurent_residue(f: MeroExpr, p: complex) -> complex:
    k = f.den.order_at(p)
    if k == 0:
        return 0j
    numerator = f.num.taylor(p, k)
    shifted_den = f.den.taylor(p, 2 * k)[k:]
    series = _series_div(numerator, shifted_den, k)
    if not f.is_algebraic:
        exponent = _series_div(f.exp_num.taylor(p, k), f.exp_den.taylor(p, k), k)
        series = _series_mul(series, _series_exp(exponent, k), k)
    return complex(series[k - 1])


def contour_integral(func: Callable[[np.ndarray], np.ndarray], center: complex, radius: float,
                     differential: str = 'dz', tol: Optional[float] = None,
                     start_nodes: Optional[int] = None,
                     max_nodes: Optional[int] = None) -> complex:
    """
    Counterclockwise periodic-trapezoid integral over |z - center| = radius

    Nodes double until successive estimates differ by at most
    tol·max(1, |estimate|).

    Args:
        func: Vectorized integrand, complex array in, complex array out
        center: Circle center
        radius: Circle radius
        differential: 'dz' for ∮ f dz, 'dzbar' for ∮ f dz̄
        tol: Doubling tolerance
        start_nodes: Initial node count
        max_nodes: Node cap

    Returns:
        The integral estimate
    """
    tol = QUADRATURE.curvature_tol if tol is None else tol
    n = QUADRATURE.start_nodes if start_nodes is None else start_nodes
    max_nodes = QUADRATURE.max_nodes if max_nodes is None else max_nodes
    previous: Optional[complex] = None
    estimate = 0j
    while n <= max_nodes:
        theta = 2 * np.pi * np.arange(n) / n
        unit = np.exp(1j * theta)
        z = center + radius * unit
        values = np.asarray(func(z), dtype=complex)
        dz = 1j * radius * unit if differential == 'dz' else -1j * radius * np.conj(unit)
        estimate = complex(2 * np.pi / n * np.sum(values * dz))
        if not np.isfinite(estimate):
            raise ContourError(f"integrand is not finite on |z - {center}| = {radius}")
        if previous is not None and abs(estimate - previous) <= tol * max(1.0, abs(estimate)):
            return estimate
        previous = estimate
        n *= 2
    raise ConvergenceError(
        f"trapezoid rule did not converge on |z - {center}| = {radius} with {max_nodes} nodes",
        (previous if previous is not None else estimate, estimate),
    )


def _check_clear(f: MeroExpr, center: complex, radius: float, skip: ExtComplex):
    finite = [r for r, _ in poly_roots(f.den)] + [p for p in f.essential_points() if p is not INF]
    for q in finite:
        if skip is not INF and same_point(q, skip):
            continue
        if abs(abs(q - center) - radius) <= 1e-9 * (1 + radius):
            raise ContourError(f"contour of radius {radius} passes through singular point {q}")
        if skip is INF and abs(q - center) > radius:
            logger.warning(f"contour of radius {radius} around infinity misses {q}")
        elif skip is not INF and abs(q - center) < radius:
            logger.warning(f"contour of radius {radius} around {center} also encloses {q}")


def residue(f: MeroExpr, p: ExtComplex, radius: Optional[float] = None,
            numeric: bool = False) -> complex:
    """
    Residue of the 1-form f(z) dz at p

    Exact Laurent extraction where possible; a numeric circle of the given
    radius otherwise (essential points, or numeric=True). Res at INF is the
    residue of the pulled-back form at w = 0.

    Args:
        f: Coefficient of the 1-form
        p: Finite point or INF
        radius: Circle radius for the numeric fallback
        numeric: Force the numeric path

    Returns:
        The residue
    """
    essential = f.is_essential_at(p)
    if essential or numeric:
        if radius is None:
            raise ContourError(f"numeric residue at {p!r} needs a contour radius")
        tol = QUADRATURE.residue_tol
        if p is INF:
            _check_clear(f, 0j, radius, INF)
            value = contour_integral(f, 0j, radius, tol=tol,
                                     start_nodes=QUADRATURE.residue_start_nodes,
                                     max_nodes=QUADRATURE.residue_max_nodes)
            return -value / (2j * np.pi)
        center = complex(p)
        _check_clear(f, center, radius, center)
        value = contour_integral(f, center, radius, tol=tol,
                                 start_nodes=QUADRATURE.residue_start_nodes,
                                 max_nodes=QUADRATURE.residue_max_nodes)
        return value / (2j * np.pi)
    if f.is_zero:
        return 0j
    if p is INF:
        pulled = f.compose_reciprocal() * MeroExpr(ONE, CPoly.monomial(2))
        return -_laurent_residue(pulled, 0j)
    return _laurent_residue(f, complex(p))


def argument_count(f: MeroExpr, center: complex, radius: float) -> float:
    """(1/2πi)∮ f'/f dz: zeros minus poles inside the circle"""
    log_derivative = f.log_derivative()
    value = contour_integral(log_derivative, center, radius, tol=QUADRATURE.residue_tol,
                             start_nodes=QUADRATURE.residue_start_nodes,
                             max_nodes=QUADRATURE.residue_max_nodes)
    return (value / (2j * np.pi)).real


def format_point(point: ExtComplex) -> str:
    if point is INF:
        return 'inf'
    z = complex(point)
    return f"{z.real:.6g}{z.imag:+.6g}i"


if __name__ == "__main__":
    print("=" * 60)
    print("COMPLEX TOOLKIT DEMO")
    print("=" * 60)
    catenoid_dh = MeroExpr.from_coeffs([-0.3, 1.0], [0, 0, 1.0])
    print(f"\nRoots of (z+0.5)^2: {poly_roots(CPoly((0.25, 1.0, 1.0)))}")
    print(f"Divisor of (z-0.3)/z^2: {divisor_of(catenoid_dh).to_dict()}")
    print(f"Res_0 (z-0.3)/z^2 dz = {residue(catenoid_dh, 0):.6f}")
    print(f"Res_inf (z-0.3)/z^2 dz = {residue(catenoid_dh, INF):.6f}")
    essential = MeroExpr.from_coeffs([0, 0, 1.0], exp_num=[0, 0.5])
    print(f"Divisor of z^2 e^(z/2): {divisor_of(essential).to_dict()}")
