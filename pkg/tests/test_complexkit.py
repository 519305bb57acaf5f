"""
Unit tests for the complex toolkit: polynomials, meromorphic expressions, residues
"""
import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.complexkit import (
    INF,
    ContourError,
    CPoly,
    EssentialSingularityError,
    MeroExpr,
    argument_count,
    contour_integral,
    divisor_of,
    point_key,
    poly_roots,
    residue,
    same_point,
)


class TestPolyRoots:
    """Test suite for root finding with multiplicities"""

    def test_double_root(self):
        """Test that a perfect square reports one root of multiplicity two"""
        roots = poly_roots(CPoly((0.25, 1.0, 1.0)))
        assert len(roots) == 1
        root, mult = roots[0]
        assert abs(root + 0.5) < 1e-10
        assert mult == 2

    def test_roots_sorted_with_multiplicity(self):
        """Test recovery of prescribed roots, sorted by real then imaginary part"""
        p = CPoly.from_roots([1.0, 1.0, 2j, -1.5])
        roots = poly_roots(p)
        assert [m for _, m in roots] == [1, 1, 2]
        assert abs(roots[0][0] + 1.5) < 1e-10
        assert abs(roots[1][0] - 2j) < 1e-10
        assert abs(roots[2][0] - 1.0) < 1e-7

    def test_zero_roots_split_off(self):
        """Test that exact zeros at the origin are counted exactly"""
        roots = poly_roots(CPoly((0, 0, 0, -1.0, 1.0)))
        assert roots[0] == (0j, 3)
        assert abs(roots[1][0] - 1.0) < 1e-12

    def test_constant_has_no_roots(self):
        """Test that constants have an empty root list"""
        assert poly_roots(CPoly((3.0,))) == []

    def test_zero_polynomial_refused(self):
        """Test that the zero polynomial is refused"""
        with pytest.raises(ValueError):
            poly_roots(CPoly((0.0,)))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=5, unique=True))
    def test_simple_roots_recovered(self, grid_points):
        """Test that well separated simple roots come back to high accuracy"""
        roots = [complex(a, b) / 2 for a, b in grid_points]
        found = poly_roots(CPoly.from_roots(roots))
        assert sum(m for _, m in found) == len(roots)
        for r in roots:
            assert any(abs(r - f) < 1e-8 for f, _ in found)

    def test_coefficient_trim(self):
        """Test that trailing negligible coefficients are dropped"""
        p = CPoly((1.0, 2.0, 1e-14))
        assert p.degree == 1


class TestMeroExpr:
    """Test suite for meromorphic expressions"""

    def test_reduction_cancels_common_factor(self):
        """Test that (z-1)(z+2)/(z-1) reduces to z+2"""
        f = MeroExpr(CPoly.from_roots([1.0, -2.0]), CPoly.from_roots([1.0]))
        assert f.den.degree == 0
        assert f.num.degree == 1
        assert abs(f(3.0) - 5.0) < 1e-12

    def test_reduction_keeps_pole_order_after_complex_cancellation(self):
        """Test that cancelling a complex root leaves z³(z-b)/((z-b)z⁵) = 1/z² exactly"""
        b = cmath.exp(0.25j * np.pi)
        num = CPoly.from_roots([0.0, 0.0, 0.0, b])
        den = CPoly.from_roots([b, 0.0, 0.0, 0.0, 0.0, 0.0])
        f = MeroExpr(num, den)
        assert f.order_at(0.0) == -2
        assert f.den.degree == 2
        assert abs(f(0.5) - 4.0) < 1e-10

    def test_order_ignores_rounding_level_constant(self):
        """Test that a constant term at rounding level still counts as a root"""
        assert CPoly((7.85e-17, 1.0)).order_at(0.0) == 1
        assert CPoly((7.85e-17, 1e-17, 0.5, 1.0)).order_at(0.0) == 2

    def test_arithmetic(self):
        """Test products, quotients and sums of rational expressions"""
        z = MeroExpr.identity()
        f = (z * z + 1) / (z - 2)
        assert abs(f(1j) - 0) < 1e-12
        assert abs(f(3.0) - 10.0) < 1e-12
        g = f - f
        assert g.is_zero

    def test_derivative(self):
        """Test the derivative of 1/z"""
        f = MeroExpr.from_coeffs([1.0], [0, 1.0])
        assert abs(f.derivative()(2.0) + 0.25) < 1e-12

    def test_log_derivative_of_exponential(self):
        """Test that z² e^{z/2} has logarithmic derivative 2/z + 1/2"""
        f = MeroExpr.from_coeffs([0, 0, 1.0], exp_num=[0, 0.5])
        value = f.log_derivative()(2.0)
        assert abs(value - 1.5) < 1e-12
        assert f.log_derivative().is_algebraic

    def test_degree(self):
        """Test the mapping degree of a rational function"""
        f = MeroExpr.from_coeffs([0, 0, -0.5, 1.0], [0.5, 1.0])
        assert f.degree == 3

    def test_degree_of_essential_refused(self):
        """Test that an exponential factor has no degree"""
        f = MeroExpr.from_coeffs([1.0], exp_num=[0, 1.0])
        with pytest.raises(EssentialSingularityError):
            _ = f.degree

    def test_constant_exponent_folded(self):
        """Test that a constant exponent is folded into the rational part"""
        f = MeroExpr.from_coeffs([1.0, 1.0], exp_num=[1.0])
        assert f.is_algebraic
        assert abs(f(0.0) - np.e) < 1e-12

    def test_evaluate_on_extended_plane(self):
        """Test values at a pole, at infinity and at an ordinary point"""
        f = MeroExpr.from_coeffs([2.0, 1.0], [-1.0, 1.0])
        assert f.evaluate(1.0) is INF
        assert f.evaluate(INF) == 1.0
        assert abs(f.evaluate(0.0) + 2.0) < 1e-12

    def test_order_at(self):
        """Test zero and pole orders, including at infinity"""
        f = MeroExpr.from_coeffs([0, 0, 1.0], [1.0, 0, 0, 0, 0, 1.0])
        assert f.order_at(0.0) == 2
        assert f.order_at(INF) == 3

    def test_essential_points(self):
        """Test that an exponent pole marks an essential singularity"""
        e = MeroExpr.from_coeffs([1.0], exp_num=[-0.5, 0, 0.5], exp_den=[0, 1.0])
        points = e.essential_points()
        assert any(p is INF for p in points)
        assert any(p is not INF and same_point(p, 0j) for p in points)
        with pytest.raises(EssentialSingularityError):
            e.order_at(0.0)

    def test_mobius_move(self):
        """Test the Möbius move (f - 1)/(f + 1)"""
        f = MeroExpr.identity()
        g = f.mobius(1, -1, 1, 1)
        assert abs(g(0.5) - (-1 / 3)) < 1e-12


class TestDivisor:
    """Test suite for divisors"""

    def test_catenoid_height_differential(self):
        """Test the divisor of (z - 0.3)/z²"""
        divisor = divisor_of(MeroExpr.from_coeffs([-0.3, 1.0], [0, 0, 1.0]))
        assert divisor.order_at(0j) == -2
        assert divisor.order_at(0.3) == 1
        assert divisor.order_at(INF) == 1
        assert divisor.entries[-1].point is INF

    def test_essential_absorbs_rational_part(self):
        """Test that zeros at an essential point are not listed separately"""
        f = MeroExpr.from_coeffs([0, 0, 0, 1.0], exp_num=[-0.5, 0, 0.5], exp_den=[0, 1.0])
        divisor = divisor_of(f)
        assert divisor.zeros() == []
        assert len(divisor.essentials()) == 2


class TestResidues:
    """Test suite for residues and contour integrals"""

    def test_residue_at_double_pole(self):
        """Test Res_0 (z - 0.3)/z² dz = 1 and Res_∞ = -1"""
        f = MeroExpr.from_coeffs([-0.3, 1.0], [0, 0, 1.0])
        assert abs(residue(f, 0j) - 1.0) < 1e-12
        assert abs(residue(f, INF) + 1.0) < 1e-12

    def test_residue_of_exponential_pole(self):
        """Test Res_0 e^z/z³ dz = 1/2 from the Laurent series"""
        f = MeroExpr.from_coeffs([1.0], [0, 0, 0, 1.0], exp_num=[0, 1.0])
        assert abs(residue(f, 0j) - 0.5) < 1e-12

    def test_numeric_residue_at_essential_point(self):
        """Test the contour residue of e^{1/z} dz at 0, which is 1"""
        f = MeroExpr.from_coeffs([1.0], exp_num=[1.0], exp_den=[0, 1.0])
        assert abs(residue(f, 0j, radius=0.5) - 1.0) < 1e-10

    def test_essential_residue_needs_radius(self):
        """Test that the numeric path refuses without a contour radius"""
        f = MeroExpr.from_coeffs([1.0], exp_num=[1.0], exp_den=[0, 1.0])
        with pytest.raises(ContourError):
            residue(f, 0j)

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=4, unique=True),
        st.lists(st.integers(-3, 3), min_size=1, max_size=4),
    )
    def test_residue_sum_is_zero(self, pole_grid, numerator):
        """Test that residues over all poles plus infinity sum to zero"""
        if all(c == 0 for c in numerator):
            numerator = [1]
        poles = [complex(a, b) / 2 for a, b in pole_grid]
        f = MeroExpr(CPoly(tuple(float(c) for c in numerator)), CPoly.from_roots(poles))
        total = residue(f, INF)
        for p, _ in poly_roots(f.den):
            total += residue(f, p)
        assert abs(total) < 1e-8

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 3), st.integers(0, 2))
    def test_argument_principle(self, zeros, poles):
        """Test that zeros minus poles inside the unit circle is recovered as an integer"""
        inside_zeros = [0.3, -0.4, 0.5j][:zeros]
        inside_poles = [-0.2j, 0.1 + 0.1j][:poles]
        f = MeroExpr(CPoly.from_roots(inside_zeros + [3.0]), CPoly.from_roots(inside_poles + [-4.0]))
        count = argument_count(f, 0j, 1.0)
        assert abs(count - (zeros - poles)) < 1e-8

    def test_contour_integral_of_reciprocal(self):
        """Test ∮ dz/z = 2πi and ∮ dz̄/z̄ = -2πi"""
        assert abs(contour_integral(lambda z: 1 / z, 0j, 1.0) - 2j * np.pi) < 1e-12
        value = contour_integral(lambda z: 1 / np.conj(z), 0j, 2.0, differential='dzbar')
        assert abs(value + 2j * np.pi) < 1e-12

    def test_contour_integral_not_finite(self):
        """Test that a pole on the contour is reported"""
        with pytest.raises(ContourError):
            contour_integral(lambda z: 1 / (z - 1), 0j, 1.0)


class TestPoints:
    """Test suite for extended-plane points"""

    def test_infinity_sorts_last(self):
        """Test the deterministic ordering of points"""
        points = [INF, 1j, -1.0, cmath.exp(0.5j)]
        ordered = sorted(points, key=point_key)
        assert ordered[-1] is INF
        assert ordered[0] == -1.0

    def test_same_point(self):
        """Test point matching with infinity"""
        assert same_point(INF, INF)
        assert not same_point(INF, 0j)
        assert same_point(1.0, 1.0 + 1e-9)


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
