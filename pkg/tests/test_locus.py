"""
Unit tests for the mixed equation φ = conj ψ, the equal-module locus and the existence lemmas
"""
import cmath
import math

import numpy as np
import pytest

from src.complexkit import MeroExpr
from src.gallery import make_example
from src.locus import (
    DegenerateLocusError,
    LemmaPreconditionError,
    MixedTerm,
    SearchRegion,
    find_singular_points,
    lemma_a1_residual,
    lemma_a1_sweep,
    lemma_a1_witness,
    lemma_a2_check,
    locus_frame,
    module_defect,
    reduced_a_grid,
    search_singular_points,
    trace_equal_module_locus,
)

OMEGA = cmath.exp(2j * math.pi / 3)
# |z + 1/2|² = z³/|z|² on the rays rω^{±1}: r² - 3r/2 + 1/4 = 0
CASE5_RADII = ((3 - math.sqrt(5)) / 4, (3 + math.sqrt(5)) / 4)
CASE5_SOLUTIONS = [r * w for r in CASE5_RADII for w in (OMEGA, OMEGA.conjugate())]


class TestSearchRegion:
    """Test suite for the search annulus"""

    def test_invalid_radii(self):
        """Test that 0 < r_min < r_max is enforced"""
        with pytest.raises(ValueError):
            SearchRegion(r_min=1.0, r_max=0.5)
        with pytest.raises(ValueError):
            SearchRegion(r_min=0.0, r_max=1.0)

    def test_minimum_resolution(self):
        """Test that coarse seed grids are refused"""
        with pytest.raises(ValueError):
            SearchRegion(resolution=8)

    def test_contains_sector(self):
        """Test membership in an annular sector"""
        region = SearchRegion(r_min=0.5, r_max=2.0, theta_min=0.0, theta_max=math.pi / 2)
        inside = region.contains(np.array([1.0 + 0.5j, -1.0, 3.0, 0.1j]))
        assert inside.tolist() == [True, False, False, False]

    def test_grid_shape(self):
        """Test the log-polar seed grid"""
        region = SearchRegion(r_min=0.1, r_max=10.0, resolution=16)
        grid = region.grid()
        assert grid.shape == (32, 16)
        assert abs(abs(grid[0, 0]) - 0.1) < 1e-12
        assert abs(abs(grid[-1, 0]) - 10.0) < 1e-9

    def test_to_dict(self):
        """Test serialization of the region"""
        payload = SearchRegion(r_min=0.1, r_max=10.0, center=1j).to_dict()
        assert payload['center'] == [0.0, 1.0]
        assert payload['r_max'] == 10.0


class TestSingularSearch:
    """Test suite for solutions of φ = conj ψ"""

    def test_case5_solutions_found(self):
        """Test that the four solutions on the rays rω^{±1} are found"""
        data = make_example('case5').data
        report = search_singular_points(data, SearchRegion(1e-2, 1e2))
        assert not report.passed
        found = [s.z for s in report.solutions]
        for expected in CASE5_SOLUTIONS:
            assert any(abs(z - expected) < 1e-8 for z in found), expected
        for solution in report.solutions:
            assert solution.residual <= 1e-8
            assert solution.isolated

    def test_explicit_seed(self):
        """Test a search started from a single explicit seed"""
        data = make_example('case5').data
        solutions = find_singular_points(data, seeds=[1.3 * OMEGA])
        assert len(solutions) == 1
        assert abs(solutions[0].z - CASE5_RADII[1] * OMEGA) < 1e-8
        assert abs(solutions[0].multiplicity) == 1

    @pytest.mark.parametrize('family', ['catenoid', 'enneper1'])
    def test_regular_surfaces_have_no_solutions(self, family):
        """Test that regular examples pass the search"""
        report = search_singular_points(make_example(family).data, SearchRegion(1e-2, 1e2))
        assert report.passed
        assert report.solutions == []
        assert report.to_dict()['passed']

    @pytest.mark.parametrize('family', ['essential', 'essential_mobius'])
    def test_essential_data_have_no_solutions(self, family):
        """Test the default region, where e^{az} is vanishingly small on the far left"""
        report = search_singular_points(make_example(family).data)
        assert report.passed
        assert report.seed_count > 0

    def test_vanishing_values_are_not_solutions(self):
        """Test that seeds where φ and ψ are both negligible but unequal are refused"""
        data = make_example('essential', k=2, a=0.5).data
        seeds = [-1000.0 + 0j, -900.0 + 5j, -990.0 - 40j]
        assert find_singular_points(data, seeds=seeds) == []

    def test_region_shrinks_off_a_pole(self):
        """Test that a boundary circle through a pole of ψ is moved"""
        data = make_example('case5').data
        report = search_singular_points(data, SearchRegion(0.5, 10.0))
        assert report.warnings
        assert report.region.r_min > 0.5


class TestEqualModuleLocus:
    """Test suite for tracing |L| = |R|"""

    def setup_method(self):
        """Set up the unit circle as the locus |z| = 1"""
        self.left = MeroExpr.identity()
        self.right = MeroExpr.constant(1.0)
        self.region = SearchRegion(r_min=0.1, r_max=10.0, resolution=32)

    def test_unit_circle(self):
        """Test that |z| = 1 is traced as one closed curve"""
        curves = trace_equal_module_locus(self.left, self.right, self.region)
        assert len(curves) == 1
        curve = curves[0]
        assert curve.closed
        assert np.max(np.abs(np.abs(curve.points) - 1)) < 1e-9
        assert np.max(module_defect(self.left, self.right, curve.points)) < 1e-9

    def test_gap_winds_once(self):
        """Test that δ = -arg z decreases by 2π around the circle"""
        curve = trace_equal_module_locus(self.left, self.right, self.region)[0]
        assert abs(curve.winding() + 1) < 1e-9
        crossings = curve.crossings()
        assert crossings
        assert all(abs(point - 1) < 1e-2 for point, _ in crossings)

    def test_identical_terms_refused(self):
        """Test that L = R is degenerate"""
        with pytest.raises(DegenerateLocusError):
            trace_equal_module_locus(self.left, self.left, self.region)

    def test_equal_modulus_everywhere_refused(self):
        """Test that |z| = |conj z| everywhere is degenerate"""
        conj_z = MixedTerm(MeroExpr.constant(1.0), MeroExpr.identity())
        with pytest.raises(DegenerateLocusError):
            trace_equal_module_locus(self.left, conj_z, self.region)

    def test_locus_frame(self):
        """Test the polyline table"""
        curves = trace_equal_module_locus(self.left, self.right, self.region)
        frame = locus_frame(curves)
        assert list(frame.columns) == ['re', 'im', 'delta', 'component']
        assert len(frame) == len(curves[0])
        assert set(frame['component']) == {0}
        assert locus_frame([]).empty


class TestExistenceLemma:
    """Test suite for the existence of mixed solutions with two good singular ends"""

    def test_witness_symmetric_case(self):
        """Test a witness for a = b = -1/2, m = 1"""
        solution = lemma_a1_witness(1, -0.5, -0.5)
        assert lemma_a1_residual(1, -0.5, -0.5, solution.z) <= 1e-9
        assert min(abs(abs(solution.z) - r) for r in CASE5_RADII) < 1e-8

    def test_witness_asymmetric_case(self):
        """Test a witness for m = 2, a = -1/4, b = -3/4"""
        solution = lemma_a1_witness(2, -0.25, -0.75)
        assert abs(solution.z) > 1e-6
        assert lemma_a1_residual(2, -0.25, -0.75, solution.z) <= 1e-9

    def test_rotated_parameters(self):
        """Test witnesses for a + b = -e^{it} with t ≠ 0"""
        rows = lemma_a1_sweep(ms=(1, 2), ts=(math.pi / 5,), a_values=[complex(-0.3, 0.2)])
        assert len(rows) == 2
        for row in rows:
            assert row['status'] == 'witness'
            assert row['lemma_residual'] <= 1e-9

    @pytest.mark.parametrize('m,a,b', [
        (0, -0.5, -0.5),
        (1, 0.0, -1.0),
        (1, -0.5, -0.6),
    ])
    def test_preconditions(self, m, a, b):
        """Test that parameters outside the lemma are refused"""
        with pytest.raises(LemmaPreconditionError):
            lemma_a1_witness(m, a, b)

    def test_reduced_grid(self):
        """Test that the a' grid alternates |a' - b'| below and above one"""
        grid = reduced_a_grid(4)
        gaps = [abs(a - (-1 - a)) for a in grid]
        assert [g < 1 for g in gaps] == [True, False, True, False]


class TestNonExistenceLemma:
    """Test suite for the margin check with a = b real and m = 1"""

    @pytest.mark.parametrize('a,expected', [
        (-1.01, 0.010075),
        (-2.0, 1.75),
        (-10.0, 69.75),
    ])
    def test_margins(self, a, expected):
        """Test that the margin is (3a - 1)(a + 1)/4 on the rotated rays"""
        verdict = lemma_a2_check(a)
        assert verdict.no_solution
        assert verdict.verdict == 'no-solution'
        assert verdict.margin == pytest.approx(expected, rel=1e-6)
        assert verdict.margins[0] == pytest.approx(a * a, rel=1e-6)
        assert verdict.minimizers[1] == pytest.approx((1 - a) / 2, rel=1e-4)

    @pytest.mark.parametrize('a', [-1.0, -0.5, complex(-2.0, 1.0)])
    def test_preconditions(self, a):
        """Test that a must be real with -a > 1"""
        with pytest.raises(LemmaPreconditionError):
            lemma_a2_check(a)

    def test_to_dict(self):
        """Test the verdict payload"""
        payload = lemma_a2_check(-2.0).to_dict()
        assert payload['verdict'] == 'no-solution'
        assert len(payload['margins']) == 3


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
