"""
Unit tests for total curvature: densities, contour totals, exact totals, global identities
"""
import cmath
import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from src.complexkit import INF, ContourError, MeroExpr
from src.curvature import (
    AnnulusSpec,
    BadSingularEndError,
    SingularPointError,
    annulus_total,
    curvature_density,
    curvature_form_density,
    global_identity_report,
    quotient_ends,
    total_curvature_contour,
    total_curvature_exact,
)
from src.gallery import make_example
from src.immersion import conformal_factor
from src.weierstrass import NotAlgebraicError, classify_all_ends, make_data

PI = math.pi


def _bad_data():
    z = MeroExpr.identity()
    return make_data(z, z, MeroExpr.constant(1.0), [0j, INF], name='bad')


class TestDensity:
    """Test suite for the pointwise curvature density"""

    def test_spacelike_catenoid_density(self):
        """Test that the t = 0 catenoid has K < 0 and K⊥ = 0"""
        data = make_example('catenoid', t=0.0).data
        z = np.array([0.5, 1.0 + 1.0j, -2.0j])
        value = curvature_density(data, z)
        assert np.all(value.real > 0)
        assert np.max(np.abs(value.imag)) < 1e-12

    def test_form_density_is_density_times_factor(self):
        """Test (-K + iK⊥) e^{2ω} against the density"""
        data = make_example('catenoid').data
        z = 0.7 + 0.4j
        expected = curvature_density(data, z) * conformal_factor(data, z)
        assert abs(curvature_form_density(data, z) - expected) < 1e-10 * abs(expected)

    def test_density_refused_at_mixed_solution(self):
        """Test that φ = conj ψ is reported as a singular point"""
        data = make_example('case5').data
        z = (3 + math.sqrt(5)) / 4 * cmath.exp(2j * PI / 3)
        with pytest.raises(SingularPointError):
            curvature_density(data, z)


class TestAnnulusSpec:
    """Test suite for contour schedules"""

    def test_default_catenoid_schedule(self):
        """Test algebraic schedules scaled by the special points"""
        spec = AnnulusSpec.default(make_example('catenoid').data)
        schedules = dict((('inf' if p is INF else 'zero'), radii) for p, radii in spec.ends)
        assert schedules['inf'] == pytest.approx([1e2, 1e3, 1e4])
        assert schedules['zero'] == pytest.approx([3e-3, 3e-4, 3e-5])
        assert spec.stages == 3

    def test_essential_schedule(self):
        """Test the geometric schedule at an essential end"""
        spec = AnnulusSpec.default(make_example('essential').data)
        outer = [radii for p, radii in spec.ends if p is INF][0]
        assert len(outer) == 5
        assert outer[1] / outer[0] == pytest.approx(10.0)

    def test_interior_pole_circles(self):
        """Test that the circles around interior poles of φ and ψ shrink stage by stage"""
        spec = AnnulusSpec.default(make_example('meeks').data)
        assert len(spec.phi_poles) == 1
        assert len(spec.psi_poles) == 1
        assert spec.phi_poles[0][1] == pytest.approx([1e-3, 1e-4, 1e-5])
        assert spec.stages == 3

    def test_pole_schedule_direction(self):
        """Test that a pole schedule growing away from its pole is refused"""
        with pytest.raises(ValueError, match='pole radii'):
            AnnulusSpec(ends=[(INF, [1e2, 1e3])], phi_poles=[(1j, [1e-4, 1e-3])])

    @pytest.mark.parametrize('ends', [
        [(INF, [1e3, 1e2])],
        [(0j, [1e-3, 1e-2])],
        [(0j, [])],
    ])
    def test_schedule_direction(self, ends):
        """Test that schedules must move toward their end"""
        with pytest.raises(ValueError):
            AnnulusSpec(ends=ends)

    def test_scaled(self):
        """Test that scaling keeps the schedule direction"""
        spec = AnnulusSpec.default(make_example('catenoid').data).scaled(2.0)
        assert spec.radius(1, 0) == pytest.approx(200.0)
        assert spec.to_dict()['ends'][1]['point'] == 'inf'


class TestContourTotals:
    """Test suite for numeric totals from the boundary forms"""

    @pytest.mark.parametrize('t', [0.0, 0.3, -0.6])
    def test_catenoid(self, t):
        """Test ∫K = -4π and ∫K⊥ = 0 for the catenoid"""
        totals = total_curvature_contour(make_example('catenoid', t=t).data)
        assert abs(totals.total_K + 4 * PI) < 1e-6
        assert abs(totals.total_Kperp) < 1e-7
        assert totals.form_difference < 1e-6
        assert len(totals.history) == 3

    @pytest.mark.parametrize('family', ['catenoid', 'two_singular', 'enneper2', 'meeks'])
    def test_boundary_forms_agree(self, family):
        """Test that the φ and ψ boundary forms give the same total when ψ has interior poles"""
        totals = total_curvature_contour(make_example(family).data)
        assert totals.form_difference < 1e-6
        assert abs(totals.total_Kperp) < 1e-7
        assert abs(totals.psi_total_Kperp) < 1e-7

    def test_enneper(self):
        """Test the one-ended Enneper surface"""
        totals = total_curvature_contour(make_example('enneper1').data)
        assert abs(totals.total_K + 4 * PI) < 1e-5

    def test_two_singular(self):
        """Test ∫K = -8π with two good singular ends"""
        totals = total_curvature_contour(make_example('two_singular').data)
        assert abs(totals.total_K + 8 * PI) < 1e-5

    def test_history_converges(self):
        """Test that successive stages approach the limit"""
        totals = total_curvature_contour(make_example('catenoid').data)
        errors = [abs(row['total_K'] + 4 * PI) for row in totals.history]
        assert errors[-1] <= errors[0]
        assert totals.last_change is not None

    def test_deformation_invariance(self):
        """Test that doubling every radius leaves the total unchanged"""
        data = make_example('catenoid').data
        base = total_curvature_contour(data)
        moved = total_curvature_contour(data, AnnulusSpec.default(data).scaled(2.0))
        assert abs(base.total_K - moved.total_K) < 1e-6

    def test_essential_ends(self):
        """Test ∫K = -4πk for M_{k,a}"""
        totals = total_curvature_contour(make_example('essential', k=2).data)
        assert abs(totals.total_K + 8 * PI) < 1e-3
        assert abs(totals.total_Kperp) < 1e-5

    def test_annulus_matches_area_integral(self):
        """Test Stokes' theorem on an annulus against a direct area integral"""
        data = make_example('catenoid').data
        r_in, r_out = 0.5, 2.0
        boundary = annulus_total(data, r_in, r_out)

        def part(fn):
            def integrand(theta, r):
                return fn(curvature_form_density(data, r * cmath.exp(1j * theta))) * r
            value, _ = dblquad(integrand, r_in, r_out, 0.0, 2 * PI, epsabs=1e-10, epsrel=1e-10)
            return value

        area = complex(part(lambda w: w.real), part(lambda w: w.imag))
        assert abs(boundary - area) < 1e-7

    def test_annulus_with_pole_refused(self):
        """Test that the annulus may not contain a pole of φ"""
        with pytest.raises(ContourError):
            annulus_total(make_example('meeks').data, 0.5, 2.0)


class TestExactTotals:
    """Test suite for degree and index formulas"""

    def test_catenoid(self):
        """Test ∫K = -4π deg φ with regular ends"""
        exact = total_curvature_exact(make_example('catenoid').data)
        assert exact.total_K == pytest.approx(-4 * PI)
        assert exact.agree

    def test_two_singular(self):
        """Test that the end indices reduce the degree"""
        exact = total_curvature_exact(make_example('two_singular').data)
        assert (exact.deg_phi, exact.sum_ind_10) == (4, 2)
        assert (exact.deg_psi, exact.sum_ind_01) == (4, 2)
        assert exact.total_K == pytest.approx(-8 * PI)
        assert exact.total_K_psi == pytest.approx(-8 * PI)

    def test_bad_singular_end_refused(self):
        """Test that a bad singular end refuses the exact total"""
        with pytest.raises(BadSingularEndError):
            total_curvature_exact(_bad_data())

    def test_essential_refused(self):
        """Test that exponential factors refuse the exact total"""
        with pytest.raises(NotAlgebraicError):
            total_curvature_exact(make_example('essential').data)


class TestGlobalIdentities:
    """Test suite for the global identity report"""

    def test_catenoid_report(self):
        """Test every orientable identity on the catenoid"""
        report = global_identity_report(make_example('catenoid').data)
        assert report.passed
        assert report.orientable
        names = [c.name for c in report.checks]
        for name in ('index_sum', 'exact_phi_psi', 'index_plus', 'jorge_meeks',
                     'chern_osserman', 'quantization', 'numeric_vs_exact',
                     'normal_curvature_zero', 'boundary_forms_agree'):
            assert name in names
        assert report.check('chern_osserman').lhs == pytest.approx(report.check('chern_osserman').rhs)

    def test_two_singular_jorge_meeks(self):
        """Test the Jorge-Meeks formula with singular ends"""
        report = global_identity_report(make_example('two_singular').data, numeric=False)
        check = report.check('jorge_meeks')
        assert check.passed
        assert check.rhs == pytest.approx(-8 * PI)
        assert report.numeric is None

    def test_meeks_quotient(self):
        """Test the non-orientable identities on the Meeks strip"""
        report = global_identity_report(make_example('meeks').data)
        assert not report.orientable
        assert report.quotient_total == pytest.approx(6 * PI)
        assert report.check('normal_curvature_zero').passed
        assert abs(report.numeric_total_Kperp) < 1e-7
        for name in ('nonorientable_jorge_meeks', 'nonorientable_index',
                     'lower_bound_g2', 'lower_bound_g3', 'parity'):
            assert report.check(name).passed, name
        assert report.passed

    def test_quotient_ends(self):
        """Test that 0 and ∞ form one pair under the involution"""
        data = make_example('meeks').data
        reps = quotient_ends(data, classify_all_ends(data))
        assert len(reps) == 1

    def test_essential_mobius_quotient(self):
        """Test the numeric quotient total with essential ends"""
        report = global_identity_report(make_example('essential_mobius').data)
        assert abs(report.quotient_total - 6 * PI) < 1e-3
        assert report.check('parity').passed is None
        assert report.check('nonorientable_jorge_meeks').passed is None

    def test_essential_quantization(self):
        """Test that numeric totals of non-algebraic data are quantized"""
        report = global_identity_report(make_example('essential').data)
        assert report.exact is None
        assert report.check('quantization').passed
        assert report.passed

    def test_bad_end_report(self):
        """Test that the report records the refusal as a failed check"""
        report = global_identity_report(_bad_data())
        assert not report.passed
        assert report.refusal is not None
        assert report.numeric is None
        assert report.check('exact_total').passed is False
        assert report.to_dict()['refusal'] == report.refusal


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
