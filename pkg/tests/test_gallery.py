"""
Unit tests for the gallery of known stationary surfaces
"""
import cmath
import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.complexkit import INF
from src.curvature import total_curvature_exact
from src.gallery import (
    FAMILIES,
    GalleryParameterError,
    case5_data,
    default_examples,
    make_example,
    meeks_congruent,
    meeks_cross_ratio,
)
from src.weierstrass import check_admissibility, check_periods, classify_all_ends

PI = math.pi
GOLDEN = json.loads((Path(__file__).parent / "fixtures" / "gallery_expected.json").read_text())


class TestMakeExample:
    """Test suite for building examples by family name"""

    def test_unknown_family(self):
        """Test that an unknown family is refused"""
        with pytest.raises(GalleryParameterError, match='unknown family'):
            make_example('helicoid')

    def test_unknown_parameter(self):
        """Test that a parameter the family does not take is refused"""
        with pytest.raises(GalleryParameterError, match='unknown parameter'):
            make_example('catenoid', k=2)

    def test_defaults_merge(self):
        """Test that missing parameters take the family defaults"""
        example = make_example('catenoid', t=0.1)
        assert example.params == {'t': 0.1, 's': 1.0}

    def test_default_examples(self):
        """Test that every family builds at its defaults"""
        examples = default_examples()
        assert [e.family for e in examples] == list(FAMILIES)

    def test_to_dict_encodes_complex_parameters(self):
        """Test that complex parameters serialize as pairs"""
        payload = make_example('enneper2').to_dict()
        assert payload['params']['c'] == [-1.0, 0.5]
        assert payload['punctures'] == ['inf']
        assert payload['orientable']

    def test_expected_end_lookup(self):
        """Test lookup of an expected end by point"""
        example = make_example('two_singular')
        assert example.expected_end(INF)['d'] == 5
        assert example.expected_end(0j)['d_tilde'] == 1
        with pytest.raises(KeyError):
            example.expected_end(1.0)


class TestPredicates:
    """Test suite for the parameter predicates of each family"""

    @pytest.mark.parametrize('family,params', [
        ('enneper1', {'c': 2.0}),
        ('enneper1', {'c': 0.0}),
        ('enneper1', {'s': 0.0}),
        ('enneper2', {'c': 0.0}),
        ('enneper2', {'c': complex(-0.2, 0.1)}),
        ('catenoid', {'t': 1.0}),
        ('catenoid', {'t': 0.5j}),
        ('catenoid', {'s': 0.0}),
        ('case5', {'a': -0.5, 'b': -0.4}),
        ('case5', {'m': 0}),
        ('case5', {'m': 1.5}),
        ('two_singular', {'a': -0.5}),
        ('meeks', {'lam': 1.0}),
        ('meeks', {'lam': 0.5j}),
        ('meeks', {'m': 0}),
        ('essential', {'k': 1}),
        ('essential', {'a': 2.0}),
        ('essential_mobius', {'p': 1}),
    ])
    def test_predicate_violations(self, family, params):
        """Test that parameters outside the valid range are refused"""
        with pytest.raises(GalleryParameterError):
            make_example(family, **params)

    def test_validation_can_be_skipped(self):
        """Test that validate=False builds data outside the predicate"""
        example = make_example('catenoid', validate=False, t=1.5)
        assert example.params['t'] == 1.5

    def test_non_numeric_parameter(self):
        """Test that a non-numeric value names the parameter"""
        with pytest.raises(GalleryParameterError, match='parameter t'):
            make_example('catenoid', t='wide')

    def test_case5_period_relation(self):
        """Test that a + b = -conj(ρ)/ρ is enforced for complex ρ"""
        rho = cmath.exp(0.25j * PI)
        target = -rho.conjugate() / rho
        data = case5_data(2, target / 2, target / 2, rho)
        assert check_periods(data).passed


class TestExpectedBehaviour:
    """Test suite comparing each example with its recorded ground truth"""

    @pytest.mark.parametrize('family', list(FAMILIES))
    def test_ends_match_expectation(self, family):
        """Test the classified ends against the expected end data"""
        example = make_example(family)
        for end in classify_all_ends(example.data):
            expected = example.expected_end(end.point)
            assert end.kind == expected['kind']
            assert end.d == expected['d']
            assert end.d_tilde == expected['d_tilde']
            if expected['ind_plus'] is not None:
                assert end.ind_plus == expected['ind_plus']

    @pytest.mark.parametrize('family', list(FAMILIES))
    def test_periods_close(self, family):
        """Test that every default example satisfies the period conditions"""
        assert check_periods(make_example(family).data).passed

    @pytest.mark.parametrize('family', list(FAMILIES))
    def test_admissibility_matches_expectation(self, family):
        """Test the admissibility verdict against the recorded one"""
        example = make_example(family)
        assert check_admissibility(example.data).passed == example.expected_admissible

    def test_expected_totals(self):
        """Test the recorded totals of the main families"""
        assert make_example('enneper1').expected_total_K == pytest.approx(-4 * PI)
        assert make_example('two_singular').expected_total_K == pytest.approx(-8 * PI)
        assert make_example('essential', k=3).expected_total_K == pytest.approx(-12 * PI)
        meeks = make_example('meeks', m=2)
        assert meeks.expected_total_K == pytest.approx(-20 * PI)
        assert meeks.expected_quotient_total == pytest.approx(10 * PI)
        assert not meeks.orientable

    def test_only_case5_is_irregular(self):
        """Test the regularity flags"""
        irregular = [e.family for e in default_examples() if not e.expected_regular]
        assert irregular == ['case5']


class TestGoldenFixture:
    """Test suite against the hand-derived gallery fixture"""

    @pytest.mark.parametrize('family', sorted(GOLDEN))
    def test_recorded_totals(self, family):
        """Test expected totals and ends against the fixture"""
        golden = GOLDEN[family]
        example = make_example(family)
        assert example.expected_total_K / PI == pytest.approx(golden['total_K_over_pi'])
        if golden['quotient_total_over_pi'] is None:
            assert example.expected_quotient_total is None
        else:
            assert example.expected_quotient_total / PI == pytest.approx(golden['quotient_total_over_pi'])
        assert example.expected_ends == golden['ends']

    @pytest.mark.parametrize('family', [f for f in sorted(GOLDEN) if make_example(f).exact_available])
    def test_exact_totals(self, family):
        """Test the exact total of every algebraic family against the fixture"""
        exact = total_curvature_exact(make_example(family).data)
        assert exact.total_K / PI == pytest.approx(GOLDEN[family]['total_K_over_pi'])
        assert exact.agree

    def test_fixture_covers_every_family(self):
        """Test that the fixture lists each family"""
        assert set(GOLDEN) == set(FAMILIES)


class TestMeeksCongruence:
    """Test suite for congruence of Meeks strips"""

    def test_cross_ratio(self):
        """Test that the cross ratio of λ = e^{iθ} is e^{2iθ}"""
        assert abs(meeks_cross_ratio(cmath.exp(0.3j)) - cmath.exp(0.6j)) < 1e-12

    def test_conjugate_is_congruent(self):
        """Test that λ and λ̄ give congruent strips"""
        lam = cmath.exp(1j * PI / 3)
        assert meeks_congruent(lam, lam.conjugate())

    def test_distinct_angles_not_congruent(self):
        """Test that different angles give different strips"""
        assert not meeks_congruent(cmath.exp(1j * PI / 3), cmath.exp(1j * PI / 4))

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, PI - 0.05))
    def test_sign_flip_is_congruent(self, theta):
        """Test that λ and -λ are related by z → -z"""
        lam = cmath.exp(1j * theta)
        assert meeks_congruent(lam, -lam, tol=1e-10)
        assert meeks_congruent(lam, -lam.conjugate(), tol=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
