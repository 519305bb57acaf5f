"""
Tests for the command-line surface: config parsing, subcommands and exit codes
"""
import json
import math
from pathlib import Path

import pandas as pd
import pytest

from src.cli import (
    EXIT_CHECKS_FAILED,
    EXIT_CONFIG,
    EXIT_OK,
    ConfigError,
    data_to_config,
    parse_config,
    parse_param,
    parse_schedule,
    run_command,
)
from src.complexkit import INF
from src.gallery import make_example

GOLDEN = json.loads((Path(__file__).parent / "fixtures" / "gallery_expected.json").read_text())


def _catenoid_document():
    return data_to_config(make_example('catenoid').data)


def _write(path: Path, document) -> str:
    path.write_text(json.dumps(document))
    return str(path)


class TestConfigParsing:
    """Test suite for config documents"""

    def test_round_trip(self):
        """Test that an emitted config parses back to the same data"""
        original = make_example('meeks').data
        data, region, schedule = parse_config(data_to_config(original))
        assert region is None and schedule is None
        assert data.has_involution
        assert data.punctures[-1] is INF
        for z in (0.3 + 0.2j, -1.7, 2.5j):
            assert abs(data.phi(z) - original.phi(z)) < 1e-12 * (1 + abs(original.phi(z)))
            assert abs(data.dh(z) - original.dh(z)) < 1e-12 * (1 + abs(original.dh(z)))

    def test_exponential_factor_round_trip(self):
        """Test that exp_num and exp_den survive the round trip"""
        original = make_example('essential').data
        data, _, _ = parse_config(data_to_config(original))
        assert not data.is_algebraic
        assert abs(data.phi(0.7) - original.phi(0.7)) < 1e-12

    @pytest.mark.parametrize('mutate,field', [
        (lambda d: d.pop('phi'), 'phi: missing'),
        (lambda d: d['psi'].update(num=[1.0, 'x']), 'psi.num[1]'),
        (lambda d: d['dh'].update(extra=[1.0]), 'dh: unknown key'),
        (lambda d: d['domain'].update(punctures='inf'), 'domain.punctures'),
        (lambda d: d.update(involution='yes'), 'involution'),
        (lambda d: d['phi'].update(num=[2.0], den=[1.0]), 'phi/psi/dh'),
        (lambda d: d['dh'].update(den=[0.0]), 'dh.den'),
        (lambda d: d.update(search_region={'r_min': 2.0, 'r_max': 1.0}), 'search_region'),
    ])
    def test_errors_name_the_field(self, mutate, field):
        """Test that invalid documents raise with the offending field"""
        document = _catenoid_document()
        mutate(document)
        with pytest.raises(ConfigError) as info:
            parse_config(document)
        assert field in str(info.value)

    def test_top_level_must_be_object(self):
        """Test that a JSON list is refused"""
        with pytest.raises(ConfigError):
            parse_config([1, 2, 3])

    def test_schedule_override(self):
        """Test that a schedule entry replaces the default at its end"""
        data = make_example('catenoid').data
        spec = parse_schedule([{'point': 'inf', 'radii': [50.0, 500.0]}], data)
        outer = [radii for p, radii in spec.ends if p is INF][0]
        assert outer == [50.0, 500.0]

    @pytest.mark.parametrize('entry', [
        {'point': [2.0, 0.0], 'radii': [1e-2]},
        {'point': 'inf', 'radii': [500.0, 50.0]},
        {'point': 'inf', 'radii': []},
        {'radii': [1.0]},
    ])
    def test_schedule_errors(self, entry):
        """Test that invalid schedule entries are config errors"""
        with pytest.raises(ConfigError):
            parse_schedule([entry], make_example('catenoid').data)


class TestParams:
    """Test suite for gallery --param values"""

    def test_integer_real_and_complex(self):
        """Test the value casts"""
        assert parse_param('m=2') == ('m', 2)
        assert parse_param('t=0.3') == ('t', 0.3)
        assert parse_param('c=-1+0.5i') == ('c', complex(-1.0, 0.5))

    @pytest.mark.parametrize('text', ['c', 'c=wide'])
    def test_bad_params(self, text):
        """Test that unreadable params raise"""
        with pytest.raises(ConfigError):
            parse_param(text)


class TestCommands:
    """Test suite for subcommands and exit codes"""

    def test_gallery_then_analyze(self, tmp_path):
        """Test the catenoid pipeline end to end"""
        config = tmp_path / 'catenoid.json'
        assert run_command(['gallery', 'catenoid', '--out', str(config)]) == EXIT_OK
        report_path = tmp_path / 'report.json'
        assert run_command(['analyze', str(config), '--out', str(report_path)]) == EXIT_OK
        report = json.loads(report_path.read_text())
        assert report['passed']
        assert list(report['checks']) == ['admissibility', 'periods', 'regularity', 'curvature',
                                          'completeness', 'involution']
        assert report['checks']['involution']['passed'] is None
        golden = GOLDEN['catenoid']['total_K_over_pi']
        assert report['curvature']['exact_total_K'] / math.pi == pytest.approx(golden)
        assert abs(report['curvature']['numeric_total_K'] / math.pi - golden) <= 1e-6 * abs(golden)

    def test_gallery_emit_analyze(self, tmp_path):
        """Test that the catenoid analysis passes with both boundary forms in agreement"""
        out = tmp_path / 'catenoid_report.json'
        assert run_command(['gallery', 'catenoid', '--emit', 'analyze', '--out', str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report['passed']
        checks = {c['name']: c for c in report['curvature']['checks']}
        assert checks['boundary_forms_agree']['passed']
        assert checks['normal_curvature_zero']['passed']
        assert report['curvature']['numeric']['form_difference'] < 1e-6

    def test_essential_regularity(self, tmp_path):
        """Test that M_{2,1/2} reports no solutions of φ = conj ψ on the default region"""
        out = tmp_path / 'essential_report.json'
        run_command(['gallery', 'essential', '--param', 'k=2', '--param', 'a=0.5',
                     '--emit', 'analyze', '--out', str(out)])
        report = json.loads(out.read_text())
        assert report['checks']['regularity']['passed'] is True
        assert report['regularity']['solutions'] == []

    def test_reports_are_deterministic(self, tmp_path):
        """Test that two runs write byte-identical reports"""
        config = _write(tmp_path / 'catenoid.json', _catenoid_document())
        first, second = tmp_path / 'a.json', tmp_path / 'b.json'
        assert run_command(['analyze', config, '--out', str(first)]) == EXIT_OK
        assert run_command(['analyze', config, '--out', str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_failed_check_exit_code(self, tmp_path):
        """Test that a vertical period writes the report and exits 1"""
        document = {
            'name': 'vertical_period',
            'domain': {'punctures': [[0.0, 0.0], 'inf']},
            'phi': {'num': [0.0, 1.0]},
            'psi': {'num': [-1.0], 'den': [0.0, 1.0]},
            'dh': {'num': [[0.0, 1.0]], 'den': [0.0, 1.0]},
        }
        config = _write(tmp_path / 'vertical.json', document)
        out = tmp_path / 'vertical_report.json'
        assert run_command(['analyze', config, '--out', str(out)]) == EXIT_CHECKS_FAILED
        report = json.loads(out.read_text())
        assert report['checks']['periods']['passed'] is False

    def test_missing_config(self, tmp_path):
        """Test that a missing file is a config error"""
        assert run_command(['analyze', str(tmp_path / 'nope.json')]) == EXIT_CONFIG

    def test_malformed_json(self, tmp_path, capsys):
        """Test that a JSON syntax error reports its position"""
        config = tmp_path / 'broken.json'
        config.write_text('{"phi": [1, 2,,]}')
        assert run_command(['analyze', str(config)]) == EXIT_CONFIG
        assert 'line 1' in capsys.readouterr().err

    def test_bad_gallery_parameter(self, tmp_path):
        """Test that a violated family predicate exits 2"""
        out = str(tmp_path / 'x.json')
        assert run_command(['gallery', 'catenoid', '--param', 't=2', '--out', out]) == EXIT_CONFIG
        assert run_command(['gallery', 'catenoid', '--param', 'k=2', '--out', out]) == EXIT_CONFIG

    def test_unknown_command_and_version(self):
        """Test argparse failures and --version"""
        assert run_command(['frobnicate']) == EXIT_CONFIG
        assert run_command(['--version']) == EXIT_OK

    def test_mesh(self, tmp_path):
        """Test mesh export through the CLI"""
        config = _write(tmp_path / 'catenoid.json', _catenoid_document())
        prefix = tmp_path / 'mesh' / 'catenoid'
        code = run_command(['mesh', config, '--grid', '4x8', '--radii', '0.5', '2', '--out', str(prefix)])
        assert code == EXIT_OK
        frame = pd.read_csv(prefix.with_suffix('.csv'))
        assert len(frame) == 32
        assert prefix.with_suffix('.obj').exists()

    def test_mesh_bad_grid(self, tmp_path):
        """Test that a malformed --grid exits 2"""
        config = _write(tmp_path / 'catenoid.json', _catenoid_document())
        assert run_command(['mesh', config, '--grid', '4by8']) == EXIT_CONFIG
        assert run_command(['mesh', config, '--grid', '1x8']) == EXIT_CONFIG

    def test_locus(self, tmp_path):
        """Test that the locus command writes the polyline table"""
        config = _write(tmp_path / 'catenoid.json', _catenoid_document())
        out = tmp_path / 'locus.csv'
        assert run_command(['locus', config, '--region', '0.05', '5', '--out', str(out)]) == EXIT_OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == ['re', 'im', 'delta', 'component']
        assert len(frame) > 0

    def test_locus_bad_region(self, tmp_path):
        """Test that --region takes two or four numbers"""
        config = _write(tmp_path / 'catenoid.json', _catenoid_document())
        assert run_command(['locus', config, '--region', '0.05', '5', '1']) == EXIT_CONFIG

    def test_lemma_a2(self, tmp_path):
        """Test the non-existence check through the CLI"""
        out = tmp_path / 'a2.json'
        assert run_command(['lemma-a2', '--a', '-2', '-1.01', '--out', str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert [v['verdict'] for v in payload['verdicts']] == ['no-solution', 'no-solution']
        assert run_command(['lemma-a2', '--a', '-0.5']) == EXIT_CONFIG

    def test_lemma_a1(self, tmp_path):
        """Test a one-cell existence sweep"""
        out = tmp_path / 'a1.csv'
        code = run_command(['lemma-a1', '--m', '1', '--t', '0', '--a-grid', '1', '--out', str(out)])
        assert code == EXIT_OK
        frame = pd.read_csv(out)
        assert frame['status'].tolist() == ['witness']


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
