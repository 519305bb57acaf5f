"""
Command-line entry point

    python -m src.cli analyze data/configs/catenoid.json --out reports/catenoid.json
    python -m src.cli gallery catenoid --param t=0.3 --emit analyze
    python -m src.cli lemma-a2 --a -2

Exit status: 0 when every applicable check passes, 1 when some check fails
(the report is still written), 2 for config or precondition errors, 3 for
internal errors.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src import __version__
from src.complexkit import INF, CPoly, ExtComplex, MeroExpr, format_point, same_point
from src.config import IMMERSION, RUNTIME
from src.curvature import AnnulusSpec, global_identity_report
from src.gallery import FAMILIES, ExampleSpec, GalleryParameterError, make_example
from src.immersion import PolarGrid, completeness_check, export_mesh, immerse_grid, involution_check
from src.locus import (
    LemmaPreconditionError,
    MixedTerm,
    SearchRegion,
    lemma_a1_sweep,
    lemma_a2_check,
    locus_frame,
    reduced_a_grid,
    search_singular_points,
    trace_equal_module_locus,
)
from src.utils import (
    config_hash,
    decode_complex,
    encode_complex,
    export_to_json,
    format_pi_multiple,
    load_from_json,
    print_report_summary,
    write_table,
)
from src.weierstrass import (
    WeierstrassData,
    WeierstrassDataError,
    check_admissibility,
    check_periods,
    make_data,
    surface_topology,
    weierstrass_summary,
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

TOOL_NAME = 'stationary-surfaces'
EXIT_OK, EXIT_CHECKS_FAILED, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


class ConfigError(ValueError):
    """A config document (or option) that does not describe valid input; the message names the field"""


# ============= CONFIG DOCUMENTS =============

def _coefficients(value: Any, field: str) -> List[complex]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{field}: expected a non-empty list of coefficients")
    out = []
    for k, c in enumerate(value):
        try:
            z = decode_complex(c)
        except ValueError as exc:
            raise ConfigError(f"{field}[{k}]: {exc}")
        if z is INF:
            raise ConfigError(f"{field}[{k}]: coefficients must be finite")
        out.append(complex(z))
    return out


def parse_expr(doc: Any, field: str) -> MeroExpr:
    """{num, den?, exp_num?, exp_den?} with ascending coefficient lists"""
    if not isinstance(doc, dict):
        raise ConfigError(f"{field}: expected an object with 'num' and optional 'den', 'exp_num', 'exp_den'")
    unknown = sorted(set(doc) - {'num', 'den', 'exp_num', 'exp_den'})
    if unknown:
        raise ConfigError(f"{field}: unknown key(s) {', '.join(unknown)}")
    if 'num' not in doc:
        raise ConfigError(f"{field}.num: missing")
    num = _coefficients(doc['num'], f"{field}.num")
    den = _coefficients(doc.get('den', [1.0]), f"{field}.den")
    exp_num = _coefficients(doc.get('exp_num', [0.0]), f"{field}.exp_num")
    exp_den = _coefficients(doc.get('exp_den', [1.0]), f"{field}.exp_den")
    if all(c == 0 for c in den):
        raise ConfigError(f"{field}.den: denominator is identically zero")
    if all(c == 0 for c in exp_den):
        raise ConfigError(f"{field}.exp_den: denominator is identically zero")
    return MeroExpr.from_coeffs(num, den, exp_num, exp_den)


def _number(doc: Dict[str, Any], key: str, field: str, default: Optional[float] = None) -> float:
    if key not in doc:
        if default is None:
            raise ConfigError(f"{field}.{key}: missing")
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{field}.{key}: expected a number, got {value!r}")
    return float(value)


def parse_region(doc: Any, field: str = 'search_region') -> SearchRegion:
    if not isinstance(doc, dict):
        raise ConfigError(f"{field}: expected an object")
    defaults = SearchRegion()
    try:
        center = decode_complex(doc.get('center', [0.0, 0.0]))
        if center is INF:
            raise ValueError("center must be finite")
        return SearchRegion(
            r_min=_number(doc, 'r_min', field, defaults.r_min),
            r_max=_number(doc, 'r_max', field, defaults.r_max),
            theta_min=_number(doc, 'theta_min', field, defaults.theta_min),
            theta_max=_number(doc, 'theta_max', field, defaults.theta_max),
            resolution=int(_number(doc, 'resolution', field, defaults.resolution)),
            center=complex(center),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{field}: {exc}")


def parse_schedule(doc: Any, data: WeierstrassData, field: str = 'contour_schedule') -> AnnulusSpec:
    """[{point, radii}, ...] replacing the default schedule at the listed ends"""
    if not isinstance(doc, list):
        raise ConfigError(f"{field}: expected a list of {{point, radii}} objects")
    default = AnnulusSpec.default(data)
    overrides: Dict[int, List[float]] = {}
    for k, entry in enumerate(doc):
        where = f"{field}[{k}]"
        if not isinstance(entry, dict) or 'point' not in entry or 'radii' not in entry:
            raise ConfigError(f"{where}: expected an object with 'point' and 'radii'")
        try:
            point = decode_complex(entry['point'])
        except ValueError as exc:
            raise ConfigError(f"{where}.point: {exc}")
        index = next((i for i, (p, _) in enumerate(default.ends) if same_point(p, point)), None)
        if index is None:
            raise ConfigError(f"{where}.point: {format_point(point)} is not a puncture")
        radii = entry['radii']
        if not isinstance(radii, list) or not radii or not all(
                isinstance(r, (int, float)) and not isinstance(r, bool) and r > 0 for r in radii):
            raise ConfigError(f"{where}.radii: expected a non-empty list of positive numbers")
        overrides[index] = [float(r) for r in radii]
    ends = [(p, overrides.get(i, radii)) for i, (p, radii) in enumerate(default.ends)]
    try:
        return AnnulusSpec(ends=ends, phi_poles=default.phi_poles, psi_poles=default.psi_poles)
    except ValueError as exc:
        raise ConfigError(f"{field}: {exc}")


def parse_config(document: Any) -> Tuple[WeierstrassData, Optional[SearchRegion], Optional[AnnulusSpec]]:
    """
    Build Weierstrass data (plus optional search region and contour schedule) from a config document

    Raises:
        ConfigError: with the offending field in the message
    """
    if not isinstance(document, dict):
        raise ConfigError("config: expected a JSON object at the top level")
    for key in ('domain', 'phi', 'psi', 'dh'):
        if key not in document:
            raise ConfigError(f"{key}: missing")
    domain = document['domain']
    if not isinstance(domain, dict) or not isinstance(domain.get('punctures'), list):
        raise ConfigError("domain.punctures: expected a list of [re, im] pairs or \"inf\"")
    punctures: List[ExtComplex] = []
    for k, p in enumerate(domain['punctures']):
        try:
            punctures.append(decode_complex(p))
        except ValueError as exc:
            raise ConfigError(f"domain.punctures[{k}]: {exc}")
    involution = document.get('involution', False)
    if not isinstance(involution, bool):
        raise ConfigError(f"involution: expected true or false, got {involution!r}")
    name = document.get('name', 'custom')
    if not isinstance(name, str):
        raise ConfigError("name: expected a string")
    phi = parse_expr(document['phi'], 'phi')
    psi = parse_expr(document['psi'], 'psi')
    dh = parse_expr(document['dh'], 'dh')
    try:
        data = make_data(phi, psi, dh, punctures, has_involution=involution, name=name)
    except WeierstrassDataError as exc:
        raise ConfigError(f"phi/psi/dh: {exc}")
    region = parse_region(document['search_region']) if 'search_region' in document else None
    schedule = parse_schedule(document['contour_schedule'], data) if 'contour_schedule' in document else None
    return data, region, schedule


def load_config(path: Path) -> Tuple[Dict[str, Any], WeierstrassData, Optional[SearchRegion], Optional[AnnulusSpec]]:
    try:
        document = load_from_json(path)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    data, region, schedule = parse_config(document)
    return document, data, region, schedule


def _encode_poly(p: CPoly) -> List[Any]:
    return [encode_complex(complex(c)) for c in p.coeffs]


def _encode_expr(f: MeroExpr) -> Dict[str, Any]:
    doc: Dict[str, Any] = {'num': _encode_poly(f.num), 'den': _encode_poly(f.den)}
    if not f.is_algebraic:
        doc['exp_num'] = _encode_poly(f.exp_num)
        doc['exp_den'] = _encode_poly(f.exp_den)
    return doc


def data_to_config(data: WeierstrassData, region: Optional[SearchRegion] = None) -> Dict[str, Any]:
    """Config document that parses back to the same data"""
    document: Dict[str, Any] = {
        'name': data.name,
        'domain': {'punctures': [encode_complex(p) for p in data.punctures]},
        'phi': _encode_expr(data.phi),
        'psi': _encode_expr(data.psi),
        'dh': _encode_expr(data.dh),
        'involution': data.has_involution,
    }
    if region is not None:
        document['search_region'] = region.to_dict()
    return document


# ============= ANALYSIS =============

def _section(passed: Optional[bool]) -> Dict[str, Optional[bool]]:
    return {'passed': passed}


def analyze_data(data: WeierstrassData, region: Optional[SearchRegion] = None,
                 schedule: Optional[AnnulusSpec] = None, document: Optional[Dict[str, Any]] = None,
                 expected: Optional[ExampleSpec] = None) -> Dict[str, Any]:
    """
    Run every analysis on one datum and assemble the report document

    Returns:
        Report dictionary with a deterministic key order; report['passed']
        is the overall verdict
    """
    admissibility = check_admissibility(data)
    periods = check_periods(data)
    regularity = search_singular_points(data, region)
    curvature = global_identity_report(data, schedule)
    completeness = [completeness_check(data, p) for p in data.punctures]
    involution = involution_check(data) if data.has_involution else None

    checks: Dict[str, Dict[str, Optional[bool]]] = {
        'admissibility': _section(admissibility.passed),
        'periods': _section(periods.passed),
        'regularity': _section(regularity.passed),
        'curvature': _section(curvature.passed),
        'completeness': _section(all(v.complete for v in completeness)),
        'involution': _section(involution.passed if involution is not None else None),
    }
    report: Dict[str, Any] = {
        'tool': TOOL_NAME,
        'version': __version__,
        'config_hash': config_hash(document if document is not None else data_to_config(data)),
        'name': data.name,
        'passed': all(section['passed'] is not False for section in checks.values()),
        'checks': checks,
        'summary': weierstrass_summary(data),
        'topology': surface_topology(data).to_dict(),
        'admissibility': admissibility.to_dict(),
        'periods': periods.to_dict(),
        'regularity': regularity.to_dict(),
        'curvature': curvature.to_dict(),
        'completeness': [v.to_dict() for v in completeness],
        'involution': involution.to_dict() if involution is not None else None,
    }
    if expected is not None:
        report['expected'] = expected.to_dict()
    return report


def _write_report(report: Dict[str, Any], out: Optional[str], default_name: str) -> Path:
    path = Path(out) if out else Path(RUNTIME.output_dir) / default_name
    export_to_json(report, path)
    logger.info(f"Report written to {path}")
    return path


def _verdict(report: Dict[str, Any]) -> int:
    return EXIT_OK if report['passed'] else EXIT_CHECKS_FAILED


# ============= SUBCOMMANDS =============

def cmd_analyze(args: argparse.Namespace) -> int:
    document, data, region, schedule = load_config(Path(args.config))
    report = analyze_data(data, region, schedule, document)
    _write_report(report, args.out, f"{data.name}_report.json")
    print_report_summary(report)
    return _verdict(report)


def _parse_grid(text: str) -> Tuple[int, int]:
    try:
        radial, angular = (int(part) for part in text.lower().split('x'))
    except ValueError:
        raise ConfigError(f"--grid: expected RxA such as 32x64, got {text!r}")
    if radial < 2 or angular < 3:
        raise ConfigError("--grid: need at least 2 radii and 3 angles")
    return radial, angular


def cmd_mesh(args: argparse.Namespace) -> int:
    _, data, _, _ = load_config(Path(args.config))
    n_radii, n_angles = _parse_grid(args.grid) if args.grid else IMMERSION.default_grid
    r_min, r_max = args.radii if args.radii else IMMERSION.default_radii
    try:
        grid = PolarGrid.regular(r_min, r_max, n_radii, n_angles)
        mesh = immerse_grid(data, grid)
    except ValueError as exc:
        raise ConfigError(f"--radii: {exc}")
    prefix = args.out or str(Path(RUNTIME.output_dir) / f"{data.name}_mesh")
    paths = export_mesh(mesh, prefix)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return EXIT_OK


def _region_from_args(values: Optional[Sequence[float]]) -> SearchRegion:
    if not values:
        return SearchRegion()
    if len(values) not in (2, 4):
        raise ConfigError("--region: expected r_min r_max [theta_min theta_max]")
    try:
        if len(values) == 2:
            return SearchRegion(r_min=values[0], r_max=values[1])
        return SearchRegion(r_min=values[0], r_max=values[1], theta_min=values[2], theta_max=values[3])
    except ValueError as exc:
        raise ConfigError(f"--region: {exc}")


def cmd_locus(args: argparse.Namespace) -> int:
    _, data, region, _ = load_config(Path(args.config))
    if args.region:
        region = _region_from_args(args.region)
    region = region or SearchRegion()
    # |φ| = |conj ψ|; δ crossing 2πk marks a candidate solution of φ = conj ψ
    left = MixedTerm(data.phi)
    right = MixedTerm(MeroExpr.constant(1.0), data.psi)
    curves = trace_equal_module_locus(left, right, region)
    path = write_table(locus_frame(curves), args.out or Path(RUNTIME.output_dir) / f"{data.name}_locus.csv")
    print(f"{len(curves)} component(s) written to {path}")
    for k, curve in enumerate(curves):
        for z, turns in curve.crossings():
            print(f"  component {k}: delta = {turns}·2π at {format_point(z)}")
    return EXIT_OK


def parse_param(text: str) -> Tuple[str, Any]:
    """k=v with v an integer, a real, or a complex written like -1+0.5i"""
    if '=' not in text:
        raise ConfigError(f"--param: expected name=value, got {text!r}")
    key, raw = (part.strip() for part in text.split('=', 1))
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            pass
    try:
        return key, complex(raw.replace('i', 'j').replace(' ', ''))
    except ValueError:
        raise ConfigError(f"--param {key}: cannot read {raw!r} as a number")


def cmd_gallery(args: argparse.Namespace) -> int:
    params = dict(parse_param(p) for p in (args.param or []))
    example = make_example(args.family, validate=not args.no_validate, **params)
    if args.emit == 'config':
        path = Path(args.out) if args.out else Path(RUNTIME.output_dir) / f"{args.family}.json"
        export_to_json(data_to_config(example.data), path)
        print(f"config: {path}")
        return EXIT_OK
    document = data_to_config(example.data)
    report = analyze_data(example.data, document=document, expected=example)
    _write_report(report, args.out, f"{args.family}_report.json")
    print_report_summary(report)
    print(f"expected total K: {format_pi_multiple(example.expected_total_K)}")
    return _verdict(report)


def cmd_lemma_a1(args: argparse.Namespace) -> int:
    ms = args.m or [1, 2, 3]
    ts = args.t if args.t is not None else [0.0, np.pi / 5, np.pi / 2]
    rows = lemma_a1_sweep(ms, ts, reduced_a_grid(args.a_grid), progress=True)
    frame = _flatten_rows(rows)
    path = write_table(frame, args.out or Path(RUNTIME.output_dir) / 'lemma_a1.csv')
    failures = [r for r in rows if r['status'] != 'witness']
    print(f"{len(rows) - len(failures)}/{len(rows)} cells have a witness; table written to {path}")
    return EXIT_OK if not failures else EXIT_CHECKS_FAILED


def _flatten_rows(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    flat = []
    for row in rows:
        z = row['z'] or [None, None]
        flat.append({
            'm': row['m'], 't': row['t'],
            'a_re': row['a'][0], 'a_im': row['a'][1], 'b_re': row['b'][0], 'b_im': row['b'][1],
            'status': row['status'], 'z_re': z[0], 'z_im': z[1],
            'residual': row['residual'], 'lemma_residual': row['lemma_residual'],
        })
    return pd.DataFrame(flat)


def cmd_lemma_a2(args: argparse.Namespace) -> int:
    values = args.a or [-1.01, -2.0, -10.0]
    try:
        verdicts = [lemma_a2_check(a) for a in values]
    except LemmaPreconditionError as exc:
        raise ConfigError(f"--a: {exc}")
    for v in verdicts:
        print(f"a={v.a:g}: {v.verdict} (margins {', '.join(f'{m:.6g}' for m in v.margins)})")
    if args.out:
        export_to_json({'tool': TOOL_NAME, 'version': __version__,
                        'verdicts': [v.to_dict() for v in verdicts]}, args.out)
    return EXIT_OK if all(v.no_solution for v in verdicts) else EXIT_CHECKS_FAILED


# ============= PARSER =============

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='stationary', description='Analyze stationary surfaces in R^4_1 '
                                     'given by Weierstrass data (phi, psi, dh).')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', help='Run every check on a config and write a JSON report')
    p.add_argument('config')
    p.add_argument('--out', help='Report path')
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('mesh', help='Sample the immersion on a polar grid and export CSV and OBJ')
    p.add_argument('config')
    p.add_argument('--grid', help='RxA radial by angular samples, e.g. 32x64')
    p.add_argument('--radii', nargs=2, type=float, metavar=('R_MIN', 'R_MAX'))
    p.add_argument('--out', help='Output prefix')
    p.set_defaults(handler=cmd_mesh)

    p = sub.add_parser('locus', help='Trace the curve |phi| = |psi| and write it as CSV')
    p.add_argument('config')
    p.add_argument('--region', nargs='+', type=float, metavar='R',
                   help='r_min r_max [theta_min theta_max]')
    p.add_argument('--out', help='CSV path')
    p.set_defaults(handler=cmd_locus)

    p = sub.add_parser('gallery', help='Build a named example and emit its config or analysis')
    p.add_argument('family', choices=sorted(FAMILIES))
    p.add_argument('--param', nargs='+', action='extend', metavar='K=V')
    p.add_argument('--emit', choices=('config', 'analyze'), default='config')
    p.add_argument('--out', help='Output path')
    p.add_argument('--no-validate', action='store_true', help='Skip the family parameter predicate')
    p.set_defaults(handler=cmd_gallery)

    p = sub.add_parser('lemma-a1', help='Sweep the Case-5 existence witness over m, t and a')
    p.add_argument('--m', nargs='+', type=int)
    p.add_argument('--t', nargs='+', type=float)
    p.add_argument('--a-grid', type=int, default=5, help='Number of reduced a values')
    p.add_argument('--out', help='CSV path')
    p.set_defaults(handler=cmd_lemma_a1)

    p = sub.add_parser('lemma-a2', help='Check that a = b real with -a > 1 gives no singular point')
    p.add_argument('--a', nargs='+', type=float)
    p.add_argument('--out', help='JSON path')
    p.set_defaults(handler=cmd_lemma_a2)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one subcommand and map the outcome to an exit status

    Returns:
        0 all checks pass, 1 some check failed, 2 config or precondition
        error, 3 internal error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else RUNTIME.numeric_level())
    try:
        return args.handler(args)
    except (ConfigError, GalleryParameterError, WeierstrassDataError, LemmaPreconditionError) as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
