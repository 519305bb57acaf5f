"""
Utility functions for the stationary surface toolkit

JSON and CSV helpers shared by the CLI, the gallery scripts and the tests.
"""
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from src.complexkit import INF, ExtComplex


def encode_complex(value: ExtComplex) -> Union[str, list]:
    """[re, im] for finite values, the literal "inf" for the point at infinity"""
    if value is INF:
        return 'inf'
    z = complex(value)
    return [z.real, z.imag]


def decode_complex(value: Any) -> ExtComplex:
    """
    Inverse of encode_complex; bare numbers are accepted as real values

    Raises:
        ValueError: when the value is neither a number, a pair nor "inf"
    """
    if isinstance(value, str):
        if value.strip().lower() == 'inf':
            return INF
        raise ValueError(f"expected [re, im] or \"inf\", got {value!r}")
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected [re, im] or \"inf\", got {value!r}")


def to_jsonable(obj: Any) -> Any:
    """
    Recursively convert numpy scalars, complex numbers and INF into JSON values

    Non-finite floats become the strings "inf", "-inf" and "nan" so that the
    output stays strict JSON.
    """
    if obj is INF:
        return 'inf'
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(complex(obj).real), to_jsonable(complex(obj).imag)]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def export_to_json(data: Dict, filepath: Union[str, Path], pretty: bool = True):
    """
    Export dictionary to JSON file

    Key order is preserved, so equal inputs give byte-identical files.

    Args:
        data: Dictionary to export
        filepath: Output file path
        pretty: Whether to pretty-print JSON
    """
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(to_jsonable(data), f, indent=2 if pretty else None, allow_nan=False)
        f.write('\n')


def load_from_json(filepath: Union[str, Path]) -> Dict:
    """
    Load dictionary from JSON file

    Args:
        filepath: Input file path

    Returns:
        Dictionary from JSON
    """
    with open(filepath, 'r') as f:
        return json.load(f)


def config_hash(document: Dict) -> str:
    """sha256 of the canonical (sorted-key, compact) JSON form of a config document"""
    canonical = json.dumps(to_jsonable(document), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def write_table(df: pd.DataFrame, filepath: Union[str, Path]) -> Path:
    """Write a DataFrame as CSV without the index"""
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    return path


def read_table(filepath: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV written by write_table, reproducing floats exactly"""
    return pd.read_csv(filepath, float_precision='round_trip')


def format_pi_multiple(value: Optional[float], tol: float = 1e-6) -> str:
    """
    Format a total curvature as a multiple of π when it is one

    Args:
        value: Real number (None prints as N/A)
        tol: Absolute tolerance on the multiple

    Returns:
        Strings like '-4π', '6π' or '-12.5664'
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'N/A'
    k = value / math.pi
    nearest = round(k)
    if abs(k - nearest) <= tol:
        if nearest == 0:
            return '0'
        if nearest == 1:
            return 'π'
        if nearest == -1:
            return '-π'
        return f"{nearest}π"
    return f"{value:.6g}"


def print_report_summary(report: Dict[str, Any]):
    """
    Print summary of an analysis report

    Args:
        report: Report dictionary as written by the `analyze` command
    """
    print("=" * 60)
    print(f"ANALYSIS SUMMARY: {report.get('name', 'custom')}")
    print("=" * 60)
    for section, body in report.get('checks', {}).items():
        status = 'PASS' if body.get('passed') else ('N/A' if body.get('passed') is None else 'FAIL')
        print(f"  {section:<24} {status}")
    curvature = report.get('curvature') or {}
    if curvature:
        print("\n[Total curvature]")
        print(f"  exact:   {format_pi_multiple(curvature.get('exact_total_K'))}")
        print(f"  numeric: {format_pi_multiple(curvature.get('numeric_total_K'))}")
    print("\n" + "=" * 60)


if __name__ == "__main__":
    print("Testing utility functions...")
    print(f"\nencode_complex(1-2j) = {encode_complex(1 - 2j)}")
    print(f"decode_complex('inf') = {decode_complex('inf')!r}")
    print(f"format_pi_multiple(-4π) = {format_pi_multiple(-4 * math.pi)}")
    print(f"config_hash({{'a': 1}}) = {config_hash({'a': 1})[:16]}...")
