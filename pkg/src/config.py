"""
Configuration management for the stationary surface toolkit
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from dotenv import load_dotenv


@dataclass
class ToleranceConfig:
    """Numerical tolerances shared by every module"""
    cluster_radius: float = 1e-8  # roots closer than this are one root
    cluster_merge_radius: float = 1e-4  # wider merge, accepted only if derivatives vanish
    derivative_confirm: float = 1e-6
    coefficient_trim: float = 1e-12
    order_detection: float = 1e-10
    point_match: float = 1e-7
    residue: float = 1e-10
    period: float = 1e-10
    mixed_residual: float = 1e-9
    mixed_magnitude_floor: float = 1e-100  # |φ| + |ψ| below this cannot certify φ = conj ψ
    dedup_radius: float = 1e-6
    newton_step: float = 1e-12
    newton_max_iter: int = 50
    regular_gap: float = 1e-8  # |φ(p) - conj ψ(p)| below this is a singular end
    involution: float = 1e-12


@dataclass
class QuadratureConfig:
    """Periodic trapezoid and adaptive Gauss settings"""
    start_nodes: int = 64
    max_nodes: int = 2 ** 20
    curvature_tol: float = 1e-8
    residue_tol: float = 1e-12
    residue_start_nodes: int = 16
    residue_max_nodes: int = 2 ** 16
    path_tol: float = 1e-10
    loop_tol: float = 1e-11


@dataclass
class SearchConfig:
    """Default search region for the mixed equation φ = conj ψ"""
    r_min: float = 1e-3
    r_max: float = 1e3
    theta_min: float = 0.0
    theta_max: float = 2 * 3.141592653589793
    seeds_per_decade: int = 64
    angular_seeds: int = 64
    pole_clearance: float = 1e-6


@dataclass
class LocusConfig:
    """Predictor-corrector continuation of the equal-module locus"""
    initial_step_fraction: float = 1e-2
    max_step_growth: float = 10.0
    step_floor: float = 1e-8
    corrector_iterations: int = 8
    corrector_tol: float = 1e-11
    max_steps: int = 20000
    closure_fraction: float = 0.5
    seeds_per_decade: int = 64
    angular_seeds: int = 64


@dataclass
class ContourConfig:
    """Radius schedules approaching each end"""
    algebraic_outer: List[float] = field(default_factory=lambda: [1e2, 1e3, 1e4])
    algebraic_inner: List[float] = field(default_factory=lambda: [1e-2, 1e-3, 1e-4])
    essential_factor: float = 10.0
    essential_steps: int = 5
    essential_start: float = 10.0
    interior_radii: List[float] = field(default_factory=lambda: [1e-3, 1e-4, 1e-5])
    compact_outer: float = 1e6
    radius_nudge: float = 1.1


@dataclass
class ImmersionConfig:
    """Grid and sampling settings for the immersion"""
    default_grid: Tuple[int, int] = (32, 64)
    default_radii: Tuple[float, float] = (0.2, 5.0)
    involution_samples: int = 100
    involution_seed: int = 7


@dataclass
class CompletenessConfig:
    """Ray integration toward ends whose completeness pole orders cannot decide"""
    ray_count: int = 8
    ray_decades: int = 8
    divergence_factor: float = 1e6


@dataclass
class RuntimeConfig:
    """Process-level settings read from the environment"""
    log_level: str = 'INFO'
    output_dir: str = 'data'

    @classmethod
    def from_env(cls):
        """Load configuration from environment variables (and a .env file if present)"""
        load_dotenv()
        return cls(
            log_level=os.getenv('STATIONARY_LOG_LEVEL', 'INFO').upper(),
            output_dir=os.getenv('STATIONARY_OUTPUT_DIR', 'data')
        )

    def numeric_level(self) -> int:
        """Logging level as an int, INFO when the name is unknown"""
        return getattr(logging, self.log_level, logging.INFO)


# Global configuration instances
TOLERANCES = ToleranceConfig()
QUADRATURE = QuadratureConfig()
SEARCH = SearchConfig()
LOCUS = LocusConfig()
CONTOUR = ContourConfig()
IMMERSION = ImmersionConfig()
COMPLETENESS = CompletenessConfig()
RUNTIME = RuntimeConfig.from_env()


def validate_config() -> Dict[str, bool]:
    """Validate all configurations"""
    validations = {
        'tolerances': 0 < TOLERANCES.cluster_radius < TOLERANCES.cluster_merge_radius,
        'quadrature': QUADRATURE.start_nodes < QUADRATURE.max_nodes,
        'search': 0 < SEARCH.r_min < SEARCH.r_max and SEARCH.theta_min < SEARCH.theta_max,
        'locus': 0 < LOCUS.step_floor < LOCUS.initial_step_fraction,
        'contour': (CONTOUR.essential_factor > 1 and CONTOUR.essential_steps > 0
                    and CONTOUR.interior_radii == sorted(CONTOUR.interior_radii, reverse=True)),
        'immersion': IMMERSION.default_radii[0] < IMMERSION.default_radii[1],
        'completeness': COMPLETENESS.ray_count > 0 and COMPLETENESS.divergence_factor > 1,
    }
    return validations


def print_config_summary():
    """Print configuration summary for debugging"""
    print("=" * 60)
    print("STATIONARY SURFACE TOOLKIT - CONFIGURATION SUMMARY")
    print("=" * 60)
    print("\n[Tolerances]")
    print(f"  Root cluster radius: {TOLERANCES.cluster_radius:g}")
    print(f"  Period tolerance: {TOLERANCES.period:g}")
    print(f"  Mixed residual: {TOLERANCES.mixed_residual:g}")
    print("\n[Quadrature]")
    print(f"  Trapezoid nodes: {QUADRATURE.start_nodes} .. {QUADRATURE.max_nodes}")
    print(f"  Curvature tolerance: {QUADRATURE.curvature_tol:g}")
    print("\n[Search region]")
    print(f"  Annulus: [{SEARCH.r_min:g}, {SEARCH.r_max:g}]")
    print(f"  Seeds: {SEARCH.seeds_per_decade}/decade x {SEARCH.angular_seeds} angles")
    print("\n[Contours]")
    print(f"  Algebraic outer radii: {CONTOUR.algebraic_outer}")
    print(f"  Essential schedule: x{CONTOUR.essential_factor:g}, {CONTOUR.essential_steps} steps")
    print(f"  Interior pole radii: {CONTOUR.interior_radii}")
    print("\n[Completeness]")
    print(f"  Rays: {COMPLETENESS.ray_count} over {COMPLETENESS.ray_decades} decades, "
          f"divergence factor {COMPLETENESS.divergence_factor:g}")
    print("\n[Runtime]")
    print(f"  Log level: {RUNTIME.log_level}")
    print(f"  Output dir: {RUNTIME.output_dir}")
    print("=" * 60)


if __name__ == "__main__":
    print_config_summary()
    validations = validate_config()
    for name, ok in validations.items():
        print(f"  {name}: {'OK' if ok else 'INVALID'}")
