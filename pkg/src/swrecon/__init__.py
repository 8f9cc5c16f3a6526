"""Well-balanced, positivity-preserving finite volume shallow water schemes."""

__version__ = "0.1.0"

from .mesh import Grid, GridError, bed_stats, build_grid, uniform_grid, width_stats  # noqa: E402
from .limiter import SlopeParams, minmod, slope, tvd_envelope_holds  # noqa: E402
from .wbrecon import (  # noqa: E402
    proof_diagnostics,
    reconstruct_area_width,
    reconstruct_concentration,
    reconstruct_depth,
    reconstruct_flux,
    velocity_bound,
)
from .solver import SolverError, SystemKind, rhs  # noqa: E402
from .stepper import integrate, ssp_rk2  # noqa: E402
from .exact import dam_break  # noqa: E402
from .config import ConfigError, ScenarioConfig, parse_config  # noqa: E402
from .estimators import DepthReconstructor, ShallowWaterSolver  # noqa: E402

__all__ = [
    "Grid", "GridError", "bed_stats", "build_grid", "uniform_grid", "width_stats",
    "SlopeParams", "minmod", "slope", "tvd_envelope_holds",
    "proof_diagnostics", "reconstruct_area_width", "reconstruct_concentration",
    "reconstruct_depth", "reconstruct_flux", "velocity_bound",
    "SolverError", "SystemKind", "rhs", "integrate", "ssp_rk2", "dam_break",
    "ConfigError", "ScenarioConfig", "parse_config",
    "DepthReconstructor", "ShallowWaterSolver",
]
