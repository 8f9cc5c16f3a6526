"""Scenario configuration: ``key = value`` text with ``#`` comments."""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field, fields
from typing import Optional, Tuple

SCENARIOS = (
    "lake_at_rest", "dam_break", "draining_slope",
    "particle_current", "comparison_sweep", "convergence_study",
)
SCHEMES = ("blended", "kurganov_levy", "chertock", "bollermann")


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


@dataclass
class ScenarioConfig:
    """Fully resolved run description.

    ``None`` values are filled with scenario-specific defaults by
    :func:`resolve_defaults`.
    """

    scenario: str = ""
    J: int = 100
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    bed: Optional[str] = None
    bed_amplitude: Optional[float] = None
    bed_csv: Optional[str] = None
    system: Optional[str] = None
    gravity: float = 9.81
    g_particle: float = 1.0
    g_ambient: float = 0.0
    settling: float = 0.0
    width_left: float = 1.0
    width_right: float = 1.0
    width_cutoff: bool = False
    t_end: Optional[float] = None
    n_steps: Optional[int] = None
    nu: float = 0.45
    boundary: Optional[str] = None
    eta: Optional[float] = None
    h_left: float = 1.0
    h_right: float = 0.5
    x_dam: Optional[float] = None
    phi: float = 1.0
    scheme: str = "blended"
    sweep_step: float = 1.0 / 64.0
    sweep_max: float = 7.0 / 3.0
    alpha_side: float = 0.75
    alpha_center: float = 0.25
    gain: Optional[float] = None
    K: float = 100.0
    froude: Optional[float] = None
    frames: int = 11
    energy: bool = False
    J_list: Tuple[int, ...] = field(default=(100, 200, 400))

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_BOOL = {"true": True, "yes": True, "1": True, "on": True,
         "false": False, "no": False, "0": False, "off": False}


def _convert(name: str, raw: str, default):
    raw = raw.strip()
    ftype = {f.name: f.type for f in fields(ScenarioConfig)}[name]
    try:
        if "bool" in str(ftype):
            return _BOOL[raw.lower()]
        if "Tuple" in str(ftype):
            return tuple(int(v) for v in raw.replace(",", " ").split())
        if "int" in str(ftype):
            return int(raw)
        if "float" in str(ftype):
            if "/" in raw:
                num, den = raw.split("/")
                return float(num) / float(den)
            return float(raw)
        return raw
    except (KeyError, ValueError):
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def parse_config(text: str, overrides: Optional[dict] = None) -> ScenarioConfig:
    """Parse configuration text and apply ``overrides`` (strings) on top.

    Raises
    ------
    ConfigError
        Unknown key, malformed or out-of-range value, or missing scenario.
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + (text or ""))
    except configparser.Error as err:
        raise ConfigError(f"cannot parse configuration: {err}") from None
    items = dict(parser["run"])
    items.update(overrides or {})
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = sorted(set(items) - known)
    if unknown:
        raise ConfigError(f"unknown key: {', '.join(unknown)}")
    cfg = ScenarioConfig()
    for key, raw in items.items():
        setattr(cfg, key, _convert(key, raw, getattr(cfg, key)))
    validate(cfg)
    return resolve_defaults(cfg)


def validate(cfg: ScenarioConfig) -> None:
    if not cfg.scenario:
        raise ConfigError("missing scenario")
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}")
    if cfg.J < 4:
        raise ConfigError("J must be at least 4")
    if not cfg.nu > 0:
        raise ConfigError("Courant number must be positive")
    if cfg.nu > 0.5:
        raise ConfigError("Courant number must be ≤ 0.5")
    if cfg.t_end is not None and cfg.t_end < 0:
        raise ConfigError("end time must be nonnegative")
    if cfg.n_steps is not None and cfg.n_steps < 0:
        raise ConfigError("n_steps must be nonnegative")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {cfg.scheme!r}")
    if cfg.scheme != "blended" and cfg.scenario != "comparison_sweep":
        raise ConfigError("alternative schemes are only available for comparison_sweep")
    if cfg.system is not None and cfg.system not in ("plain", "width", "particle"):
        raise ConfigError(f"unknown system {cfg.system!r}")
    if cfg.boundary is not None and cfg.boundary not in ("wall", "outflow"):
        raise ConfigError(f"unknown boundary {cfg.boundary!r}")
    if not 0 < cfg.sweep_step <= 1:
        raise ConfigError("sweep_step must be in (0, 1]")
    if cfg.gravity <= 0 or cfg.g_particle <= 0 or cfg.g_ambient < 0 or cfg.settling < 0:
        raise ConfigError("gravities must be positive, g_ambient and settling nonnegative")
    if cfg.width_left < 0 or cfg.width_right < 0 or cfg.width_left + cfg.width_right <= 0:
        raise ConfigError("widths must be nonnegative with positive mean")
    if cfg.frames < 2:
        raise ConfigError("frames must be at least 2")
    if any(j < 4 for j in cfg.J_list) or not cfg.J_list:
        raise ConfigError("J_list entries must be at least 4")


_DEFAULTS = {
    "lake_at_rest": dict(x_min=0.0, x_max=1.0, bed="bump", bed_amplitude=0.3, system="plain",
                         boundary="wall", eta=1.0, n_steps=1000),
    "dam_break": dict(x_min=-1.0, x_max=1.0, bed="flat", bed_amplitude=0.0, system="plain",
                      boundary="outflow", t_end=0.1, x_dam=0.0),
    "draining_slope": dict(x_min=0.0, x_max=2.0, bed="basin_slope", bed_amplitude=0.5, system="plain",
                           boundary="wall", eta=0.2, t_end=1.0),
    "particle_current": dict(x_min=0.0, x_max=4.0, bed="flat", bed_amplitude=0.0, system="particle",
                             boundary="wall", t_end=2.0, x_dam=0.5),
    "comparison_sweep": dict(x_min=-3.5, x_max=3.5, bed="linear", bed_amplitude=1.0, system="plain",
                             boundary="outflow"),
    "convergence_study": dict(x_min=-1.0, x_max=1.0, bed="flat", bed_amplitude=0.0, system="plain",
                              boundary="outflow", t_end=0.1, x_dam=0.0),
}


def resolve_defaults(cfg: ScenarioConfig) -> ScenarioConfig:
    """Fill unset values with the scenario's defaults."""
    for key, value in _DEFAULTS[cfg.scenario].items():
        if getattr(cfg, key) is None:
            setattr(cfg, key, value)
    if cfg.x_max <= cfg.x_min:
        raise ConfigError("x_max must exceed x_min")
    return cfg
