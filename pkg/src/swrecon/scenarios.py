"""Scenario library and batch runner behind the command line tool."""

from __future__ import annotations

import os
import platform
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .altrecon import bollermann, chertock, kurganov_levy
from .config import ScenarioConfig
from .exact import dam_break
from .mesh import Grid, bed_stats, build_grid, width_stats
from .output import emit_svg, read_csv_columns, write_csv, write_json
from .solver import SystemKind, reconstruct_state
from .stepper import integrate
from .wbrecon import _divide_or_zero, pad, reconstruct_depth, velocity_bound


def grid_params(cfg: ScenarioConfig) -> dict:
    return dict(alpha_minus=cfg.alpha_side, alpha_plus=cfg.alpha_side, alpha_center=cfg.alpha_center,
                gain=cfg.gain, K_minus=cfg.K, K_plus=cfg.K, froude=cfg.froude, gravity=cfg.gravity)


def bed_profile(name: str, amplitude: float, x_min: float, x_max: float):
    """Named bed shapes as callables of ``x``."""
    L = x_max - x_min
    mid = 0.5 * (x_min + x_max)
    if name == "flat":
        return lambda x: np.zeros_like(x)
    if name == "bump":
        return lambda x: amplitude * np.exp(-((x - mid) / (0.1 * L)) ** 2)
    if name == "linear":
        return lambda x: amplitude * x
    if name == "basin_slope":
        return lambda x: amplitude * np.maximum(x - mid, 0.0)
    raise ValueError(f"unknown bed profile {name!r}")


def build_geometry(cfg: ScenarioConfig, J: Optional[int] = None):
    """Grid, bed and (for the width system) channel geometry of a scenario."""
    if cfg.bed_csv:
        cols = read_csv_columns(cfg.bed_csv)
        x = cols["x"]
        grid = build_grid(x, grid_params(cfg))
        if "b_left" in cols:
            bed = bed_stats(np.vstack([cols["b_left"], cols["b_right"]]), grid)
        else:
            bed = bed_stats(cols["b"], grid)
    else:
        grid = build_grid(np.linspace(cfg.x_min, cfg.x_max, (J or cfg.J) + 1), grid_params(cfg))
        bed = bed_stats(bed_profile(cfg.bed, cfg.bed_amplitude, cfg.x_min, cfg.x_max), grid)
    width = None
    if cfg.system == "width":
        x = grid.interfaces
        s = (x - x[0]) / (x[-1] - x[0])
        width = width_stats(cfg.width_left + s * (cfg.width_right - cfg.width_left), grid)
    return grid, bed, width


def system_of(cfg: ScenarioConfig) -> SystemKind:
    return SystemKind(cfg.system, g_particle=cfg.g_particle, g_ambient=cfg.g_ambient,
                      settling=cfg.settling, width_cutoff=cfg.width_cutoff)


def initial_state(cfg: ScenarioConfig, grid: Grid, bed, width, system: SystemKind) -> np.ndarray:
    x = grid.centers
    b = bed.b_cell
    if cfg.scenario == "lake_at_rest":
        h = np.maximum(cfg.eta - b, 0.0)
    elif cfg.scenario in ("dam_break", "convergence_study"):
        h = np.where(x < cfg.x_dam, cfg.h_left, cfg.h_right)
    elif cfg.scenario == "draining_slope":
        film = 0.25 * cfg.eta
        h = np.maximum(cfg.eta - b, film)
    elif cfg.scenario == "particle_current":
        h = np.where(x < cfg.x_dam, cfg.h_left, 0.0)
    else:
        raise ValueError(f"scenario {cfg.scenario!r} has no time evolution")
    if system.kind == "width":
        return np.vstack([h * width.w_cell, np.zeros_like(h)])
    if system.kind == "particle":
        return np.vstack([h, cfg.phi * h, np.zeros_like(h)])
    return np.vstack([h, np.zeros_like(h)])


def primitives(system: SystemKind, Q, bed, width, gravity: float) -> dict:
    """Depth, discharge, velocity, surface, concentration and energy per cell."""
    if system.kind == "width":
        A, q = Q[0], Q[1]
        h = A / width.w_cell
        u = _divide_or_zero(q, A)
    else:
        h, q = Q[0], Q[system.momentum]
        u = _divide_or_zero(q, h)
    phi = _divide_or_zero(Q[1], Q[0]) if system.kind == "particle" else None
    g = system.effective_gravity(phi if phi is not None else np.zeros_like(h), gravity)
    eta = h + bed.b_cell
    out = dict(h=h, q=q, u=u, eta=eta, E=0.5 * u * u + g * eta)
    if phi is not None:
        out["phi"] = phi
    if system.kind == "width":
        out["A"] = Q[0]
    return out


def _series_header(system: SystemKind, energy: bool):
    cols = ["time", "cell", "x_center", "h", "q", "u", "eta"]
    if system.kind == "width":
        cols.append("A")
    if system.kind == "particle":
        cols.append("phi")
    if energy:
        cols.append("E")
    return cols


def _rows(header, t, grid, prim):
    for j in range(grid.n_cells):
        row = [t, j, grid.centers[j]]
        row += [prim[c][j] for c in header[3:]]
        yield row


@dataclass
class RunArtifacts:
    paths: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def _metadata(cfg: ScenarioConfig) -> dict:
    import scipy
    return {
        "package_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "python_version": platform.python_version(),
        "config": cfg.as_dict(),
    }


def run(cfg: ScenarioConfig, out_dir: str = ".", svg: bool = False) -> RunArtifacts:
    """Execute a scenario and write its outputs into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    if cfg.scenario == "comparison_sweep":
        return run_comparison(cfg, out_dir, svg)
    if cfg.scenario == "convergence_study":
        return run_convergence(cfg, out_dir, svg)
    return run_evolution(cfg, out_dir, svg)


def run_evolution(cfg: ScenarioConfig, out_dir: str, svg: bool = False) -> RunArtifacts:
    grid, bed, width = build_geometry(cfg)
    system = system_of(cfg)
    Q0 = initial_state(cfg, grid, bed, width, system)
    art = RunArtifacts(metadata=_metadata(cfg))
    checks = {}

    callback = None
    if cfg.scenario == "draining_slope":
        checks.update(min_cell_depth=float(Q0[0].min()), velocity_bound_violations=0,
                      velocity_bound_checks=0)

        def callback(step, t, Q, report):
            checks["min_cell_depth"] = min(checks["min_cell_depth"], float(Q[0].min()))
            lo, hi, wet = draining_bound_check(grid, bed, Q, cfg.boundary)
            checks["velocity_bound_checks"] += int(wet.sum())
            checks["velocity_bound_violations"] += int((wet & ~(lo & hi)).sum())

    res = integrate(system, grid, bed, width, Q0, nu=cfg.nu, t_end=cfg.t_end, n_steps=cfg.n_steps,
                    boundary=cfg.boundary, frame_every=1, callback=callback)
    frames = _pick_frames(res, cfg.frames)

    header = _series_header(system, cfg.energy)
    rows = []
    for t, Q in frames:
        prim = primitives(system, Q, bed, width, cfg.gravity)
        rows.extend(_rows(header, t, grid, prim))
    art.paths["series"] = write_csv(os.path.join(out_dir, f"{cfg.scenario}_series.csv"), header, rows)
    final = primitives(system, res.state, bed, width, cfg.gravity)
    art.paths["final"] = write_csv(os.path.join(out_dir, f"{cfg.scenario}_final.csv"), header,
                                   _rows(header, res.time, grid, final))

    if cfg.scenario == "lake_at_rest":
        checks.update(max_eta_error=float(np.max(np.abs(final["eta"] - cfg.eta)[Q0[0] > 0], initial=0.0)),
                      max_abs_q=float(np.max(np.abs(final["q"]))))
    if cfg.scenario == "dam_break" and cfg.bed == "flat" and system.kind == "plain":
        checks["l1_relative_error"] = dam_break_error(cfg, grid, res.state[0], res.time)
    art.metadata.update(steps=res.steps, final_time=res.time, clamp_count=res.clamped,
                        min_mass_before_clamp=res.min_mass.tolist(), checks=checks)
    art.paths["metadata"] = write_json(os.path.join(out_dir, "metadata.json"), art.metadata)
    if svg:
        panel = {"h + b": [(grid.centers, final["eta"]), (grid.centers, bed.b_cell)],
                 "u": [(grid.centers, final["u"])]}
        art.paths["svg"] = emit_svg(panel, os.path.join(out_dir, f"{cfg.scenario}.svg"))
    return art


def draining_bound_check(grid: Grid, bed, Q, boundary: str = "wall", rtol: float = 1e-10):
    """Check reconstructed edge velocities of wet cells against the velocity bound.

    Returns boolean arrays (left edge ok, right edge ok, wet cell).
    """
    h, q = Q[0], Q[1]
    _, _, info = reconstruct_state(SystemKind("plain"), grid, bed, None, Q, boundary)
    flux = info["flux"]
    u = _divide_or_zero(q, h)
    lb, rb = velocity_bound(grid, u, pad(u, boundary, odd=True))
    wet = h > 0
    ok_l = np.abs(flux.u_left) <= lb * (1 + rtol) + 1e-300
    ok_r = np.abs(flux.u_right) <= rb * (1 + rtol) + 1e-300
    return ok_l, ok_r, wet


def _pick_frames(res, n_frames):
    frames = res.frames
    if len(frames) <= n_frames:
        return frames
    idx = np.unique(np.linspace(0, len(frames) - 1, n_frames).round().astype(int))
    return [frames[i] for i in idx]


def dam_break_error(cfg: ScenarioConfig, grid: Grid, h, t: float) -> float:
    """Relative L1 error of the depth against the exact dam-break solution."""
    ex = dam_break(cfg.h_left, cfg.h_right, cfg.gravity)
    he = ex.cell_averages(grid.interfaces, t, cfg.x_dam)
    return float(np.sum(np.abs(h - he) * grid.dx) / np.sum(np.abs(he) * grid.dx))


def run_convergence(cfg: ScenarioConfig, out_dir: str, svg: bool = False) -> RunArtifacts:
    art = RunArtifacts(metadata=_metadata(cfg))
    rows, errors = [], []
    system = SystemKind("plain")
    for J in cfg.J_list:
        grid, bed, _ = build_geometry(cfg, J)
        Q0 = initial_state(cfg, grid, bed, None, system)
        res = integrate(system, grid, bed, None, Q0, nu=cfg.nu, t_end=cfg.t_end, boundary=cfg.boundary)
        err = dam_break_error(cfg, grid, res.state[0], res.time)
        order = np.log2(errors[-1] / err) if errors else float("nan")
        errors.append(err)
        rows.append([J, float(grid.dx[0]), err, order])
    art.paths["convergence"] = write_csv(os.path.join(out_dir, "convergence.csv"),
                                         ["J", "dx", "l1_error", "observed_order"], rows)
    art.metadata["errors"] = errors
    art.paths["metadata"] = write_json(os.path.join(out_dir, "metadata.json"), art.metadata)
    if svg:
        J = np.array(cfg.J_list, float)
        art.paths["svg"] = emit_svg({"log2 L1 error vs log2 J": [(np.log2(J), np.log2(errors))]},
                                    os.path.join(out_dir, "convergence.svg"))
    return art


# -- comparison of depth reconstructions on a coarse sloping set-up ----------

COMPARISON_CELLS = np.arange(-3, 4)


def comparison_setup(h0: float, cfg: Optional[ScenarioConfig] = None):
    """Seven unit cells on a unit-slope bed with a deep cell left of the probed cell.

    The surface is flat at 1 for cells ``j <= -2``, cell ``-1`` holds depth
    3, cell ``0`` holds ``h0`` and cells ``j >= 1`` hold depth 1.
    """
    params = dict(alpha_minus=0.75, alpha_plus=0.75, alpha_center=0.25, gain=0.25)
    if cfg is not None:
        params = dict(alpha_minus=cfg.alpha_side, alpha_plus=cfg.alpha_side,
                      alpha_center=cfg.alpha_center, gain=cfg.gain if cfg.gain is not None else 0.25)
    x = np.arange(-4, 4) + 0.5
    grid = build_grid(x, params)
    bed = bed_stats(x, grid)
    j = COMPARISON_CELLS
    h = np.where(j <= -2, 1.0 - j, 1.0)
    h[j == -1] = 3.0
    h[j == 0] = h0
    return grid, bed, h


def comparison_rows(cfg: Optional[ScenarioConfig] = None, step: float = 1.0 / 64.0,
                    h_max: float = 7.0 / 3.0, threshold: float = 0.75):
    """Edge depths of all four reconstructions over a sweep of ``h0``.

    Returns a list of ``(h0, scheme, cell, h_left, h_right, gamma, xi)``.
    """
    n = int(np.floor(h_max / step + 1e-9))
    sweep = [k * step for k in range(n + 1)]
    if sweep[-1] < h_max - 1e-12:
        sweep.append(h_max)
    rows = []
    nan = float("nan")
    for h0 in sweep:
        grid, bed, h = comparison_setup(h0, cfg)
        r = reconstruct_depth(grid, bed, h)
        results = {
            "blended": (r.h_left, r.h_right, r.gamma, r.xi),
            "kurganov_levy": kurganov_levy(grid, bed, h, threshold) + (None, None),
            "chertock": chertock(grid, bed, h) + (None, None),
            "bollermann": bollermann(grid, bed, h)[:2] + (None, None),
        }
        for scheme, (hl, hr, gam, xi) in results.items():
            for k, j in enumerate(COMPARISON_CELLS):
                rows.append((h0, scheme, int(j), float(hl[k]), float(hr[k]),
                             nan if gam is None else float(gam[k]),
                             nan if xi is None else float(xi[k])))
    return rows


def run_comparison(cfg: ScenarioConfig, out_dir: str, svg: bool = False) -> RunArtifacts:
    art = RunArtifacts(metadata=_metadata(cfg))
    rows = comparison_rows(cfg, cfg.sweep_step, cfg.sweep_max)
    header = ["h0", "scheme", "cell", "h_left", "h_right", "gamma", "xi"]
    art.paths["sweep"] = write_csv(os.path.join(out_dir, "comparison_sweep.csv"), header, rows)
    art.paths["metadata"] = write_json(os.path.join(out_dir, "metadata.json"), art.metadata)
    if svg:
        art.paths["svg"] = emit_svg(comparison_panels(rows), os.path.join(out_dir, "comparison_sweep.svg"))
    return art


def comparison_panels(rows, h0_values=tuple(np.arange(0, 2.01, 0.25))):
    """Piecewise-linear depth profiles per scheme for a few ``h0`` values."""
    panels = {}
    for scheme in ("blended", "kurganov_levy", "chertock", "bollermann"):
        lines = []
        for h0 in h0_values:
            sel = [r for r in rows if r[1] == scheme and abs(r[0] - h0) < 1e-12]
            if not sel:
                continue
            xs, ys = [], []
            for _, _, j, hl, hr, _, _ in sel:
                if -2 <= j <= 2:
                    xs += [j - 0.5, j + 0.5]
                    ys += [hl, hr]
            lines.append((np.array(xs), np.array(ys)))
        if lines:
            panels[scheme] = lines
    return panels
