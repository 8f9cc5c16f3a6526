"""Time stepping: CFL control, positivity-preserving Euler steps and SSP-RK2.

The Euler step limits each flux and sink of a nonnegative field to the time
it takes to drain the donor cell.  Fluxes act at full strength until the
material they can reach is exhausted and stop for the rest of the step, so
depth and particle load never become negative.  The hydrostatic part of the
momentum flux and the bed source are never limited because they balance
each other at rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mesh import BedGeometry, Grid, WidthGeometry
from .solver import StepReport, SolverError, SystemKind, rhs

CLAMP_RTOL = 1e-14


@dataclass
class DrainingFactors:
    """Fractions of the step during which each flux and source acts.

    Attributes
    ----------
    d_flux : ndarray, shape (n_fields, J+1)
        Factors applied to every field's interface flux (momentum row holds
        the factor for its advective part).
    d_source : ndarray, shape (n_fields, J)
        Factors applied to cell sources (momentum row is always one).
    d_momentum_advect : ndarray, shape (J+1,)
    d_particle : ndarray, shape (J+1,) or None
        Particle flux factor after coupling with the fluid factor.
    """

    d_flux: np.ndarray
    d_source: np.ndarray
    d_momentum_advect: np.ndarray
    d_particle: Optional[np.ndarray] = None


def speed_floor(gravity: float, depth_ref: float) -> float:
    """Positive lower bound on wave speeds so a quiescent state gives a finite step."""
    return 1e-12 * np.sqrt(gravity * max(depth_ref, 1e-300))


def cfl_dt(grid: Grid, report: StepReport, nu: float, floor: float = 1e-12) -> float:
    """Largest step allowed by Courant number ``nu`` (at most 1/2).

    Every cell is limited by the fastest signal at either of its interfaces.
    """
    if not 0 < nu <= 0.5:
        raise ValueError("Courant number must be in (0, 0.5]")
    if not floor > 0:
        raise ValueError("speed floor must be positive")
    s = np.maximum(np.maximum(-report.a_minus, report.a_plus), floor)
    cell_speed = np.maximum(s[:-1], s[1:])
    return float(nu * np.min(grid.dx / cell_speed))


def _drain_time(Q, dx, F_left, F_right, source):
    out = np.maximum(F_right, 0.0) + np.maximum(-F_left, 0.0) + np.maximum(-source * dx, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = Q * dx / out
    return np.where(out > 0, t, np.inf)


def _donor_factor(t_cell, F, dt):
    """Interface factor from the donor cell's draining time (1 where F == 0)."""
    d_cell = np.minimum(t_cell / dt, 1.0)
    # interface i sits between cells i-1 and i; boundary donors are ghosts
    left = np.concatenate([[1.0], d_cell])
    right = np.concatenate([d_cell, [1.0]])
    return np.where(F > 0, left, np.where(F < 0, right, 1.0))


def _source_time(t_flux, dx, Ft_left, Ft_right, source, dt):
    inflow = (np.maximum(-Ft_right, 0.0) + np.maximum(Ft_left, 0.0)) * dt
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_flux + inflow / (-source * dx)
    return np.where(source < 0, t, np.inf)


def draining_times(system: SystemKind, grid: Grid, Q, fluxes, sources, dt: float) -> DrainingFactors:
    """Draining factors for every nonnegative field.

    Parameters
    ----------
    Q : ndarray, shape (n_fields, J)
    fluxes : ndarray, shape (n_fields, J+1)
    sources : ndarray, shape (n_fields, J)
    dt : float

    Raises
    ------
    ValueError
        If a mass-like cell average is negative.
    """
    Q = np.asarray(Q, float)
    M, J = Q.shape
    d_flux = np.ones((M, J + 1))
    d_src = np.ones((M, J))
    for m in system.mass_fields:
        if np.any(Q[m] < 0):
            raise ValueError("negative mass-like cell average")
        F, S = fluxes[m], sources[m]
        t_flux = _drain_time(Q[m], grid.dx, F[:-1], F[1:], S)
        d_flux[m] = _donor_factor(t_flux, F, dt)
        if m != system.mass_fields[0]:
            # particles may only move while the carrying fluid moves
            d_flux[m] = np.minimum(d_flux[m], d_flux[system.mass_fields[0]])
        Ft = d_flux[m] * F
        t_src = _source_time(t_flux, grid.dx, Ft[:-1], Ft[1:], S, dt)
        d_src[m] = np.minimum(t_src / dt, 1.0)
        if m != system.mass_fields[0]:
            d_src[m] = np.minimum(d_src[m], d_src[system.mass_fields[0]])
    d_adv = d_flux[system.mass_fields[0]].copy()
    d_flux[system.momentum] = d_adv
    return DrainingFactors(
        d_flux=d_flux, d_source=d_src, d_momentum_advect=d_adv,
        d_particle=d_flux[1].copy() if system.kind == "particle" else None,
    )


def hydrostatic_flux(system: SystemKind, report: StepReport) -> np.ndarray:
    """Pressure part ``g*w*h^2/2`` of the momentum flux, taken at the upwind edge."""
    L, R = report.left_states, report.right_states
    up = report.interface_flux[0] >= 0
    h = np.where(up, L.h, R.h)
    g = np.where(up, L.g, R.g)
    w = np.where(up, L.w, R.w)
    return 0.5 * g * w * h * h


def clamp_dry(system: SystemKind, Q: np.ndarray, scale: np.ndarray):
    """Snap tiny mass-like values to zero and drop fields carried by dry cells.

    Returns the clamped state and the number of entries changed.
    """
    Q = Q.copy()
    count = 0
    for m in system.mass_fields:
        tiny = (np.abs(Q[m]) < CLAMP_RTOL * scale[m]) & (Q[m] != 0)
        count += int(tiny.sum())
        Q[m][tiny] = 0.0
    dry = Q[0] == 0
    for m in range(1, system.n_fields):
        moved = dry & (Q[m] != 0)
        count += int(moved.sum())
        Q[m][dry] = 0.0
    return Q, count


@dataclass
class EulerResult:
    state: np.ndarray
    raw_min: np.ndarray
    clamped: int
    report: StepReport


def euler_step_positive(system: SystemKind, grid: Grid, bed: BedGeometry, width: Optional[WidthGeometry],
                        Q, dt: float, boundary: str = "wall", report: Optional[StepReport] = None,
                        scale=None) -> EulerResult:
    """Forward Euler step with draining-time limited fluxes and sinks.

    Parameters
    ----------
    report : StepReport, optional
        Reuse a right-hand-side evaluation at ``Q``.
    scale : array_like, optional
        Per-field magnitude used by the dry clamp; defaults to the max of
        ``|Q|`` per field.

    Returns
    -------
    EulerResult
        New state, the per-field minimum before clamping, the number of
        clamped entries and the report (with draining factors attached).
    """
    Q = np.asarray(Q, float)
    if report is None:
        _, report = rhs(system, grid, bed, width, Q, boundary)
    F, S = report.interface_flux, report.cell_source
    d = draining_times(system, grid, Q, F, S, dt)
    report.draining = d

    Ft = d.d_flux * F
    m = system.momentum
    hyd = hydrostatic_flux(system, report)
    Ft[m] = np.where(d.d_momentum_advect < 1.0, hyd + d.d_momentum_advect * (F[m] - hyd), F[m])
    St = d.d_source * S
    St[m] = S[m]

    new = Q - (dt / grid.dx) * (Ft[:, 1:] - Ft[:, :-1]) + dt * St
    if not np.all(np.isfinite(new)):
        bad = int(np.argmax(~np.all(np.isfinite(new), axis=0)))
        raise SolverError("non-finite state", cell=bad)
    raw_min = new[list(system.mass_fields)].min(axis=1)
    if scale is None:
        scale = np.abs(Q).max(axis=1)
    new, count = clamp_dry(system, new, np.asarray(scale, float))
    return EulerResult(state=new, raw_min=raw_min, clamped=count, report=report)


def ssp_rk2(system: SystemKind, grid: Grid, bed: BedGeometry, width: Optional[WidthGeometry],
            Q, dt: float, boundary: str = "wall", report: Optional[StepReport] = None,
            scale=None) -> EulerResult:
    """Heun's method written as a convex average of two positive Euler stages."""
    first = euler_step_positive(system, grid, bed, width, Q, dt, boundary, report, scale)
    second = euler_step_positive(system, grid, bed, width, first.state, dt, boundary, None, scale)
    Q = np.asarray(Q, float)
    avg = 0.5 * (Q + second.state)
    raw_min = np.minimum(first.raw_min, second.raw_min)
    if scale is None:
        scale = np.abs(Q).max(axis=1)
    avg, count = clamp_dry(system, avg, np.asarray(scale, float))
    return EulerResult(state=avg, raw_min=raw_min, clamped=first.clamped + second.clamped + count,
                       report=first.report)


@dataclass
class RunResult:
    state: np.ndarray
    time: float
    steps: int
    min_mass: np.ndarray
    clamped: int
    frames: list


def integrate(system: SystemKind, grid: Grid, bed: BedGeometry, width: Optional[WidthGeometry], Q0,
              nu: float = 0.45, t_end: Optional[float] = None, n_steps: Optional[int] = None,
              boundary: str = "wall", frame_every: int = 0, callback=None) -> RunResult:
    """Advance with SSP-RK2 until ``t_end`` or for ``n_steps`` steps.

    The last step is shortened to land exactly on ``t_end``.  ``callback``
    (if given) is called as ``callback(step, t, state, report)`` after every
    step.
    """
    if t_end is None and n_steps is None:
        raise ValueError("give t_end or n_steps")
    Q = np.array(Q0, dtype=float)
    scale = np.maximum(np.abs(Q).max(axis=1), 1e-300)
    floor = speed_floor(grid.gravity if system.kind != "particle" else
                        system.g_particle + system.g_ambient, float(Q[0].max()))
    t, step, clamped = 0.0, 0, 0
    min_mass = np.full(len(system.mass_fields), np.inf)
    frames = [(0.0, Q.copy())]
    while True:
        if n_steps is not None and step >= n_steps:
            break
        if t_end is not None and t >= t_end:
            break
        _, report = rhs(system, grid, bed, width, Q, boundary)
        dt = cfl_dt(grid, report, nu, floor)
        if t_end is not None and t + dt > t_end:
            dt = t_end - t
        if not dt > 0 or not np.isfinite(dt):
            raise SolverError("time step collapsed", time=t)
        try:
            res = ssp_rk2(system, grid, bed, width, Q, dt, boundary, report, scale)
        except SolverError as err:
            raise SolverError("non-finite state", cell=err.cell, time=t) from None
        Q = res.state
        t = t_end if (t_end is not None and t + dt >= t_end) else t + dt
        step += 1
        clamped += res.clamped
        min_mass = np.minimum(min_mass, res.raw_min)
        if frame_every and step % frame_every == 0:
            frames.append((t, Q.copy()))
        if callback is not None:
            callback(step, t, Q, report)
    if not frames or frames[-1][0] != t:
        frames.append((t, Q.copy()))
    return RunResult(state=Q, time=t, steps=step, min_mass=min_mass, clamped=clamped, frames=frames)
