"""Semi-discrete finite volume right-hand side for three shallow-flow systems.

* ``plain``: depth ``h`` and discharge ``q``.
* ``width``: wetted area ``A = w h`` and discharge ``q~`` in a channel of
  known width ``w(x)``.
* ``particle``: depth ``h``, particle load ``Phi = phi h`` and discharge
  ``q`` for a current driven by reduced gravity ``g_p*phi + g_a`` with
  settling at speed ``v_s``.

Interface fluxes use the central-upwind formula; bed sources are the
well-balanced edge-average form that cancels the hydrostatic flux difference
for a lake at rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .mesh import BedGeometry, Grid, WidthGeometry
from .wbrecon import (
    _cutoff_or_inf,
    _divide_or_zero,
    reconstruct_area_width,
    reconstruct_concentration,
    reconstruct_depth,
    reconstruct_flux,
    reconstruct_width_flux,
)

SYSTEMS = ("plain", "width", "particle")


class SolverError(RuntimeError):
    """Numerical failure during a run, tagged with the offending cell and time."""

    def __init__(self, message: str, cell: Optional[int] = None, time: Optional[float] = None):
        self.cell = cell
        self.time = time
        where = []
        if cell is not None:
            where.append(f"cell {cell}")
        if time is not None:
            where.append(f"t={time:.6g}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))


@dataclass(frozen=True)
class SystemKind:
    """Which equations are solved plus their physical constants.

    Parameters
    ----------
    kind : {"plain", "width", "particle"}
    g_particle : float
        Reduced gravity per unit concentration (particle system, > 0).
    g_ambient : float
        Background reduced gravity (particle system, >= 0).
    settling : float
        Settling velocity ``v_s >= 0``.
    width_cutoff : bool
        Apply the fast-flow cutoff in the width system (off by default).
    """

    kind: str = "plain"
    g_particle: float = 1.0
    g_ambient: float = 0.0
    settling: float = 0.0
    width_cutoff: bool = False

    def __post_init__(self):
        if self.kind not in SYSTEMS:
            raise ValueError(f"unknown system {self.kind!r}")
        if self.kind == "particle" and not self.g_particle > 0:
            raise ValueError("g_particle must be positive")
        if self.g_ambient < 0 or self.settling < 0:
            raise ValueError("g_ambient and settling must be nonnegative")

    @property
    def n_fields(self) -> int:
        return 3 if self.kind == "particle" else 2

    @property
    def mass_fields(self) -> Tuple[int, ...]:
        """Rows holding nonnegative conserved quantities."""
        return (0, 1) if self.kind == "particle" else (0,)

    @property
    def momentum(self) -> int:
        return self.n_fields - 1

    @property
    def field_names(self) -> Tuple[str, ...]:
        return {"plain": ("h", "q"), "width": ("A", "q"), "particle": ("h", "Phi", "q")}[self.kind]

    def effective_gravity(self, phi, gravity: float):
        if self.kind == "particle":
            return self.g_particle * np.asarray(phi, float) + self.g_ambient
        return np.full(np.shape(phi), float(gravity))


@dataclass
class EdgeStates:
    """Conserved values plus derived quantities at a set of points.

    ``Q`` has one row per field; ``h`` is the depth, ``u`` the velocity,
    ``g`` the effective gravity and ``w`` the channel width (ones outside
    the width system).
    """

    Q: np.ndarray
    h: np.ndarray
    u: np.ndarray
    g: np.ndarray
    w: np.ndarray

    def take(self, idx) -> "EdgeStates":
        return EdgeStates(self.Q[:, idx], self.h[idx], self.u[idx], self.g[idx], self.w[idx])


def point_states(system: SystemKind, Q, gravity: float, width=None) -> EdgeStates:
    """Derive depth, velocity and effective gravity from conserved values."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float).T).T if np.ndim(Q) == 1 else np.asarray(Q, float)
    n = Q.shape[1]
    w = np.ones(n) if width is None else np.broadcast_to(np.asarray(width, float), (n,)).copy()
    mass, mom = Q[0], Q[system.momentum]
    h = _divide_or_zero(mass, w) if system.kind == "width" else mass.copy()
    u = _divide_or_zero(mom, mass)
    phi = _divide_or_zero(Q[1], Q[0]) if system.kind == "particle" else np.zeros(n)
    g = system.effective_gravity(phi, gravity)
    return EdgeStates(Q=Q, h=h, u=u, g=g, w=w)


def _flux(system: SystemKind, s: EdgeStates) -> np.ndarray:
    mom = s.Q[system.momentum]
    F = np.empty_like(s.Q)
    F[0] = mom
    F[system.momentum] = mom * s.u + 0.5 * s.g * s.w * s.h * s.h
    if system.kind == "particle":
        F[1] = s.u * s.Q[1]
    return F


def physical_flux(system: SystemKind, Q, gravity: float = 9.81, width=None) -> np.ndarray:
    """Analytic flux of the conserved vector(s) ``Q`` (fields along axis 0)."""
    Qa = np.asarray(Q, dtype=float)
    single = Qa.ndim == 1
    s = point_states(system, Qa[:, None] if single else Qa, gravity, width)
    F = _flux(system, s)
    return F[:, 0] if single else F


def _central_upwind(system: SystemKind, L: EdgeStates, R: EdgeStates):
    FL, FR = _flux(system, L), _flux(system, R)
    cL, cR = np.sqrt(L.g * L.h), np.sqrt(R.g * R.h)
    a_plus = np.maximum(np.maximum(L.u + cL, R.u + cR), 0.0)
    a_minus = np.minimum(np.minimum(L.u - cL, R.u - cR), 0.0)
    span = a_plus - a_minus
    with np.errstate(divide="ignore", invalid="ignore"):
        weight = np.where(span > 0, a_minus / np.where(span > 0, span, 1.0), 0.0)
    # F = F_L + a-/(a+ - a-) * (a+ (Q_R - Q_L) - (F_R - F_L)), exact when Q_L == Q_R
    F = FL + weight * (a_plus * (R.Q - L.Q) - (FR - FL))
    return F, a_minus, a_plus


def numerical_flux(system: SystemKind, QL, QR, gravity: float = 9.81, wL=None, wR=None):
    """Central-upwind flux between left and right states.

    Returns
    -------
    F : ndarray
        Flux vector(s).
    a_minus, a_plus : ndarray or float
        One-sided wave-speed bounds, ``a_minus <= 0 <= a_plus``.
    """
    QL, QR = np.asarray(QL, float), np.asarray(QR, float)
    single = QL.ndim == 1
    if single:
        QL, QR = QL[:, None], QR[:, None]
    L = point_states(system, QL, gravity, wL)
    R = point_states(system, QR, gravity, wR)
    F, am, ap = _central_upwind(system, L, R)
    if single:
        return F[:, 0], float(am[0]), float(ap[0])
    return F, am, ap


def settling_sink(Q, settling: float) -> np.ndarray:
    """Particle-load source ``-v_s*phi`` (zero in dry cells)."""
    if settling < 0:
        raise ValueError("settling velocity must be nonnegative")
    Q = np.asarray(Q, float)
    return -settling * _divide_or_zero(Q[1], Q[0])


def bed_source(system: SystemKind, h_left, h_right, bed: BedGeometry, dx,
               width: Optional[WidthGeometry] = None, g_left=None, g_right=None,
               gravity: float = 9.81) -> np.ndarray:
    """Momentum source balancing the hydrostatic flux over a lake at rest.

    ``-g*(h_left + h_right)/2 * db/dx`` in the plain and particle systems
    (with ``g`` the mean of the edge effective gravities); in a channel the
    bed term is weighted by edge widths and a wall-pressure term
    ``g/2 * (h_left^2 + h_right^2)/2 * dw/dx`` is added.
    """
    h_left, h_right = np.asarray(h_left, float), np.asarray(h_right, float)
    slope = bed.db_cell / dx
    if system.kind == "width":
        if width is None:
            raise ValueError("width system needs a WidthGeometry")
        wh = 0.5 * (width.w_left * h_left + width.w_right * h_right)
        wall = 0.25 * gravity * (h_left ** 2 + h_right ** 2) * width.dw_cell / dx
        return -gravity * wh * slope + wall
    if system.kind == "particle":
        g = 0.5 * (g_left + g_right)
    else:
        g = gravity
    return -g * 0.5 * (h_left + h_right) * slope


@dataclass
class StepReport:
    """Everything the stepper needs from one right-hand-side evaluation."""

    interface_flux: np.ndarray
    cell_source: np.ndarray
    a_minus: np.ndarray
    a_plus: np.ndarray
    left_states: EdgeStates
    right_states: EdgeStates
    recon: dict = field(default_factory=dict)
    draining: Optional[object] = None

    @property
    def wave_speeds(self):
        return self.a_minus, self.a_plus


def _boundary_state(s: EdgeStates, idx: int, boundary: str, momentum: int) -> EdgeStates:
    ghost = s.take(np.array([idx]))
    if boundary == "wall":
        ghost.Q = ghost.Q.copy()
        ghost.Q[momentum] *= -1.0
        ghost.u = -ghost.u
    return ghost


def _cat(*parts: EdgeStates) -> EdgeStates:
    return EdgeStates(
        Q=np.concatenate([p.Q for p in parts], axis=1),
        h=np.concatenate([p.h for p in parts]), u=np.concatenate([p.u for p in parts]),
        g=np.concatenate([p.g for p in parts]), w=np.concatenate([p.w for p in parts]),
    )


def reconstruct_state(system: SystemKind, grid: Grid, bed: BedGeometry, width: Optional[WidthGeometry],
                      Q: np.ndarray, boundary: str = "wall"):
    """Run the reconstruction pipeline and return per-cell left and right edge states.

    Order: depth (cutoff from the current discharge and concentration),
    then particle load, then discharge.
    """
    Q = np.asarray(Q, float)
    g0 = grid.gravity
    J = grid.n_cells
    info = {}
    if system.kind == "width":
        if width is None:
            raise ValueError("width system needs a WidthGeometry")
        A, qt = Q[0], Q[1]
        B = None
        if system.width_cutoff:
            B = _cutoff_or_inf(_divide_or_zero(qt, width.w_cell), np.full(J, g0), grid.froude)
        area = reconstruct_area_width(grid, width, bed, A, B, boundary)
        flux = reconstruct_width_flux(grid, area, qt, A, boundary)
        info.update(depth=area.depth, area=area, flux=flux)
        gL = gR = np.full(J, g0)
        left = EdgeStates(np.vstack([area.A_left, flux.q_left]), area.h_left, flux.u_left, gL, width.w_left)
        right = EdgeStates(np.vstack([area.A_right, flux.q_right]), area.h_right, flux.u_right, gR, width.w_right)
        return left, right, info

    h, q = Q[0], Q[system.momentum]
    if system.kind == "particle":
        phi = _divide_or_zero(Q[1], h)
        g_cell = system.effective_gravity(phi, g0)
    else:
        g_cell = np.full(J, g0)
    B = _cutoff_or_inf(q, g_cell, grid.froude)
    depth = reconstruct_depth(grid, bed, h, B, boundary)
    flux = reconstruct_flux(grid, q, h, depth, boundary)
    info.update(depth=depth, flux=flux)
    ones = np.ones(J)
    if system.kind == "particle":
        conc = reconstruct_concentration(grid, Q[1], depth, h, boundary)
        info["concentration"] = conc
        gL = system.effective_gravity(conc.phi_left, g0)
        gR = system.effective_gravity(conc.phi_right, g0)
        left = EdgeStates(np.vstack([depth.h_left, conc.Phi_left, flux.q_left]), depth.h_left, flux.u_left, gL, ones)
        right = EdgeStates(np.vstack([depth.h_right, conc.Phi_right, flux.q_right]), depth.h_right, flux.u_right, gR, ones)
    else:
        left = EdgeStates(np.vstack([depth.h_left, flux.q_left]), depth.h_left, flux.u_left, g_cell, ones)
        right = EdgeStates(np.vstack([depth.h_right, flux.q_right]), depth.h_right, flux.u_right, g_cell, ones)
    return left, right, info


def rhs(system: SystemKind, grid: Grid, bed: BedGeometry, width: Optional[WidthGeometry], Q,
        boundary: str = "wall") -> Tuple[np.ndarray, StepReport]:
    """Time derivative ``-(F_{j+1/2} - F_{j-1/2})/dx + source`` of every cell.

    Parameters
    ----------
    Q : ndarray, shape (n_fields, J)
        Cell averages, mass-like rows nonnegative.
    boundary : {"wall", "outflow"}

    Returns
    -------
    dQdt : ndarray, shape (n_fields, J)
    report : StepReport
    """
    Q = np.asarray(Q, float)
    if Q.shape != (system.n_fields, grid.n_cells):
        raise ValueError(f"state must have shape ({system.n_fields}, {grid.n_cells})")
    left, right, info = reconstruct_state(system, grid, bed, width, Q, boundary)
    m = system.momentum
    # state left of every interface, then right of every interface
    L = _cat(_boundary_state(left, 0, boundary, m), right)
    R = _cat(left, _boundary_state(right, grid.n_cells - 1, boundary, m))
    F, a_minus, a_plus = _central_upwind(system, L, R)

    S = np.zeros_like(Q)
    S[m] = bed_source(system, left.h, right.h, bed, grid.dx, width, left.g, right.g, grid.gravity)
    if system.kind == "particle" and system.settling > 0:
        S[1] = settling_sink(Q, system.settling)
    dQ = -(F[:, 1:] - F[:, :-1]) / grid.dx + S
    report = StepReport(interface_flux=F, cell_source=S, a_minus=a_minus, a_plus=a_plus,
                        left_states=L, right_states=R, recon=info)
    return dQ, report
