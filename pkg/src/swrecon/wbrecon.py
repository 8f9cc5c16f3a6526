"""Positivity-preserving, well-balanced, self-monotone interface reconstruction.

Depth is reconstructed as a convex blend of a depth-based and a
surface-based minmod slope.  The blend weight ``gamma`` depends on the ratio
``xi`` of the smallest admissible depth in the cell to the local bed
variation: shallow cells fall back to the depth slope (positive edges), deep
cells use the surface slope (exact lake at rest).

Discharge slopes are scaled by a suppression factor ``kappa`` so that edge
velocities stay bounded next to much deeper neighbours.  Products with a
known width and with a concentration are reconstructed so that the derived
depth and concentration edges inherit the same bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .limiter import limited_slopes
from .mesh import BedGeometry, Grid, WidthGeometry

BOUNDARIES = ("wall", "outflow")


def pad(values: np.ndarray, boundary: str = "outflow", odd: bool = False) -> np.ndarray:
    """Add one ghost value on each side.

    Ghosts copy the boundary cell; with ``odd=True`` and a wall boundary
    the copy is negated (used for discharge).
    """
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}")
    v = np.asarray(values, dtype=float)
    lo, hi = v[:1], v[-1:]
    if odd and boundary == "wall":
        lo, hi = -lo, -hi
    return np.concatenate([lo, v, hi])


def down_up(v_pad: np.ndarray, grid: Grid):
    """Lower and upper reference values of a reconstructed field.

    Returns the min and max of
    ``(v_j - a_left*(v_j - v_{j-1}), v_j, v_j + a_right*(v_{j+1} - v_j))``.
    """
    v = v_pad[1:-1]
    lo = v - grid.alpha_left * (v - v_pad[:-2])
    hi = v + grid.alpha_right * (v_pad[2:] - v)
    return np.minimum(np.minimum(lo, v), hi), np.maximum(np.maximum(lo, v), hi)


def gamma_of_xi(xi, gain):
    """Piecewise-linear blend weight.

    ``0`` for ``xi <= 1``, ``gain*(xi-1)`` up to ``xi = 1 + 1/gain`` and ``1``
    beyond.  ``xi = inf`` is allowed.
    """
    xi = np.asarray(xi, dtype=float)
    with np.errstate(invalid="ignore"):
        g = np.clip(gain * (xi - 1.0), 0.0, 1.0)
    g = np.where(np.isinf(xi), 1.0, g)
    return float(g) if g.ndim == 0 else g


def froude_cutoff(q, g_eff, froude):
    """Bed-variation floor ``(q^2/(Fr^2 g_eff))^(1/3)`` forcing depth slopes in fast flow.

    Raises
    ------
    ValueError
        If any effective gravity is not positive.
    """
    g_eff = np.asarray(g_eff, dtype=float)
    if np.any(g_eff <= 0):
        raise ValueError("effective gravity must be positive")
    q = np.asarray(q, dtype=float)
    out = np.cbrt(q * q / (np.asarray(froude, float) ** 2 * g_eff))
    return float(out) if out.ndim == 0 else out


def _cutoff_or_inf(q, g_eff, froude):
    """Like :func:`froude_cutoff` but maps vanishing gravity to ``inf`` (depth slope)."""
    g_eff = np.asarray(g_eff, float)
    q = np.asarray(q, float)
    safe = np.where(g_eff > 0, g_eff, 1.0)
    B = np.cbrt(q * q / (froude ** 2 * safe))
    return np.where(g_eff > 0, B, np.where(q != 0, np.inf, 0.0))


@dataclass
class DepthRecon:
    """Depth reconstruction result, every array has one entry per cell."""

    grad_h: np.ndarray
    h_left: np.ndarray
    h_right: np.ndarray
    gamma: np.ndarray
    xi: np.ndarray
    db_up: np.ndarray
    h_down: np.ndarray
    h_up: np.ndarray
    sigma_h: np.ndarray
    sigma_eta: np.ndarray


def reconstruct_depth(grid: Grid, bed: BedGeometry, h, B=None, boundary: str = "outflow") -> DepthRecon:
    """Blend depth and surface slopes into a single depth gradient per cell.

    Parameters
    ----------
    grid, bed : Grid, BedGeometry
    h : array_like, shape (J,)
        Nonnegative cell-average depths.
    B : float or array_like, optional
        Per-cell floor on the bed-variation scale (fast-flow cutoff).  Must
        not depend on ``h``.
    boundary : {"outflow", "wall"}
        Depth ghosts copy the boundary cell in both cases.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (grid.n_cells,):
        raise ValueError(f"h must have shape ({grid.n_cells},)")
    if np.any(h < 0):
        raise ValueError("negative depth")
    h_pad = pad(h, boundary)
    aL, aC, aR, dx = grid.alpha_left, grid.alpha_center, grid.alpha_right, grid.dx

    sigma_h = limited_slopes(h_pad, aL, aC, aR, dx)
    sigma_eta = limited_slopes(h_pad, aL, aC, aR, dx, offset_pad=bed.b_padded)
    grad_eta = sigma_eta - bed.db_cell / dx

    h_down, h_up = down_up(h_pad, grid)
    db_up = bed.db_up_geo if B is None else np.maximum(bed.db_up_geo, B)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = np.where(db_up > 0, h_down / np.where(db_up > 0, db_up, 1.0), np.inf)
    gamma = gamma_of_xi(xi, grid.gain)

    grad = (1.0 - gamma) * sigma_h + gamma * grad_eta
    half = 0.5 * dx * grad
    return DepthRecon(
        grad_h=grad, h_left=h - half, h_right=h + half, gamma=gamma, xi=xi,
        db_up=db_up, h_down=h_down, h_up=h_up, sigma_h=sigma_h, sigma_eta=sigma_eta,
    )


def _ratio(num, den):
    """``num/den`` with ``x/0 = inf`` for ``x > 0`` and ``0/0 = 0``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    return np.where(den == 0, np.where(num > 0, np.inf, 0.0), r)


def suppression_factor(h_prev, h_mid, h_next, K_prev, K_next):
    """Discharge-slope scale ``min(1, K_prev*h_mid/h_prev, K_next*h_mid/h_next)``."""
    h_prev, h_mid, h_next = (np.asarray(v, float) for v in (h_prev, h_mid, h_next))
    if np.any(h_prev < 0) or np.any(h_mid < 0) or np.any(h_next < 0):
        raise ValueError("negative depth")
    a = np.asarray(K_prev, float) * _ratio(h_mid, h_prev)
    b = np.asarray(K_next, float) * _ratio(h_mid, h_next)
    k = np.minimum(1.0, np.minimum(a, b))
    return float(k) if k.ndim == 0 else k


@dataclass
class FluxRecon:
    """Discharge reconstruction; velocities are ``None`` until depths are known."""

    grad_q: np.ndarray
    q_left: np.ndarray
    q_right: np.ndarray
    kappa: np.ndarray
    u_left: Optional[np.ndarray] = None
    u_right: Optional[np.ndarray] = None


def _divide_or_zero(num, den):
    """``num/den`` where ``den > 0``, else zero (dry-edge convention)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    return np.where(den > 0, r, 0.0)


def interface_velocities(depth: DepthRecon, flux: FluxRecon):
    """Edge velocities ``q/h``; zero wherever the edge depth is zero."""
    return _divide_or_zero(flux.q_left, depth.h_left), _divide_or_zero(flux.q_right, depth.h_right)


def reconstruct_flux(grid: Grid, q, h, depth: Optional[DepthRecon] = None,
                     boundary: str = "outflow") -> FluxRecon:
    """Suppressed minmod reconstruction of the discharge.

    Parameters
    ----------
    q : array_like, shape (J,)
        Cell-average discharge (or any flux-like field).
    h : array_like, shape (J,)
        Cell averages of the field used for suppression (depth, or wetted
        area in a channel of varying width).
    depth : DepthRecon, optional
        When given, edge velocities are filled in.
    boundary : {"outflow", "wall"}
        Wall ghosts negate the discharge.
    """
    q = np.asarray(q, dtype=float)
    h = np.asarray(h, dtype=float)
    q_pad = pad(q, boundary, odd=True)
    h_pad = pad(h, boundary)
    kappa = suppression_factor(h_pad[:-2], h, h_pad[2:], grid.K_plus[:-1], grid.K_minus[1:])
    grad = kappa * limited_slopes(q_pad, grid.alpha_left, grid.alpha_center, grid.alpha_right, grid.dx)
    half = 0.5 * grid.dx * grad
    out = FluxRecon(grad_q=grad, q_left=q - half, q_right=q + half, kappa=kappa)
    if depth is not None:
        out.u_left, out.u_right = interface_velocities(depth, out)
    return out


def velocity_bound(grid: Grid, u, boundary_u_pad=None, scale=None):
    """Upper bounds on ``|u|`` at the left and right edge of each cell.

    ``(G+1)/(1-alpha_up) * (|u_j| + K*alpha*|u_neighbour|)``, optionally
    multiplied by ``scale`` (``w_j/w_down`` in a channel).
    """
    u = np.asarray(u, float)
    u_pad = pad(u, "outflow") if boundary_u_pad is None else boundary_u_pad
    c = (grid.gain + 1.0) / (1.0 - grid.alpha_up)
    if scale is not None:
        c = c * scale
    left = c * (np.abs(u) + grid.K_plus[:-1] * grid.alpha_left * np.abs(u_pad[:-2]))
    right = c * (np.abs(u) + grid.K_minus[1:] * grid.alpha_right * np.abs(u_pad[2:]))
    return left, right


@dataclass
class AreaRecon:
    """Wetted-area reconstruction in a channel of known width."""

    depth: DepthRecon
    grad_A: np.ndarray
    A_left: np.ndarray
    A_right: np.ndarray
    h_left: np.ndarray
    h_right: np.ndarray
    dry_width_left: np.ndarray
    dry_width_right: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return self.dry_width_left | self.dry_width_right


def reconstruct_area_width(grid: Grid, widths: WidthGeometry, bed: BedGeometry, A, B=None,
                           boundary: str = "outflow") -> AreaRecon:
    """Reconstruct ``A = w*h`` with gradient ``[h_x]*w_down + h*[w_x]``.

    Edge depths are ``A_edge / w_edge``; where an edge width is zero the
    depth there is taken as the cell depth.
    """
    A = np.asarray(A, dtype=float)
    if np.any(widths.w_cell <= 0):
        raise ValueError("cell width must be positive")
    if np.any(A < 0):
        raise ValueError("negative area")
    h = A / widths.w_cell
    depth = reconstruct_depth(grid, bed, h, B, boundary)
    grad_A = depth.grad_h * widths.w_down + h * widths.w_gradient
    half = 0.5 * grid.dx * grad_A
    A_left, A_right = A - half, A + half
    dry_l = widths.w_left == 0
    dry_r = widths.w_right == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        h_left = np.where(dry_l, h, A_left / widths.w_left)
        h_right = np.where(dry_r, h, A_right / widths.w_right)
    return AreaRecon(depth=depth, grad_A=grad_A, A_left=A_left, A_right=A_right,
                     h_left=h_left, h_right=h_right, dry_width_left=dry_l, dry_width_right=dry_r)


def reconstruct_width_flux(grid: Grid, area: AreaRecon, qt, A, boundary: str = "outflow") -> FluxRecon:
    """Suppressed reconstruction of ``q~ = u*w*h`` with the zero-width branch.

    In a cell whose edge width vanishes the discharge there must vanish too,
    so the gradient is set to ``+-2*q~_j/dx``, which makes ``u`` constant
    across the cell.  Velocities are filled in.
    """
    A = np.asarray(A, float)
    qt = np.asarray(qt, float)
    out = reconstruct_flux(grid, qt, A, boundary=boundary)
    grad = np.where(area.dry_width_left, 2.0 * qt / grid.dx,
                    np.where(area.dry_width_right, -2.0 * qt / grid.dx, out.grad_q))
    half = 0.5 * grid.dx * grad
    out.grad_q, out.q_left, out.q_right = grad, qt - half, qt + half
    u_cell = _divide_or_zero(qt, A)
    out.u_left = np.where(area.dry_width_left, u_cell, _divide_or_zero(out.q_left, area.A_left))
    out.u_right = np.where(area.dry_width_right, u_cell, _divide_or_zero(out.q_right, area.A_right))
    return out


@dataclass
class ConcenRecon:
    """Particle-load reconstruction (``Phi = phi*h``)."""

    grad_Phi: np.ndarray
    Phi_left: np.ndarray
    Phi_right: np.ndarray
    phi_left: np.ndarray
    phi_right: np.ndarray
    phi: np.ndarray


def reconstruct_concentration(grid: Grid, Phi, depth: DepthRecon, h,
                              boundary: str = "outflow") -> ConcenRecon:
    """Reconstruct ``Phi`` with gradient ``[phi_x]*(h_j - dx/2*|[h_x]|) + phi_j*[h_x]``.

    Edge concentrations ``Phi_edge/h_edge`` then stay within the limiter's
    reference bounds of ``phi``; they are zero at dry edges.
    """
    Phi = np.asarray(Phi, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(Phi < 0):
        raise ValueError("negative particle load")
    phi = _divide_or_zero(Phi, h)
    phi_pad = pad(phi, boundary)
    sig = limited_slopes(phi_pad, grid.alpha_left, grid.alpha_center, grid.alpha_right, grid.dx)
    dx = grid.dx
    grad = sig * (h - 0.5 * dx * np.abs(depth.grad_h)) + phi * depth.grad_h
    half = 0.5 * dx * grad
    P_left, P_right = Phi - half, Phi + half
    return ConcenRecon(
        grad_Phi=grad, Phi_left=P_left, Phi_right=P_right,
        phi_left=_divide_or_zero(P_left, depth.h_left),
        phi_right=_divide_or_zero(P_right, depth.h_right), phi=phi,
    )


def _blend_parts(grid: Grid, bed: BedGeometry, h, B, gamma=None):
    """Right-edge values of both candidate reconstructions and ``h_down``."""
    r = reconstruct_depth(grid, bed, h, B)
    half = 0.5 * grid.dx
    h = np.asarray(h, float)
    right_h = h + half * r.sigma_h
    right_eta = h + half * (r.sigma_eta - bed.db_cell / grid.dx)
    g = r.gamma if gamma is None else gamma
    return r, (1.0 - g) * right_h + g * right_eta, r.h_down


def proof_diagnostics(grid: Grid, bed: BedGeometry, h, B=None, j=None, eps: float = 1e-7):
    """Quantities ``R``, ``S`` and ``N`` governing monotonicity of the right edge.

    ``R`` is the normalised gap between the depth-based and surface-based
    right edges.  ``S`` and ``N`` are secant estimates (step ``eps``; a
    negative step gives the backward secant) of the blended right edge
    derivative with respect to ``h_j`` and ``h_{j+1}``, both divided by the
    matching derivative of ``h_down`` with the blend weight held fixed.
    ``N`` is ``inf`` where ``h_down`` does not depend on ``h_{j+1}``; ``R``
    is ``0`` where the bed-variation scale vanishes.

    Parameters
    ----------
    j : int or array of int, optional
        Cells to report, all cells by default.  Perturbations are applied to
        all requested cells at once, so their stencils must not overlap when
        several are requested.
    """
    h = np.asarray(h, float)
    cells = np.arange(grid.n_cells) if j is None else np.atleast_1d(j)
    r, right0, down0 = _blend_parts(grid, bed, h, B)
    with np.errstate(divide="ignore", invalid="ignore"):
        R_all = (0.5 * bed.db_cell + 0.5 * grid.dx * (r.sigma_h - r.sigma_eta)) / r.db_up
    R_all = np.where(r.db_up > 0, R_all, 0.0)

    hp = h.copy()
    hp[cells] += eps
    _, right1, down1 = _blend_parts(grid, bed, hp, B, r.gamma)
    S = (right1[cells] - right0[cells]) / (down1[cells] - down0[cells])

    N = np.full(cells.size, np.inf)
    nxt = cells + 1
    has_next = nxt < grid.n_cells
    if np.any(has_next):
        hn = h.copy()
        hn[nxt[has_next]] += eps
        _, right2, down2 = _blend_parts(grid, bed, hn, B, r.gamma)
        c = cells[has_next]
        dd = down2[c] - down0[c]
        with np.errstate(divide="ignore", invalid="ignore"):
            N[has_next] = np.where(dd != 0, (right2[c] - right0[c]) / dd, np.inf)
    R = R_all[cells]
    if np.ndim(j) == 0 and j is not None:
        return float(R[0]), float(S[0]), float(N[0])
    return R, S, N
