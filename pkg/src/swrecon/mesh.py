"""Grid, bed and channel-width geometry for 1D finite volume schemes.

Cells are indexed ``0..J-1`` and interfaces ``0..J``; interface ``i`` sits
between cells ``i-1`` and ``i``.  Every per-interface array therefore has
length ``J+1`` and every per-cell array length ``J``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

import numpy as np

DEFAULT_ALPHA_SIDE = 0.75
DEFAULT_ALPHA_CENTER = 0.25
DEFAULT_K = 100.0
DEFAULT_GRAVITY = 9.81


class GridError(ValueError):
    """Raised when grid or geometry input violates its invariants."""


@dataclass(frozen=True)
class Grid:
    """Interface coordinates plus all per-cell limiter parameters.

    Attributes
    ----------
    interfaces : ndarray, shape (J+1,)
        Strictly increasing interface coordinates.
    dx : ndarray, shape (J,)
        Cell widths.
    alpha_minus, alpha_plus : ndarray, shape (J+1,)
        One-sided limiter weights.  ``alpha_plus[j]`` is the weight cell ``j``
        applies to the difference across its left interface and
        ``alpha_minus[j+1]`` the weight across its right interface.
    alpha_center : ndarray, shape (J,)
        Weight on the centred difference.
    gain : ndarray, shape (J,)
        Blend gain ``G`` controlling how fast the depth reconstruction moves
        from depth-based to surface-based slopes.
    K_minus, K_plus : ndarray, shape (J+1,)
        Depth-ratio thresholds for suppressing the discharge slope.
    froude : ndarray, shape (J,)
        Reference Froude number used by the fast-flow cutoff.
    gravity : float
    """

    interfaces: np.ndarray
    dx: np.ndarray
    alpha_minus: np.ndarray
    alpha_plus: np.ndarray
    alpha_center: np.ndarray
    gain: np.ndarray
    K_minus: np.ndarray
    K_plus: np.ndarray
    froude: np.ndarray
    gravity: float

    @property
    def n_cells(self) -> int:
        return self.dx.size

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.interfaces[1:] + self.interfaces[:-1])

    @property
    def alpha_left(self) -> np.ndarray:
        """Weight each cell applies across its left interface."""
        return self.alpha_plus[:-1]

    @property
    def alpha_right(self) -> np.ndarray:
        """Weight each cell applies across its right interface."""
        return self.alpha_minus[1:]

    @property
    def alpha_up(self) -> np.ndarray:
        return np.maximum(self.alpha_left, self.alpha_right)

    @property
    def xi_crit(self) -> np.ndarray:
        """Depth ratio above which the reconstruction is purely surface based."""
        return 1.0 + 1.0 / self.gain

    def reversed(self) -> "Grid":
        """Mirror image of the grid under ``x -> -x``."""
        return Grid(
            interfaces=-self.interfaces[::-1].copy(),
            dx=self.dx[::-1].copy(),
            alpha_minus=self.alpha_plus[::-1].copy(),
            alpha_plus=self.alpha_minus[::-1].copy(),
            alpha_center=self.alpha_center[::-1].copy(),
            gain=self.gain[::-1].copy(),
            K_minus=self.K_plus[::-1].copy(),
            K_plus=self.K_minus[::-1].copy(),
            froude=self.froude[::-1].copy(),
            gravity=self.gravity,
        )


def _broadcast(value, n: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if arr.shape != (n,):
        raise GridError(f"{name} must be scalar or length {n}, got shape {arr.shape}")
    return arr.copy()


def build_grid(interfaces, params: Optional[Mapping] = None) -> Grid:
    """Build a :class:`Grid` from interface coordinates.

    Parameters
    ----------
    interfaces : array_like, shape (J+1,)
        Strictly increasing coordinates, at least two.
    params : mapping, optional
        Any of ``alpha_minus``, ``alpha_plus``, ``alpha_center``, ``gain``,
        ``K_minus``, ``K_plus``, ``froude``, ``gravity``.  Scalars are
        broadcast.  Omitted values take the defaults: one-sided weights 3/4,
        centred weight 1/4, ``gain = 1 - max(alpha)``, thresholds 100,
        ``froude = (1 + 1/gain)**1.5`` and ``gravity = 9.81``.

    Returns
    -------
    Grid

    Raises
    ------
    GridError
        On non-increasing interfaces or out-of-range parameters.
    """
    params = dict(params or {})
    unknown = set(params) - {
        "alpha_minus", "alpha_plus", "alpha_center", "gain",
        "K_minus", "K_plus", "froude", "gravity",
    }
    if unknown:
        raise GridError(f"unknown grid parameters: {sorted(unknown)}")

    x = np.asarray(interfaces, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise GridError("need at least two interfaces")
    if not np.all(np.isfinite(x)):
        raise GridError("interfaces must be finite")
    dx = np.diff(x)
    if np.any(dx <= 0):
        raise GridError("non-increasing interfaces")
    J = dx.size

    def pick(key, default):
        v = params.get(key)
        return default if v is None else v

    a_minus = _broadcast(pick("alpha_minus", DEFAULT_ALPHA_SIDE), J + 1, "alpha_minus")
    a_plus = _broadcast(pick("alpha_plus", DEFAULT_ALPHA_SIDE), J + 1, "alpha_plus")
    a_center = _broadcast(pick("alpha_center", DEFAULT_ALPHA_CENTER), J, "alpha_center")
    # only the weights a cell actually uses have to lie in (0, 1)
    used = np.concatenate([a_plus[:-1], a_minus[1:], a_center])
    if np.any(~np.isfinite(used)) or np.any(used <= 0) or np.any(used >= 1):
        raise GridError("alpha outside (0, 1)")
    a_up = np.maximum(a_plus[:-1], a_minus[1:])

    gain = _broadcast(pick("gain", 1.0 - a_up), J, "gain")
    if np.any(gain <= 0) or np.any(gain > 1.0 - a_up + 1e-15):
        raise GridError("gain G outside (0, 1 - alpha_up]")

    K_minus = _broadcast(pick("K_minus", DEFAULT_K), J + 1, "K_minus")
    K_plus = _broadcast(pick("K_plus", DEFAULT_K), J + 1, "K_plus")
    if np.any(K_minus <= 0) or np.any(K_plus <= 0):
        raise GridError("suppression thresholds K must be positive")

    froude = _broadcast(pick("froude", (1.0 + 1.0 / gain) ** 1.5), J, "froude")
    if np.any(froude <= 0):
        raise GridError("reference Froude number must be positive")
    gravity = float(pick("gravity", DEFAULT_GRAVITY))
    if not gravity > 0:
        raise GridError("gravity must be positive")

    return Grid(
        interfaces=x.copy(), dx=dx, alpha_minus=a_minus, alpha_plus=a_plus,
        alpha_center=a_center, gain=gain, K_minus=K_minus, K_plus=K_plus,
        froude=froude, gravity=gravity,
    )


def uniform_grid(x_min: float, x_max: float, n_cells: int, params: Optional[Mapping] = None) -> Grid:
    """Grid of ``n_cells`` equal cells on ``[x_min, x_max]``."""
    return build_grid(np.linspace(x_min, x_max, n_cells + 1), params)


def _two_sided(values, grid: Grid, name: str):
    """Normalise interface samples to ``(from_left, from_right)`` arrays."""
    n = grid.n_cells + 1
    if callable(values):
        v = np.asarray(values(grid.interfaces), dtype=float)
        v = np.broadcast_to(v, (n,)).copy()
        return v, v.copy()
    v = np.asarray(values, dtype=float)
    if v.shape == (n,):
        return v.copy(), v.copy()
    if v.shape == (2, n):
        return v[0].copy(), v[1].copy()
    raise GridError(f"{name} must have shape ({n},) or (2, {n}), got {v.shape}")


@dataclass(frozen=True)
class BedGeometry:
    """Bed elevation seen from inside each cell.

    Attributes
    ----------
    b_left, b_right : ndarray, shape (J,)
        Bed at the left and right edge of each cell (inner-side values, so a
        jump at an interface is allowed).
    b_cell : ndarray, shape (J,)
        Mean of the two edge values.
    db_cell : ndarray, shape (J,)
        ``b_right - b_left``.
    db_interface : ndarray, shape (J+1,)
        Difference of cell beds across each interface, zero at the domain
        ends because the ghost cells copy the boundary bed.
    db_up_geo : ndarray, shape (J,)
        Geometric bed-variation scale of each cell.
    """

    b_left: np.ndarray
    b_right: np.ndarray
    b_cell: np.ndarray
    db_cell: np.ndarray
    db_interface: np.ndarray
    db_up_geo: np.ndarray

    @property
    def b_padded(self) -> np.ndarray:
        """Cell beds with one constant-extrapolated ghost on each side."""
        b = self.b_cell
        return np.concatenate([b[:1], b, b[-1:]])

    def reversed(self) -> "BedGeometry":
        return BedGeometry(
            b_left=self.b_right[::-1].copy(),
            b_right=self.b_left[::-1].copy(),
            b_cell=self.b_cell[::-1].copy(),
            db_cell=-self.db_cell[::-1],
            db_interface=-self.db_interface[::-1],
            db_up_geo=self.db_up_geo[::-1].copy(),
        )


BedInput = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], list, tuple]


def bed_stats(bed: BedInput, grid: Grid) -> BedGeometry:
    """Derive per-cell bed differences and the geometric variation scale.

    Parameters
    ----------
    bed : array_like or callable
        Either interface samples of shape ``(J+1,)`` (continuous bed), a pair
        of shape ``(2, J+1)`` giving the value approached from the left and
        from the right of every interface, or a callable evaluated at the
        interfaces.
    grid : Grid

    Returns
    -------
    BedGeometry
    """
    from_left, from_right = _two_sided(bed, grid, "bed")
    if not (np.all(np.isfinite(from_left)) and np.all(np.isfinite(from_right))):
        raise GridError("bed values must be finite")
    b_left = from_right[:-1]
    b_right = from_left[1:]
    b_cell = 0.5 * (b_left + b_right)
    db_cell = b_right - b_left
    b_pad = np.concatenate([b_cell[:1], b_cell, b_cell[-1:]])
    db_int = np.diff(b_pad)

    half = 0.5 * db_cell
    terms = np.stack([
        np.abs(half - grid.alpha_left * db_int[:-1]),
        np.abs(half),
        np.abs(half - grid.alpha_center * (b_pad[2:] - b_pad[:-2])),
        np.abs(half - grid.alpha_right * db_int[1:]),
    ])
    return BedGeometry(
        b_left=b_left, b_right=b_right, b_cell=b_cell, db_cell=db_cell,
        db_interface=db_int, db_up_geo=terms.max(axis=0),
    )


def flat_bed(grid: Grid, level: float = 0.0) -> BedGeometry:
    return bed_stats(np.full(grid.n_cells + 1, float(level)), grid)


@dataclass(frozen=True)
class WidthGeometry:
    """Channel width seen from inside each cell.

    Attributes
    ----------
    w_left, w_right : ndarray, shape (J,)
        Width at the left and right edge of each cell.
    w_cell : ndarray, shape (J,)
        Mean of the edge widths.
    w_gradient : ndarray, shape (J,)
        ``(w_right - w_left) / dx``.
    w_down : ndarray, shape (J,)
        Smaller of the two edge widths.
    """

    w_left: np.ndarray
    w_right: np.ndarray
    w_cell: np.ndarray
    w_gradient: np.ndarray
    w_down: np.ndarray

    @property
    def dw_cell(self) -> np.ndarray:
        return self.w_right - self.w_left


def width_stats(width: BedInput, grid: Grid) -> WidthGeometry:
    """Per-cell width description from interface samples (same formats as the bed)."""
    from_left, from_right = _two_sided(width, grid, "width")
    if np.any(~np.isfinite(from_left)) or np.any(~np.isfinite(from_right)):
        raise GridError("width values must be finite")
    w_left = from_right[:-1]
    w_right = from_left[1:]
    if np.any(w_left < 0) or np.any(w_right < 0):
        raise GridError("width must be nonnegative")
    w_cell = 0.5 * (w_left + w_right)
    if np.any(w_cell <= 0):
        raise GridError("cell width w_j must be positive")
    return WidthGeometry(
        w_left=w_left, w_right=w_right, w_cell=w_cell,
        w_gradient=(w_right - w_left) / grid.dx,
        w_down=np.minimum(w_left, w_right),
    )


def constant_width(grid: Grid, value: float = 1.0) -> WidthGeometry:
    return width_stats(np.full(grid.n_cells + 1, float(value)), grid)
