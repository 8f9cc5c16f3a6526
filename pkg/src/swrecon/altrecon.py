"""Three reference depth reconstructions used for comparison.

These are compact re-implementations of well-known wet/dry strategies:

* ``kurganov_levy``: surface slopes where a cell and both neighbours are
  deeper than a threshold, depth slopes otherwise, with negative edges
  repaired by tilting the cell so that edge is exactly dry.
* ``chertock``: surface slopes, and any cell with a negative edge is made
  flat.
* ``bollermann``: surface slopes for cells holding enough fluid to cover the
  bed, and a volume-conserving wet wedge with a flat surface otherwise.

They only aim at the behaviour needed to contrast the blended scheme on a
small set-up; they are not faithful ports of the original solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .limiter import limited_slopes
from .mesh import BedGeometry, Grid
from .wbrecon import pad

SCHEMES = ("kurganov_levy", "chertock", "bollermann")


@dataclass(frozen=True)
class AltScheme:
    """Selector for one of the reference reconstructions."""

    kind: str
    depth_threshold: float = 0.75

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.kind == "kurganov_levy" and not self.depth_threshold > 0:
            raise ValueError("depth threshold must be positive")

    def __call__(self, grid: Grid, bed: BedGeometry, h) -> Tuple[np.ndarray, np.ndarray]:
        if self.kind == "kurganov_levy":
            return kurganov_levy(grid, bed, h, self.depth_threshold)
        if self.kind == "chertock":
            return chertock(grid, bed, h)
        left, right, _ = bollermann(grid, bed, h)
        return left, right


def _slopes(grid: Grid, v_pad):
    return limited_slopes(v_pad, grid.alpha_left, grid.alpha_center, grid.alpha_right, grid.dx)


def _surface_edges(grid: Grid, bed: BedGeometry, h):
    h = np.asarray(h, float)
    eta_pad = pad(h) + bed.b_padded
    grad = _slopes(grid, eta_pad) - bed.db_cell / grid.dx
    half = 0.5 * grid.dx * grad
    return h - half, h + half


def kurganov_levy(grid: Grid, bed: BedGeometry, h, K_threshold: float = 0.75):
    """Threshold switch between surface and depth slopes.

    Returns
    -------
    h_left, h_right : ndarray
        Nonnegative edge depths.  A negative edge is set to zero and the
        opposite edge to ``2*h_j`` so the cell average is kept.
    """
    h = np.asarray(h, float)
    h_pad = pad(h)
    deep = np.minimum(np.minimum(h_pad[:-2], h), h_pad[2:]) > K_threshold
    eta_l, eta_r = _surface_edges(grid, bed, h)
    half = 0.5 * grid.dx * _slopes(grid, h_pad)
    left = np.where(deep, eta_l, h - half)
    right = np.where(deep, eta_r, h + half)
    neg_l, neg_r = left < 0, right < 0
    left, right = (np.where(neg_l, 0.0, np.where(neg_r, 2 * h, left)),
                   np.where(neg_r, 0.0, np.where(neg_l, 2 * h, right)))
    return left, right


def chertock(grid: Grid, bed: BedGeometry, h):
    """Surface slopes; a cell with any negative edge is made constant."""
    h = np.asarray(h, float)
    left, right = _surface_edges(grid, bed, h)
    bad = (left < 0) | (right < 0)
    return np.where(bad, h, left), np.where(bad, h, right)


@dataclass
class Wedge:
    """Wet wedge inside partially flooded cells.

    ``wet_length`` is the wetted part of each cell and ``depth_max`` the
    depth at its deep end; both are zero-filled for other cells.
    """

    partial: np.ndarray
    wet_length: np.ndarray
    depth_max: np.ndarray

    def volume(self) -> np.ndarray:
        return 0.5 * self.wet_length * self.depth_max


def bollermann(grid: Grid, bed: BedGeometry, h, fallback: Optional[str] = "flatten"):
    """Surface slopes with a wet wedge for cells that cannot cover their bed.

    A cell is partially flooded when ``h_j < |db_j|/2``.  The fluid then
    sits against the low edge with a flat surface: the wet length is
    ``dx*sqrt(2 h_j / |db_j|)`` and the depth at the low edge
    ``sqrt(2 h_j |db_j|)``, the high edge is dry.  Fully flooded cells whose
    surface slope still produces a negative edge are flattened.

    Returns
    -------
    h_left, h_right : ndarray
    wedge : Wedge
    """
    h = np.asarray(h, float)
    left, right = _surface_edges(grid, bed, h)
    db = bed.db_cell
    mag = np.abs(db)
    partial = h < 0.5 * mag
    with np.errstate(divide="ignore", invalid="ignore"):
        depth_max = np.where(partial, np.sqrt(2.0 * h * mag), 0.0)
        wet = np.where(partial, grid.dx * np.sqrt(np.where(partial, 2.0 * h / mag, 0.0)), 0.0)
    # bed rising to the right keeps water at the left edge and vice versa
    left = np.where(partial, np.where(db > 0, depth_max, 0.0), left)
    right = np.where(partial, np.where(db > 0, 0.0, depth_max), right)
    if fallback == "flatten":
        bad = ~partial & ((left < 0) | (right < 0))
        left, right = np.where(bad, h, left), np.where(bad, h, right)
    return left, right, Wedge(partial=partial, wet_length=wet, depth_max=depth_max)
