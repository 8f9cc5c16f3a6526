"""Random case generators shared by the property and acceptance tests."""

import numpy as np

from swrecon.mesh import build_grid, bed_stats, width_stats

STRIDE = 3  # perturbing cell j only moves edges of cells j-1, j, j+1


def random_grid(rng, J, alpha_range=(0.05, 0.95), K_range=(1.0, 200.0)):
    dx = rng.uniform(0.2, 2.0, J)
    x = np.concatenate([[0.0], np.cumsum(dx)])
    a_m = rng.uniform(*alpha_range, J + 1)
    a_p = rng.uniform(*alpha_range, J + 1)
    a_c = rng.uniform(*alpha_range, J)
    base = dict(alpha_minus=a_m, alpha_plus=a_p, alpha_center=a_c,
                K_minus=rng.uniform(*K_range, J + 1), K_plus=rng.uniform(*K_range, J + 1))
    g0 = build_grid(x, base)
    gain = g0.gain * rng.uniform(0.05, 1.0, J)
    return build_grid(x, dict(base, gain=gain))


def random_bed(rng, grid, jump_prob=0.3):
    """Piecewise-linear bed with random slopes and occasional jumps at interfaces."""
    J = grid.n_cells
    slopes = rng.normal(0.0, 1.0, J) * rng.choice([0.0, 0.1, 1.0], J)
    base = np.concatenate([[0.0], np.cumsum(slopes * grid.dx)])
    jumps = rng.normal(0.0, 0.5, J + 1) * (rng.random(J + 1) < jump_prob)
    return bed_stats(np.vstack([base, base + jumps]), grid)


def random_depths(rng, bed, J, dry_prob=0.1):
    """Depths on scales below, near and above the local bed variation."""
    scale = np.maximum(bed.db_up_geo, 0.05)
    h = scale * rng.choice([0.01, 0.3, 1.0, 3.0, 10.0], J) * rng.random(J)
    h[rng.random(J) < dry_prob] = 0.0
    return h


def random_cutoff(rng, J):
    return np.where(rng.random(J) < 0.6, 0.0, rng.uniform(0.0, 2.0, J))


def random_widths(rng, grid, zero_prob=0.05):
    J = grid.n_cells
    w = rng.uniform(0.1, 3.0, J + 1)
    w[rng.random(J + 1) < zero_prob] = 0.0
    # keep every cell's mean width positive
    bad = (w[:-1] + w[1:]) == 0
    w[1:][bad] = 1.0
    return width_stats(w, grid)


def perturbed(values, offset, eps):
    """Copy of ``values`` with every STRIDE-th entry from ``offset`` raised by ``eps``."""
    out = values.copy()
    out[offset::STRIDE] += eps
    return out
