"""Minmod slope limiter with per-interface weights, plus test predicates.

The limited slope of a cell with neighbours ``v_prev`` and ``v_next`` is::

    sigma = (2/dx) * minmod(a_prev*(v_mid - v_prev),
                            a_center*(v_next - v_prev),
                            a_next*(v_next - v_mid))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class SlopeParams:
    """Limiter weights for a single cell (or arrays of cells, broadcast together).

    Parameters
    ----------
    alpha_plus_prev : float
        Weight on the backward difference.
    alpha_center : float
        Weight on the centred difference.
    alpha_minus_next : float
        Weight on the forward difference.
    dx : float
        Cell width.
    """

    alpha_plus_prev: float = 0.75
    alpha_center: float = 0.25
    alpha_minus_next: float = 0.75
    dx: float = 1.0

    def __post_init__(self):
        for a in (self.alpha_plus_prev, self.alpha_center, self.alpha_minus_next):
            if not np.all((np.asarray(a) > 0.0) & (np.asarray(a) < 1.0)):
                raise ValueError("alpha outside (0, 1)")
        if not np.all(np.asarray(self.dx) > 0):
            raise ValueError("dx must be positive")

    def reflected(self) -> "SlopeParams":
        return SlopeParams(self.alpha_minus_next, self.alpha_center, self.alpha_plus_prev, self.dx)


def minmod(values: Sequence[float]) -> float:
    """Smallest magnitude if all arguments share a sign, else zero.

    >>> minmod((1, 2, 3)), minmod((-1, 2, 3)), minmod((-1, -2, -3))
    (1.0, 0.0, -1.0)
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("minmod of empty sequence")
    lo, hi = v.min(), v.max()
    if lo > 0:
        return float(lo)
    if hi < 0:
        return float(hi)
    return 0.0


def minmod3(a, b, c):
    """Elementwise minmod of three arrays."""
    lo = np.minimum(np.minimum(a, b), c)
    hi = np.maximum(np.maximum(a, b), c)
    return np.where(lo > 0, lo, np.where(hi < 0, hi, 0.0))


def _differences(v_pad):
    return v_pad[1:-1] - v_pad[:-2], v_pad[2:] - v_pad[:-2], v_pad[2:] - v_pad[1:-1]


def limited_slopes(v_pad: np.ndarray, alpha_left, alpha_center, alpha_right, dx,
                   offset_pad: np.ndarray = None) -> np.ndarray:
    """Vectorised minmod slopes for every interior entry of a padded array.

    Parameters
    ----------
    v_pad : ndarray, shape (J+2,)
        Cell values with one ghost on each side.
    alpha_left, alpha_center, alpha_right, dx : array_like, shape (J,)
    offset_pad : ndarray, shape (J+2,), optional
        Slopes are taken of ``v + offset`` with differences formed field by
        field, so a constant offset leaves them bit-identical to those of
        ``v``.

    Returns
    -------
    ndarray, shape (J,)
    """
    back, cen, fwd = _differences(v_pad)
    if offset_pad is not None:
        ob, oc, of = _differences(offset_pad)
        back, cen, fwd = back + ob, cen + oc, fwd + of
    return (2.0 / dx) * minmod3(alpha_left * back, alpha_center * cen, alpha_right * fwd)


def slope(v_prev, v_mid, v_next, p: SlopeParams):
    """Minmod-limited gradient for one cell (scalars or broadcastable arrays)."""
    vals = [np.asarray(v, dtype=float) for v in (v_prev, v_mid, v_next)]
    if not all(np.all(np.isfinite(v)) for v in vals):
        raise ValueError("non-finite input to slope")
    v_prev, v_mid, v_next = vals
    out = (2.0 / p.dx) * minmod3(
        p.alpha_plus_prev * (v_mid - v_prev),
        p.alpha_center * (v_next - v_prev),
        p.alpha_minus_next * (v_next - v_mid),
    )
    return float(out) if out.ndim == 0 else out


def tvd_envelope(v_prev, v_mid, v_next, alpha_prev, alpha_next, dx):
    """Bounds ``(lower, upper)`` that keep a slope total-variation diminishing."""
    back = alpha_prev * (np.asarray(v_mid, float) - v_prev)
    fwd = alpha_next * (np.asarray(v_next, float) - v_mid)
    lower = np.maximum(np.minimum(back, 0.0), np.minimum(fwd, 0.0))
    upper = np.minimum(np.maximum(back, 0.0), np.maximum(fwd, 0.0))
    return (2.0 / dx) * lower, (2.0 / dx) * upper


def tvd_envelope_holds(sigma, v_prev, v_mid, v_next, p: SlopeParams, rtol: float = 1e-14):
    """Whether ``sigma`` lies inside the TVD slope envelope.

    A small relative slack ``rtol`` (times the envelope magnitude) absorbs
    rounding; at an extremum the envelope collapses to exactly zero.
    """
    lower, upper = tvd_envelope(v_prev, v_mid, v_next, p.alpha_plus_prev, p.alpha_minus_next, p.dx)
    slack = rtol * np.maximum(np.abs(lower), np.abs(upper))
    ok = (np.asarray(sigma) >= lower - slack) & (np.asarray(sigma) <= upper + slack)
    return bool(ok) if np.ndim(ok) == 0 else ok


@dataclass(frozen=True)
class MonotonicityProbe:
    """Finite-difference derivatives of edge values with respect to one cell.

    ``self_left`` / ``self_right`` are the derivatives of the probed cell's own
    left and right edges; ``neighbour_left`` is the right edge of the cell to
    the left and ``neighbour_right`` the left edge of the cell to the right
    (both facing the probed cell).  Each value is the centred estimate; the
    one-sided estimates are kept so that callers can skip kinks.
    """

    self_left: float
    self_right: float
    neighbour_left: float
    neighbour_right: float
    forward: Tuple[float, float, float, float]
    backward: Tuple[float, float, float, float]
    kink: bool

    def min_one_sided(self) -> Tuple[float, float, float, float]:
        return tuple(min(f, b) for f, b in zip(self.forward, self.backward))


def _facing(left, right, j):
    nl = left.size
    return (
        float(left[j]),
        float(right[j]),
        float(right[j - 1]) if j > 0 else 0.0,
        float(left[j + 1]) if j + 1 < nl else 0.0,
    )


def probe_monotonicity(
    recon: Callable[[float], Tuple[np.ndarray, np.ndarray]],
    j: int,
    base: float,
    eps: float = 1e-7,
) -> MonotonicityProbe:
    """Finite-difference monotonicity probe around a single cell average.

    Parameters
    ----------
    recon : callable
        ``recon(v)`` returns ``(left_edges, right_edges)`` for all cells with
        cell ``j``'s average set to ``v``.
    j : int
        Probed cell.
    base : float
        Value around which to differentiate.
    eps : float
        Step, must be positive.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    mid = np.array(_facing(*recon(base), j))
    up = np.array(_facing(*recon(base + eps), j))
    down = np.array(_facing(*recon(base - eps), j))
    fwd = (up - mid) / eps
    bwd = (mid - down) / eps
    cen = 0.5 * (fwd + bwd)
    kink = bool(np.any(np.abs(fwd - bwd) > 10 * eps))
    return MonotonicityProbe(*cen.tolist(), forward=tuple(fwd.tolist()),
                             backward=tuple(bwd.tolist()), kink=kink)
