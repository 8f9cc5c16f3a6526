"""Exact dam-break solution on a flat bed (Stoker, Ritter for a dry bed).

Used as an independent reference for the solver.  Left state ``h_left`` at
rest, right state ``h_right`` at rest, discontinuity at ``x0`` at ``t = 0``.
The middle depth solves rarefaction/shock velocity matching with
``scipy.optimize.brentq``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq


@dataclass(frozen=True)
class DamBreak:
    """Self-similar dam-break solution.

    Attributes
    ----------
    h_left, h_right : float
        Initial depths, ``h_left > h_right >= 0``.
    gravity : float
    h_mid, u_mid : float
        Middle state (zero for a dry downstream bed).
    shock_speed : float
        Speed of the bore (wet bed) or dry front.
    """

    h_left: float
    h_right: float
    gravity: float
    h_mid: float
    u_mid: float
    shock_speed: float

    def profile(self, x, t, x0: float = 0.0):
        """Depth and velocity at positions ``x`` and time ``t > 0``."""
        x = np.asarray(x, float)
        g = self.gravity
        cL = np.sqrt(g * self.h_left)
        s = (x - x0) / t
        h = np.full_like(s, self.h_right)
        u = np.zeros_like(s)
        if self.h_right == 0:
            # Ritter: fan reaches the dry front at 2 c_L
            fan = (s > -cL) & (s < 2 * cL)
            h = np.where(s <= -cL, self.h_left, h)
        else:
            cm = np.sqrt(g * self.h_mid)
            fan = (s > -cL) & (s < self.u_mid - cm)
            mid = (s >= self.u_mid - cm) & (s < self.shock_speed)
            h = np.where(s <= -cL, self.h_left, h)
            h = np.where(mid, self.h_mid, h)
            u = np.where(mid, self.u_mid, u)
        hf = (2 * cL - s) ** 2 / (9 * g)
        h = np.where(fan, hf, h)
        u = np.where(fan, 2.0 / 3.0 * (cL + s), u)
        return h, u

    def cell_averages(self, interfaces, t, x0: float = 0.0):
        """Exact depth averaged over each cell (adaptive quadrature)."""
        x = np.asarray(interfaces, float)
        out = np.empty(x.size - 1)
        for i in range(out.size):
            val, _ = quad(lambda y: float(self.profile(np.array([y]), t, x0)[0][0]), x[i], x[i + 1],
                          limit=100, points=self._kinks(t, x0, x[i], x[i + 1]))
            out[i] = val / (x[i + 1] - x[i])
        return out

    def _kinks(self, t, x0, a, b):
        cL = np.sqrt(self.gravity * self.h_left)
        pts = [x0 - cL * t]
        if self.h_right == 0:
            pts.append(x0 + 2 * cL * t)
        else:
            pts += [x0 + (self.u_mid - np.sqrt(self.gravity * self.h_mid)) * t, x0 + self.shock_speed * t]
        inside = [p for p in pts if a < p < b]
        return inside or None


def dam_break(h_left: float, h_right: float, gravity: float = 9.81) -> DamBreak:
    """Solve the dam-break Riemann problem for water initially at rest."""
    if not h_left > h_right >= 0:
        raise ValueError("need h_left > h_right >= 0")
    g = gravity
    cL = np.sqrt(g * h_left)
    if h_right == 0:
        return DamBreak(h_left, 0.0, g, 0.0, 0.0, 2 * cL)

    def mismatch(hm):
        u_raref = 2 * (cL - np.sqrt(g * hm))
        u_shock = (hm - h_right) * np.sqrt(0.5 * g * (hm + h_right) / (hm * h_right))
        return u_raref - u_shock

    hm = brentq(mismatch, h_right, h_left, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    um = 2 * (cL - np.sqrt(g * hm))
    s = hm * um / (hm - h_right)
    return DamBreak(h_left, h_right, g, hm, um, s)
