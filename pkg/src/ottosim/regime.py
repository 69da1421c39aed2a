"""Heat-engine operation region in the (epsilon1, epsilon2) plane.

The limit-cycle work is estimated from equilibrium dot occupations
(Lorentzian-weighted Fermi integrals); no dynamics is run here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .model import LeadSpec


class QuadratureError(RuntimeError):
    def __init__(self, err: float):
        super().__init__(f"occupation quadrature did not converge (error {err:.2e})")
        self.error = err


@dataclass
class RegimeGrid:
    eps1_axis: np.ndarray
    eps2_axis: np.ndarray
    W_est: np.ndarray  # shape (len(eps1_axis), len(eps2_axis))


def equilibrium_occupation(eps_d: float, lead: LeadSpec) -> float:
    """Dot occupation coupled to one equilibrium lead at level energy eps_d.

    Lorentzian-weighted Fermi integral on the compactified axis
    e = eps_d + (Gamma/2) tan(theta), where the Lorentzian weight is flat
    and the whole real line maps to (-pi/2, pi/2).  The tanh form of the
    Fermi factor avoids overflow at the endpoints.
    """
    if lead.Gamma <= 0.0:
        raise ValueError("Gamma must be > 0")
    half = 0.5 * lead.Gamma
    beta, mu = lead.beta, lead.mu

    def integrand(theta):
        e = eps_d + half * math.tan(theta)
        return 0.5 * (1.0 - math.tanh(0.5 * beta * (e - mu))) / math.pi

    theta_mu = math.atan((mu - eps_d) / half)
    val, err = quad(integrand, -math.pi / 2, math.pi / 2, points=[theta_mu],
                    epsabs=1e-12, epsrel=1e-12, limit=200)
    if err > 1e-9:
        raise QuadratureError(err)
    return float(val)


def limit_cycle_work_estimate(
    eps1: float, eps2: float, hot: LeadSpec, cold: LeadSpec
) -> float:
    """<n>_h (eps2 - eps1) + <n>_c (eps1 - eps2) with equilibrium occupations."""
    if eps1 == eps2:
        return 0.0
    n_h = equilibrium_occupation(eps1, hot)
    n_c = equilibrium_occupation(eps2, cold)
    return n_h * (eps2 - eps1) + n_c * (eps1 - eps2)


def engine_region_map(
    eps1_axis: np.ndarray, eps2_axis: np.ndarray, hot: LeadSpec, cold: LeadSpec
) -> RegimeGrid:
    eps1_axis = np.asarray(eps1_axis, float)
    eps2_axis = np.asarray(eps2_axis, float)
    for ax, name in ((eps1_axis, "eps1"), (eps2_axis, "eps2")):
        if ax.ndim != 1 or ax.size < 1 or np.any(np.diff(ax) <= 0):
            raise ValueError(f"{name} axis must be 1-d and strictly increasing")
    # occupation depends on one lead and one level energy only: evaluate per axis
    n_h = np.array([equilibrium_occupation(e1, hot) for e1 in eps1_axis])
    n_c = np.array([equilibrium_occupation(e2, cold) for e2 in eps2_axis])
    d = eps2_axis[None, :] - eps1_axis[:, None]
    W = n_h[:, None] * d - n_c[None, :] * d
    return RegimeGrid(eps1_axis=eps1_axis, eps2_axis=eps2_axis, W_est=W)
