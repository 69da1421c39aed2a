"""Otto driving protocol and the block Hamiltonian of dot + discretized leads.

Everything here is a pure function of (t, configuration); units are
dimensionless with hbar = k_B = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HOT = "hot"
COLD = "cold"

PROTOCOL_SHAPES = ("smoothstep", "linear")


class ModelError(ValueError):
    """Invalid protocol or lead discretization."""


def _ramp_shape(s: float, shape: str) -> float:
    if shape == "smoothstep":
        return 3.0 * s * s - 2.0 * s * s * s
    return s


def _ramp_shape_deriv(s: float, shape: str) -> float:
    if shape == "smoothstep":
        return 6.0 * s * (1.0 - s)
    return 1.0


def _smoothstep(s: float) -> float:
    return 3.0 * s * s - 2.0 * s * s * s


@dataclass(frozen=True)
class OttoProtocol:
    """Four-stroke Otto cycle for the dot level energy.

    Strokes (half-open in time, period T = t1+t2+t3+t4):
      1. [0, t1): level fixed at epsilon1, hot lead attached.
      2. [t1, t1+t2): isolated level ramped epsilon1 -> epsilon2.
      3. [t1+t2, t1+t2+t3): level fixed at epsilon2, cold lead attached.
      4. [t1+t2+t3, T): isolated level ramped back epsilon2 -> epsilon1.

    ``switch_ramp`` > 0 turns the sharp 0/1 lead switching into a smooth
    rise/fall of that duration inside the coupled strokes.  The default 0
    reproduces the sharp protocol; the smooth variant is provided as a hook
    and is otherwise unexercised.
    """

    epsilon1: float = 2.0
    epsilon2: float = 1.0
    t1: float = 20.0
    t2: float = 10.0
    t3: float = 20.0
    t4: float = 10.0
    shape: str = "smoothstep"
    switch_ramp: float = 0.0

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            if not getattr(self, name) > 0.0:
                raise ModelError(f"stroke duration {name} must be > 0")
        if self.shape not in PROTOCOL_SHAPES:
            raise ModelError(f"unknown protocol shape {self.shape!r}")
        if self.switch_ramp < 0.0:
            raise ModelError("switch_ramp must be >= 0")
        if self.switch_ramp > 0.0 and 2.0 * self.switch_ramp > min(self.t1, self.t3):
            raise ModelError("switch_ramp does not fit inside the isochores")

    @property
    def period(self) -> float:
        return self.t1 + self.t2 + self.t3 + self.t4

    @property
    def boundaries(self) -> tuple[float, float, float, float]:
        """Stroke end times (b1, b2, b3, T) within one period."""
        b1 = self.t1
        b2 = b1 + self.t2
        b3 = b2 + self.t3
        return (b1, b2, b3, b3 + self.t4)

    def reduce(self, t: float) -> float:
        """Map t >= 0 into [0, T).  Exact for t on dyadic grids."""
        T = self.period
        c = math.floor(t / T)
        s = t - c * T
        if s >= T:
            s -= T
        if s < 0.0:
            s = 0.0
        return s

    def stroke_index(self, t: float) -> int:
        s = self.reduce(t)
        b1, b2, b3, _ = self.boundaries
        if s < b1:
            return 0
        if s < b2:
            return 1
        if s < b3:
            return 2
        return 3

    def epsilon_at(self, t: float) -> float:
        s = self.reduce(t)
        b1, b2, b3, _ = self.boundaries
        e1, e2 = self.epsilon1, self.epsilon2
        if s < b1:
            return e1
        if s < b2:
            return e1 - (e1 - e2) * _ramp_shape((s - b1) / self.t2, self.shape)
        if s < b3:
            return e2
        return e2 + (e1 - e2) * _ramp_shape((s - b3) / self.t4, self.shape)

    def depsilon_at(self, t: float) -> float:
        """d epsilon/dt; zero on the isochores."""
        s = self.reduce(t)
        b1, b2, b3, _ = self.boundaries
        e1, e2 = self.epsilon1, self.epsilon2
        if s < b1 or (b2 <= s < b3):
            return 0.0
        if s < b2:
            return -(e1 - e2) * _ramp_shape_deriv((s - b1) / self.t2, self.shape) / self.t2
        return (e1 - e2) * _ramp_shape_deriv((s - b3) / self.t4, self.shape) / self.t4

    def depsilon_left(self, t: float) -> float:
        """Left-sided limit of d epsilon/dt; differs from depsilon_at only
        at stroke boundaries for the linear ramp shape."""
        s = self.reduce(t)
        if s == 0.0 and t > 0.0:
            s = self.period
        b1, b2, b3, _ = self.boundaries
        e1, e2 = self.epsilon1, self.epsilon2
        if s <= b1 or (b2 < s <= b3):
            return 0.0
        if s <= b2:
            return -(e1 - e2) * _ramp_shape_deriv((s - b1) / self.t2, self.shape) / self.t2
        return (e1 - e2) * _ramp_shape_deriv((s - b3) / self.t4, self.shape) / self.t4

    def _window(self, s: float, a: float, b: float) -> float:
        """Switching profile on the half-open window [a, b)."""
        if not (a <= s < b):
            return 0.0
        r = self.switch_ramp
        if r == 0.0:
            return 1.0
        if s < a + r:
            return _smoothstep((s - a) / r)
        if s >= b - r:
            return _smoothstep((b - s) / r)
        return 1.0

    def _window_deriv(self, s: float, a: float, b: float) -> float:
        if not (a <= s < b):
            return 0.0
        r = self.switch_ramp
        if r == 0.0:
            return 0.0
        if s < a + r:
            return 6.0 * ((s - a) / r) * (1.0 - (s - a) / r) / r
        if s >= b - r:
            return -6.0 * ((b - s) / r) * (1.0 - (b - s) / r) / r
        return 0.0

    def lambda_at(self, t: float, lead: str) -> float:
        """Lead switching coefficient; 0/1 for the sharp default protocol."""
        s = self.reduce(t)
        b1, b2, b3, _ = self.boundaries
        if lead == HOT:
            return self._window(s, 0.0, b1)
        if lead == COLD:
            return self._window(s, b2, b3)
        raise ModelError(f"unknown lead {lead!r}")

    def dlambda_at(self, t: float, lead: str) -> float:
        s = self.reduce(t)
        b1, b2, b3, _ = self.boundaries
        if lead == HOT:
            return self._window_deriv(s, 0.0, b1)
        if lead == COLD:
            return self._window_deriv(s, b2, b3)
        raise ModelError(f"unknown lead {lead!r}")


@dataclass(frozen=True)
class LeadSpec:
    """A discretized wideband lead: N equally spaced levels on [-D, D].

    Levels sit at interval midpoints so none coincides with the band edges.
    ``gamma`` is the relaxation rate toward the lead's own equilibrium
    imposed by the implicit superbath.
    """

    beta: float
    mu: float = 0.0
    D: float = 3.0
    N: int = 200
    Gamma: float = 0.5
    gamma: float = 0.03

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ModelError("beta must be > 0")
        if self.D <= 0.0:
            raise ModelError("half-bandwidth D must be > 0")
        if int(self.N) != self.N or self.N < 1:
            raise ModelError("level count N must be a positive integer")
        if self.Gamma <= 0.0:
            raise ModelError("Gamma must be > 0")
        if self.gamma < 0.0:
            raise ModelError("gamma must be >= 0")

    @property
    def delta_eps(self) -> float:
        return 2.0 * self.D / self.N

    @property
    def tunneling(self) -> float:
        """Uniform amplitude t_v with Gamma = 2 pi t_v^2 / delta_eps."""
        return math.sqrt(self.Gamma * self.delta_eps / (2.0 * math.pi))

    def validate_discretization(self) -> None:
        if self.Gamma <= self.delta_eps:
            raise ModelError(
                f"Gamma={self.Gamma} must exceed the level spacing {self.delta_eps}"
            )
        if 2.0 * self.D <= self.Gamma:
            raise ModelError(f"bandwidth 2D={2 * self.D} must exceed Gamma={self.Gamma}")

    def energies(self) -> np.ndarray:
        de = self.delta_eps
        return -self.D + (np.arange(self.N) + 0.5) * de

    def fermi(self, eps) -> np.ndarray:
        return 1.0 / (np.exp(self.beta * (np.asarray(eps, float) - self.mu)) + 1.0)

    def occupations(self) -> np.ndarray:
        return self.fermi(self.energies())


@dataclass(frozen=True)
class ArrowheadHamiltonian:
    """H(t) = diag(energies) + symmetric border on the dot row/column.

    ``diag`` holds (hot lead energies, dot energy, cold lead energies);
    ``border`` holds the coupling column lambda_v(t) * t_v, zero at the dot.
    """

    diag: np.ndarray
    border: np.ndarray
    dot: int

    @property
    def dim(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag).astype(complex)
        h[self.dot, :] += self.border
        h[:, self.dot] += self.border
        return h


def build_hamiltonian(
    t: float, hot: LeadSpec, cold: LeadSpec, protocol: OttoProtocol
) -> ArrowheadHamiltonian:
    """Assemble the (N_h + 1 + N_c)-dimensional block Hamiltonian at time t."""
    hot.validate_discretization()
    cold.validate_discretization()
    dot = hot.N
    n = hot.N + 1 + cold.N
    diag = np.empty(n)
    diag[:dot] = hot.energies()
    diag[dot] = protocol.epsilon_at(t)
    diag[dot + 1:] = cold.energies()
    border = np.zeros(n)
    border[:dot] = protocol.lambda_at(t, HOT) * hot.tunneling
    border[dot + 1:] = protocol.lambda_at(t, COLD) * cold.tunneling
    return ArrowheadHamiltonian(diag=diag, border=border, dot=dot)
