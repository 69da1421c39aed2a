"""Correlator propagation under the driven Liouville-von-Neumann equation.

The one-particle correlator sigma_ij = <c_i^dagger c_j> is evolved with
fixed-step RK4.  The Hamiltonian is diagonal except for the dot row/column
(arrowhead form), so the commutator is evaluated in O(n^2) without dense
matrix products.  Work/heat integrands are sampled on the step grid and
integrated per stroke with composite Simpson, an independent quadrature
route so the first-law residual genuinely probes the discretization.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .model import COLD, HOT, ArrowheadHamiltonian, LeadSpec, OttoProtocol

HERMITICITY_TOL = 1e-12


class NumericalInstabilityError(RuntimeError):
    """Non-finite correlator entry; reduce dt."""

    def __init__(self, step: int, t: float):
        super().__init__(
            f"non-finite correlator entry at step {step} (t={t:g}); "
            "reduce the time step"
        )
        self.step = step
        self.t = t


class StrokeBoundaryError(ValueError):
    """A single RK4 step may not straddle a stroke boundary."""


@numba.njit(cache=True)
def _arrowhead_commutator_damping(sigma, delta0, ed, dot, border, gmask, geq, out):
    """out = -i [H, sigma] - gmask*sigma + diag(geq) for arrowhead H.

    delta0[i, j] = d_i - d_j with the dot diagonal entry taken as zero;
    ``ed`` is the dot energy, ``border`` the scaled coupling column.
    """
    n = sigma.shape[0]
    brow = np.zeros(n, np.complex128)
    bcol = np.zeros(n, np.complex128)
    for k in range(n):
        bk = border[k]
        if bk != 0.0:
            for j in range(n):
                brow[j] += bk * sigma[k, j]
                bcol[j] += sigma[j, k] * bk
    for i in range(n):
        bi = border[i]
        si_d = sigma[i, dot]
        for j in range(n):
            c = delta0[i, j] * sigma[i, j] + bi * sigma[dot, j] - si_d * border[j]
            out[i, j] = -1j * c - gmask[i, j] * sigma[i, j]
        out[i, dot] += 1j * (ed * sigma[i, dot] + bcol[i])
    for j in range(n):
        out[dot, j] += -1j * (ed * sigma[dot, j] + brow[j])
    for i in range(n):
        out[i, i] += geq[i]


@numba.njit(cache=True)
def _rk4_combine_hermitize(sigma, k1, k2, k3, k4, dt):
    """In-place sigma += dt/6 (k1+2k2+2k3+k4), then (sigma+sigma^dag)/2.

    Returns the max Hermiticity deviation before symmetrization.
    """
    n = sigma.shape[0]
    c = dt / 6.0
    dev = 0.0
    for i in range(n):
        for j in range(i, n):
            a = sigma[i, j] + c * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            b = sigma[j, i] + c * (k1[j, i] + 2.0 * k2[j, i] + 2.0 * k3[j, i] + k4[j, i])
            bc = np.conj(b)
            d = abs(a - bc)
            if d > dev:
                dev = d
            m = 0.5 * (a + bc)
            sigma[i, j] = m
            sigma[j, i] = np.conj(m)
    return dev


def _simpson(f: np.ndarray, dt: float) -> np.ndarray:
    """Composite Simpson over uniform samples f[0..N] (axis 0).

    An odd interval count falls back to Simpson plus a 3/8 tail; a single
    interval degrades to the trapezoid rule.
    """
    n = f.shape[0] - 1
    if n < 1:
        raise ValueError("need at least two samples")
    if n == 1:
        return 0.5 * dt * (f[0] + f[1])
    w = np.zeros(n + 1)
    if n % 2 == 0:
        head = n
    else:
        head = n - 3
        w[head:] += (3.0 * dt / 8.0) * np.array([1.0, 3.0, 3.0, 1.0])
    if head:
        w[0] += dt / 3.0
        w[head] += dt / 3.0
        w[1:head:2] += 4.0 * dt / 3.0
        w[2:head:2] += 2.0 * dt / 3.0
    return w @ f


@dataclass
class Checkpoint:
    """Compact snapshot of sigma at a stroke boundary."""

    t: float
    diag: np.ndarray          # real occupations, length n
    dot_col: np.ndarray       # sigma[:, dot], complex
    trace: float
    eig_min: float
    eig_max: float
    corner_max: float         # max |hot-cold block| entry
    _dot: int = 0

    @property
    def dot_occupation(self) -> float:
        return float(self.diag[self._dot])


@dataclass
class CycleData:
    """Raw per-cycle accumulators feeding the thermodynamic ledger.

    The time integrals run over the smooth stroke interiors only; the
    lead-switching deltas never contribute to them (the drive integrand is
    sampled on the step grid and integrated with composite Simpson).
    """

    m: int
    w_cont: float = 0.0        # int Tr[sigma dH/dt] over smooth segments
    qh_super: float = 0.0      # gamma_h int Tr[Z_h H] dt
    qc_super: float = 0.0
    a_cont: float = 0.0        # int d/dt Tr[H_SI sigma] over smooth segments
    w_jump: float = 0.0        # Tr[dH sigma] summed over the lambda jumps
    boundaries: list = field(default_factory=list)  # 5 Checkpoints (start..end)

    @property
    def start(self) -> Checkpoint:
        return self.boundaries[0]

    @property
    def end(self) -> Checkpoint:
        return self.boundaries[-1]


@dataclass
class Trajectory:
    """Result of run_cycles: checkpoints + per-cycle accumulators."""

    hot: LeadSpec
    cold: LeadSpec
    protocol: OttoProtocol
    dt: float
    cycles: list
    times: np.ndarray          # per-step grid (cycle-resolved, length steps+1)
    occupation: np.ndarray     # dot occupation on that grid
    max_herm_dev: float
    final_sigma: np.ndarray

    @property
    def n_cycles(self) -> int:
        return len(self.cycles)


class DlvnSystem:
    """Driven resonant level + two discretized leads, DLvN dynamics."""

    def __init__(self, hot: LeadSpec, cold: LeadSpec, protocol: OttoProtocol):
        hot.validate_discretization()
        cold.validate_discretization()
        self.hot = hot
        self.cold = cold
        self.protocol = protocol
        self.dot = hot.N
        self.n = hot.N + 1 + cold.N
        d = self.dot
        n = self.n

        lead_diag = np.zeros(n)
        lead_diag[:d] = hot.energies()
        lead_diag[d + 1:] = cold.energies()
        self.lead_diag = lead_diag
        # dot energy enters separately so delta0 is time-independent
        self.delta0 = lead_diag[:, None] - lead_diag[None, :]

        self.border_hot = np.zeros(n)
        self.border_hot[:d] = hot.tunneling
        self.border_cold = np.zeros(n)
        self.border_cold[d + 1:] = cold.tunneling

        eq = np.zeros(n)
        eq[:d] = hot.occupations()
        eq[d + 1:] = cold.occupations()
        self.eq_diag = eq

        gmask = np.zeros((n, n))
        gmask[:d, :d] = hot.gamma
        gmask[d + 1:, d + 1:] = cold.gamma
        gmask[:d, d] = gmask[d, :d] = 0.5 * hot.gamma
        gmask[d + 1:, d] = gmask[d, d + 1:] = 0.5 * cold.gamma
        gmask[d, d] = 0.0
        self.gmask = gmask
        self.geq = np.diag(gmask) * eq

    # -- state construction ------------------------------------------------

    def initial_sigma(self, n_d0: float = 0.0) -> np.ndarray:
        """Factorized initial state: equilibrated leads, dot occupation n_d0."""
        diag = self.eq_diag.copy()
        diag[self.dot] = n_d0
        return np.diag(diag).astype(np.complex128)

    def hamiltonian(self, t: float) -> ArrowheadHamiltonian:
        diag = self.lead_diag.copy()
        diag[self.dot] = self.protocol.epsilon_at(t)
        border = (
            self.protocol.lambda_at(t, HOT) * self.border_hot
            + self.protocol.lambda_at(t, COLD) * self.border_cold
        )
        return ArrowheadHamiltonian(diag=diag, border=border, dot=self.dot)

    # -- right-hand sides --------------------------------------------------

    def rhs(self, sigma: np.ndarray, t: float) -> np.ndarray:
        """Dense-matrix evaluation of d sigma/dt (reference oracle)."""
        if sigma.shape != (self.n, self.n):
            raise ValueError(f"sigma has shape {sigma.shape}, expected {(self.n, self.n)}")
        h = self.hamiltonian(t).dense()
        out = -1j * (h @ sigma - sigma @ h)
        out -= self.gmask * sigma
        out[np.diag_indices(self.n)] += self.geq
        return out

    def rhs_structured(self, sigma: np.ndarray, t: float, out: np.ndarray | None = None) -> np.ndarray:
        """O(n^2) evaluation exploiting the arrowhead Hamiltonian."""
        if sigma.shape != (self.n, self.n):
            raise ValueError(f"sigma has shape {sigma.shape}, expected {(self.n, self.n)}")
        h = self.hamiltonian(t)
        if out is None:
            out = np.empty_like(sigma)
        _arrowhead_commutator_damping(
            sigma, self.delta0, h.diag[self.dot], self.dot, h.border,
            self.gmask, self.geq, out,
        )
        return out

    # -- stepping ----------------------------------------------------------

    def step_rk4(self, sigma: np.ndarray, t: float, dt: float) -> np.ndarray:
        """One RK4 step from t to t+dt; the step must stay inside a stroke."""
        if dt <= 0.0:
            raise ValueError("dt must be > 0")
        p = self.protocol
        eps = 1e-9 * p.period
        if p.stroke_index(t + eps) != p.stroke_index(t + dt - eps):
            raise StrokeBoundaryError(
                f"step [{t}, {t + dt}] crosses a stroke boundary; split it"
            )
        lam_h = p.lambda_at(t + 0.5 * dt, HOT) if p.switch_ramp == 0.0 else None
        lam_c = p.lambda_at(t + 0.5 * dt, COLD) if p.switch_ramp == 0.0 else None
        new = sigma.copy()
        self._rk4_inplace(new, t, dt, lam_h, lam_c)
        return new

    def _stage_border(self, t: float, lam_h, lam_c) -> tuple[float, float, np.ndarray]:
        p = self.protocol
        lh = p.lambda_at(t, HOT) if lam_h is None else lam_h
        lc = p.lambda_at(t, COLD) if lam_c is None else lam_c
        return lh, lc, lh * self.border_hot + lc * self.border_cold

    def _coupling_trace(self, sigma: np.ndarray, lead: str) -> float:
        """Tr[H_I^v sigma] at lambda_v = 1, i.e. 2 sum_k t_k Re sigma_{k,dot}."""
        d = self.dot
        col = sigma[:, d]
        if lead == HOT:
            return 2.0 * float(self.border_hot[:d] @ col[:d].real)
        return 2.0 * float(self.border_cold[d + 1:] @ col[d + 1:].real)

    def _node_integrands(self, sigma, k, t, lh, lc, left=False) -> np.ndarray:
        """Scalar integrands (w, qh_super, qc_super, a) at one grid node.

        ``left`` selects the left-sided protocol derivative, used for the
        sample at a stroke's closing boundary.
        """
        p = self.protocol
        d = self.dot
        n_h = self.hot.N
        ed = p.epsilon_at(t)
        deps = p.depsilon_left(t) if left else p.depsilon_at(t)
        sd = sigma[d, d].real
        kd = k[d, d].real

        ch_s = self._coupling_trace(sigma, HOT)
        cc_s = self._coupling_trace(sigma, COLD)
        ch_k = self._coupling_trace(k, HOT)
        cc_k = self._coupling_trace(k, COLD)

        if p.switch_ramp == 0.0:
            dlh = dlc = 0.0
        else:
            dlh = p.dlambda_at(t, HOT)
            dlc = p.dlambda_at(t, COLD)

        wdot = deps * sd + dlh * ch_s + dlc * cc_s
        adot = wdot + ed * kd + lh * ch_k + lc * cc_k

        diag = np.diagonal(sigma).real
        edev_h = float(self.lead_diag[:n_h] @ (diag[:n_h] - self.eq_diag[:n_h]))
        edev_c = float(self.lead_diag[d + 1:] @ (diag[d + 1:] - self.eq_diag[d + 1:]))
        qh = self.hot.gamma * (edev_h + 0.5 * lh * ch_s)
        qc = self.cold.gamma * (edev_c + 0.5 * lc * cc_s)
        return np.array([wdot, qh, qc, adot])

    def _rk4_inplace(self, sigma, t, dt, lam_h, lam_c):
        """Advance sigma in place by one RK4 step.

        Returns (hermiticity deviation before symmetrization, integrand
        sample at the step's left node).
        """
        d = self.dot
        p = self.protocol
        k1 = np.empty_like(sigma)
        k2 = np.empty_like(sigma)
        k3 = np.empty_like(sigma)
        k4 = np.empty_like(sigma)
        tmp = np.empty_like(sigma)

        def stage(state, ts, out):
            lh, lc, border = self._stage_border(ts, lam_h, lam_c)
            _arrowhead_commutator_damping(
                state, self.delta0, p.epsilon_at(ts), d, border,
                self.gmask, self.geq, out,
            )
            return lh, lc

        th = t + 0.5 * dt
        lh1, lc1 = stage(sigma, t, k1)
        f = self._node_integrands(sigma, k1, t, lh1, lc1)
        np.multiply(k1, 0.5 * dt, out=tmp)
        tmp += sigma
        stage(tmp, th, k2)
        np.multiply(k2, 0.5 * dt, out=tmp)
        tmp += sigma
        stage(tmp, th, k3)
        np.multiply(k3, dt, out=tmp)
        tmp += sigma
        stage(tmp, t + dt, k4)

        return _rk4_combine_hermitize(sigma, k1, k2, k3, k4, dt), f

    def _closing_integrands(self, sigma, t, lam_h, lam_c) -> np.ndarray:
        """Integrand sample at a stroke's closing boundary (left limits)."""
        lh, lc, border = self._stage_border(t, lam_h, lam_c)
        k = np.empty_like(sigma)
        _arrowhead_commutator_damping(
            sigma, self.delta0, self.protocol.epsilon_at(t), self.dot,
            border, self.gmask, self.geq, k,
        )
        return self._node_integrands(sigma, k, t, lh, lc, left=True)

    # -- full runs ---------------------------------------------------------

    def _checkpoint(self, sigma: np.ndarray, t: float, spectrum: bool) -> Checkpoint:
        d = self.dot
        corner = sigma[:d, d + 1:]
        if spectrum:
            w = np.linalg.eigvalsh(sigma)
            emin, emax = float(w[0]), float(w[-1])
        else:
            emin = emax = float("nan")
        cp = Checkpoint(
            t=t,
            diag=np.diagonal(sigma).real.copy(),
            dot_col=sigma[:, d].copy(),
            trace=float(np.trace(sigma).real),
            eig_min=emin,
            eig_max=emax,
            corner_max=float(np.abs(corner).max()) if corner.size else 0.0,
        )
        cp._dot = d
        return cp

    def run_cycles(
        self,
        n_cycles: int,
        dt: float,
        n_d0: float = 0.0,
        spectrum: bool = True,
        checkpoint_hook=None,
    ) -> Trajectory:
        """Propagate M full Otto cycles from the factorized initial state.

        ``checkpoint_hook(sigma, t)``, if given, is called with the full
        correlator at every stroke boundary (debug dumps).
        """
        p = self.protocol
        if n_cycles < 1:
            raise ValueError("n_cycles must be >= 1")
        stroke_durations = (p.t1, p.t2, p.t3, p.t4)
        steps = []
        for td in stroke_durations:
            ns = int(round(td / dt))
            if ns < 1 or abs(ns * dt - td) > 1e-9 * max(1.0, td):
                raise ValueError(
                    f"dt={dt} does not divide the stroke duration {td}"
                )
            steps.append(ns)
        steps_per_cycle = sum(steps)
        sharp = p.switch_ramp == 0.0

        sigma = self.initial_sigma(n_d0)
        total_steps = steps_per_cycle * n_cycles
        occupation = np.empty(total_steps + 1)
        occupation[0] = sigma[self.dot, self.dot].real
        max_dev = 0.0
        cycles = []
        step_idx = 0
        stroke_lams = ((1.0, 0.0), (0.0, 0.0), (0.0, 1.0), (0.0, 0.0))

        for m in range(n_cycles):
            cyc = CycleData(m=m)
            acc = np.zeros(4)
            t_cycle = m * p.period
            cp = self._checkpoint(sigma, t_cycle, spectrum)
            if checkpoint_hook is not None:
                checkpoint_hook(sigma, t_cycle)
            cycles.append(cyc)
            cyc.boundaries.append(cp)
            offset = 0.0
            for s_idx, (ns, td) in enumerate(zip(steps, stroke_durations)):
                lam_h, lam_c = stroke_lams[s_idx] if sharp else (None, None)
                fvals = np.empty((ns + 1, 4))
                for i in range(ns):
                    t = t_cycle + offset + i * dt
                    dev, fvals[i] = self._rk4_inplace(sigma, t, dt, lam_h, lam_c)
                    if dev > max_dev:
                        max_dev = dev
                    step_idx += 1
                    nd = sigma[self.dot, self.dot].real
                    occupation[step_idx] = nd
                    # physically nd is in [0, 1]; anything near the matrix
                    # dimension means the integration has blown up
                    if not np.isfinite(nd) or abs(nd) > self.n:
                        raise NumericalInstabilityError(step_idx, t + dt)
                offset += td
                t_b = t_cycle + offset
                fvals[ns] = self._closing_integrands(sigma, t_b, lam_h, lam_c)
                acc += _simpson(fvals, dt)
                if not np.all(np.isfinite(sigma)):
                    raise NumericalInstabilityError(step_idx, t_b)
                if sharp:
                    # switching work Tr[(H_after - H_before) sigma] at the
                    # lambda jumps; the hot switch-on at the cycle end is
                    # attributed to this cycle.
                    if s_idx == 0:
                        cyc.w_jump -= self._coupling_trace(sigma, HOT)
                    elif s_idx == 1:
                        cyc.w_jump += self._coupling_trace(sigma, COLD)
                    elif s_idx == 2:
                        cyc.w_jump -= self._coupling_trace(sigma, COLD)
                    else:
                        cyc.w_jump += self._coupling_trace(sigma, HOT)
                cp = self._checkpoint(sigma, t_b, spectrum)
                if checkpoint_hook is not None:
                    checkpoint_hook(sigma, t_b)
                cyc.boundaries.append(cp)
            cyc.w_cont, cyc.qh_super, cyc.qc_super, cyc.a_cont = acc

        times = np.arange(total_steps + 1) * dt
        return Trajectory(
            hot=self.hot,
            cold=self.cold,
            protocol=p,
            dt=dt,
            cycles=cycles,
            times=times,
            occupation=occupation,
            max_herm_dev=max_dev,
            final_sigma=sigma,
        )
