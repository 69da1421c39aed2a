"""Propagator properties: structured kernel correctness, RK4 order,
conservation laws, state validity, quadrature helper.
"""
import time

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_hermitian, tiny_system
from ottosim.dynamics import (
    DlvnSystem,
    NumericalInstabilityError,
    StrokeBoundaryError,
    _simpson,
)
from ottosim.model import LeadSpec, OttoProtocol


def random_small_system(rng) -> DlvnSystem:
    """Random valid discretization with total dimension <= 25."""
    nh, nc = rng.integers(2, 13, size=2)
    d_h, d_c = rng.uniform(1.0, 4.0, size=2)
    specs = []
    for d, n in ((d_h, nh), (d_c, nc)):
        de = 2.0 * d / n
        gamma_max = 2.0 * d
        g = rng.uniform(1.05 * de, 0.95 * gamma_max)
        specs.append(LeadSpec(beta=rng.uniform(0.1, 3.0), mu=rng.uniform(-1, 1),
                              D=d, N=int(n), Gamma=g, gamma=rng.uniform(0.0, 0.5)))
    return DlvnSystem(specs[0], specs[1], OttoProtocol())


class TestStructuredRhs:
    def test_matches_dense_on_random_instances(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(50):
            system = random_small_system(rng)
            sigma = random_hermitian(system.n, rng)
            t = rng.uniform(0.0, system.protocol.period)
            dense = system.rhs(sigma, t)
            structured = system.rhs_structured(sigma, t)
            worst = max(worst, np.max(np.abs(dense - structured)))
        assert worst < 1e-12

    def test_shape_guard(self):
        system = tiny_system()
        with pytest.raises(ValueError):
            system.rhs_structured(np.eye(3, dtype=complex), 0.0)

    def test_structured_is_faster_at_production_size(self):
        hot = LeadSpec(beta=0.2, D=3.0, N=200, Gamma=0.5, gamma=0.03)
        cold = LeadSpec(beta=1.5, D=3.0, N=200, Gamma=0.5, gamma=0.03)
        system = DlvnSystem(hot, cold, OttoProtocol())
        rng = np.random.default_rng(0)
        sigma = random_hermitian(system.n, rng)
        system.rhs_structured(sigma, 1.0)  # jit warm-up

        def best_of(fn, repeats=3):
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                fn(sigma, 1.0)
                times.append(time.perf_counter() - t0)
            return min(times)

        assert best_of(system.rhs_structured) < best_of(system.rhs) / 3.0


class TestRk4:
    def test_order_against_matrix_exponential(self):
        # constant H inside stroke 1, so the exact flow is affine-linear
        system = tiny_system(Gamma=4.0, delta_eps=3.0, gamma=0.4)
        n = system.n
        h = system.hamiltonian(1.0).dense()
        eye = np.eye(n)
        lop = (-1j * (np.kron(h, eye) - np.kron(eye, h.T))
               - np.diag(system.gmask.ravel()))
        c = np.diag(system.geq).ravel()
        sigma0 = system.initial_sigma(0.3)
        star = np.linalg.solve(lop, -c)
        exact = (expm(2.0 * lop) @ (sigma0.ravel() - star) + star).reshape(n, n)

        errs = []
        for dt in (0.25, 0.125):
            sigma = sigma0.copy()
            t = 0.0
            for _ in range(int(round(2.0 / dt))):
                sigma = system.step_rk4(sigma, t, dt)
                t += dt
            errs.append(np.max(np.abs(sigma - exact)))
        ratio = errs[0] / errs[1]
        assert 8.0 < ratio < 32.0

    def test_step_rejects_boundary_crossing(self):
        system = tiny_system()
        sigma = system.initial_sigma()
        with pytest.raises(StrokeBoundaryError):
            system.step_rk4(sigma, 19.0, 2.0)
        with pytest.raises(ValueError):
            system.step_rk4(sigma, 0.0, -0.1)

    def test_instability_is_reported(self):
        system = tiny_system()
        with pytest.raises(NumericalInstabilityError):
            system.run_cycles(n_cycles=4, dt=10.0)

    def test_dt_must_divide_strokes(self):
        system = tiny_system()
        with pytest.raises(ValueError):
            system.run_cycles(n_cycles=1, dt=0.3)


class TestConservation:
    def test_trace_conserved_without_superbath(self):
        system = tiny_system(gamma=0.0, delta_eps=0.3)
        traj = system.run_cycles(n_cycles=1, dt=0.1, spectrum=False)
        cps = traj.cycles[0].boundaries
        drift = max(abs(cp.trace - cps[0].trace) for cp in cps)
        assert drift < 1e-10

    def test_commutator_conserves_energy(self):
        system = tiny_system(gamma=0.0)
        rng = np.random.default_rng(3)
        sigma = random_hermitian(system.n, rng)
        for t in (1.0, 25.0, 35.0, 55.0):
            h = system.hamiltonian(t).dense()
            k = system.rhs_structured(sigma, t)
            assert abs(np.trace(h @ k)) < 1e-12

    def test_hermiticity_deviation(self, tiny_trajectory):
        _, traj = tiny_trajectory
        assert traj.max_herm_dev < 1e-12
        final = traj.final_sigma
        np.testing.assert_allclose(final, final.conj().T, atol=0)

    def test_eigenvalues_stay_physical(self, tiny_trajectory):
        _, traj = tiny_trajectory
        cps = [cp for c in traj.cycles for cp in c.boundaries]
        assert min(cp.eig_min for cp in cps) > -1e-6
        assert max(cp.eig_max for cp in cps) < 1.0 + 1e-6


class TestSimpson:
    def test_exact_on_cubics(self):
        dt = 0.1
        for n in (2, 4, 3, 5, 7):
            x = np.arange(n + 1) * dt
            f = x**3 - 2.0 * x**2 + 0.5
            exact = (x[-1] ** 4 / 4 - 2.0 * x[-1] ** 3 / 3 + 0.5 * x[-1])
            assert _simpson(f, dt) == pytest.approx(exact, abs=1e-14)

    def test_single_interval_trapezoid(self):
        assert _simpson(np.array([1.0, 3.0]), 0.5) == pytest.approx(1.0)

    def test_fourth_order_scaling(self):
        errs = []
        for n in (8, 16):
            x = np.linspace(0.0, 1.0, n + 1)
            errs.append(abs(_simpson(np.exp(x), 1.0 / n) - (np.e - 1.0)))
        assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.2)

    def test_vector_samples(self):
        f = np.ones((5, 4))
        np.testing.assert_allclose(_simpson(f, 0.25), 1.0)


class TestTrajectory:
    def test_occupation_grid(self, tiny_trajectory):
        system, traj = tiny_trajectory
        assert traj.times.size == traj.occupation.size
        assert traj.times[-1] == pytest.approx(2 * system.protocol.period)
        assert np.all((traj.occupation > -1e-9) & (traj.occupation < 1 + 1e-9))

    def test_initial_checkpoint(self, tiny_trajectory):
        system, traj = tiny_trajectory
        cp0 = traj.cycles[0].start
        assert cp0.t == 0.0
        assert cp0.corner_max == 0.0
        assert cp0.dot_occupation == 0.0
        assert cp0.trace == pytest.approx(system.eq_diag.sum())

    def test_checkpoint_hook_sees_all_boundaries(self):
        system = tiny_system()
        seen = []
        system.run_cycles(n_cycles=1, dt=0.5, spectrum=False,
                          checkpoint_hook=lambda s, t: seen.append(t))
        assert seen == [0.0, 20.0, 30.0, 50.0, 60.0]
