"""Shared fixtures: small, fast systems for the unit-level tests.

The acceptance suite (test_acceptance.py) runs the full desk-scale
parameter set and is the slow part; everything else uses coarse leads.
"""
import numpy as np
import pytest

from ottosim.config import LeadConfig, NumericsConfig, RunConfig
from ottosim.dynamics import DlvnSystem
from ottosim.model import LeadSpec, OttoProtocol


def tiny_system(Gamma=0.5, gamma=0.3, delta_eps=0.3, D=3.0, beta_h=0.2,
                beta_c=1.5, **proto_kwargs) -> DlvnSystem:
    """41-dimensional system, fast enough for per-test propagation."""
    n = int(round(2.0 * D / delta_eps))
    hot = LeadSpec(beta=beta_h, D=D, N=n, Gamma=Gamma, gamma=gamma)
    cold = LeadSpec(beta=beta_c, D=D, N=n, Gamma=Gamma, gamma=gamma)
    return DlvnSystem(hot, cold, OttoProtocol(**proto_kwargs))


def tiny_config(**kwargs) -> RunConfig:
    defaults = dict(
        hot=LeadConfig(beta=0.2, delta_eps=0.3, Gamma=0.5, gamma=0.3),
        cold=LeadConfig(beta=1.5, delta_eps=0.3, Gamma=0.5, gamma=0.3),
        numerics=NumericsConfig(dt=0.125, cycles=2, observable_stride=4),
    )
    defaults.update(kwargs)
    return RunConfig(**defaults).validate()


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


@pytest.fixture(scope="session")
def tiny_trajectory():
    """Two cycles of the tiny system, reused by ledger/io tests."""
    system = tiny_system()
    return system, system.run_cycles(n_cycles=2, dt=0.125)


# acceptance criterion -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, (ok, detail) in ACCEPTANCE_RESULTS.items():
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {key}: {detail}")
