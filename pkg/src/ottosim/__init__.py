"""Driven resonant-level quantum Otto engine simulator.

Propagates the one-particle correlator of a dot coupled alternately to two
discretized wideband leads and produces a cycle-resolved thermodynamic
ledger (work, heats, the cycle-boundary coupling term, efficiencies,
entropy production) from warm-up through the limit cycle.
"""
from .model import (
    ArrowheadHamiltonian,
    LeadSpec,
    ModelError,
    OttoProtocol,
    build_hamiltonian,
)
from .dynamics import DlvnSystem, NumericalInstabilityError, Trajectory
from .ledger import (
    CycleRecord,
    a_term,
    build_records,
    efficiency,
    entropy_production,
    first_law_residual,
    heat_of_cycle,
    transient_cycle_count,
    work_of_cycle,
)
from .regime import engine_region_map, equilibrium_occupation, limit_cycle_work_estimate
from .config import ConfigError, RunConfig, load_config, save_config

__version__ = "0.1.0"

__all__ = [
    "ArrowheadHamiltonian",
    "ConfigError",
    "CycleRecord",
    "DlvnSystem",
    "LeadSpec",
    "ModelError",
    "NumericalInstabilityError",
    "OttoProtocol",
    "RunConfig",
    "Trajectory",
    "a_term",
    "build_hamiltonian",
    "build_records",
    "efficiency",
    "engine_region_map",
    "entropy_production",
    "equilibrium_occupation",
    "first_law_residual",
    "heat_of_cycle",
    "limit_cycle_work_estimate",
    "load_config",
    "save_config",
    "transient_cycle_count",
    "work_of_cycle",
]
