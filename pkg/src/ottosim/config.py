"""Run configuration: YAML parsing, validation, defaults.

All quantities are dimensionless (hbar = k_B = 1).  The shipped defaults
are the engine operating point used throughout the study: beta_h = 0.2,
beta_c = 1.5, mu = 0, epsilon1 = 2, epsilon2 = 1, T = 60 with
t1 = t3 = T/3, t2 = t4 = T/6.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import yaml

from .model import LeadSpec, ModelError, OttoProtocol

SWEEP_AXES = ("Gamma", "gamma", "delta_eps", "D", "dt")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LeadConfig:
    beta: float
    mu: float = 0.0
    D: float = 3.0
    delta_eps: float = 0.03
    Gamma: float = 0.5
    gamma: float | None = None  # None -> delta_eps

    def to_spec(self) -> LeadSpec:
        n_f = 2.0 * self.D / self.delta_eps
        n = int(round(n_f))
        if n < 1 or abs(n_f - n) > 1e-9 * n_f:
            raise ConfigError(
                f"delta_eps={self.delta_eps} must divide the bandwidth 2D={2 * self.D}"
            )
        gamma = self.delta_eps if self.gamma is None else self.gamma
        try:
            spec = LeadSpec(
                beta=self.beta, mu=self.mu, D=self.D, N=n,
                Gamma=self.Gamma, gamma=gamma,
            )
            spec.validate_discretization()
        except ModelError as exc:
            raise ConfigError(str(exc)) from exc
        return spec


@dataclass(frozen=True)
class NumericsConfig:
    dt: float = 0.1
    cycles: int = 10
    observable_stride: int = 10
    spectrum_checks: bool = True
    dump_checkpoints: bool = False

    def validate(self, protocol: OttoProtocol) -> None:
        if self.dt <= 0.0:
            raise ConfigError("dt must be > 0")
        if self.cycles < 1:
            raise ConfigError("cycles must be >= 1")
        if self.observable_stride < 1:
            raise ConfigError("observable_stride must be >= 1")
        for name, td in (("t1", protocol.t1), ("t2", protocol.t2),
                         ("t3", protocol.t3), ("t4", protocol.t4)):
            ns = round(td / self.dt)
            if ns < 1 or abs(ns * self.dt - td) > 1e-9 * max(1.0, td):
                raise ConfigError(f"dt={self.dt} does not divide stroke {name}={td}")


@dataclass(frozen=True)
class RegimeConfig:
    eps1_min: float = 0.0
    eps1_max: float = 4.0
    eps2_min: float = 0.0
    eps2_max: float = 4.0
    points: int = 41

    def validate(self) -> None:
        if self.points < 2:
            raise ConfigError("regime grid needs at least 2 points per axis")
        if not (self.eps1_max > self.eps1_min and self.eps2_max > self.eps2_min):
            raise ConfigError("regime axis bounds must be increasing")


@dataclass(frozen=True)
class RunConfig:
    protocol: OttoProtocol = field(default_factory=OttoProtocol)
    hot: LeadConfig = field(default_factory=lambda: LeadConfig(beta=0.2))
    cold: LeadConfig = field(default_factory=lambda: LeadConfig(beta=1.5))
    initial_occupation: float = 0.0
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    regime: RegimeConfig = field(default_factory=RegimeConfig)
    sweep: dict = field(default_factory=dict)  # axis name -> list of values

    def validate(self) -> "RunConfig":
        if not 0.0 <= self.initial_occupation <= 1.0:
            raise ConfigError("initial_occupation must lie in [0, 1]")
        self.numerics.validate(self.protocol)
        self.regime.validate()
        for axis, values in self.sweep.items():
            if axis not in SWEEP_AXES:
                raise ConfigError(f"unknown sweep axis {axis!r} (allowed: {SWEEP_AXES})")
            if not isinstance(values, (list, tuple)) or not values:
                raise ConfigError(f"sweep axis {axis!r} must be a non-empty list")
        self.hot.to_spec()
        self.cold.to_spec()
        return self


def _dataclass_from_dict(cls, data, where, default):
    """Build cls from a config section, filling gaps from the default."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a mapping")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**{**dataclasses.asdict(default), **data})
    except (TypeError, ModelError, ValueError) as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    known = {"protocol", "hot", "cold", "initial_occupation", "numerics",
             "regime", "sweep"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    base = RunConfig()
    cfg = RunConfig(
        protocol=_dataclass_from_dict(
            OttoProtocol, data.get("protocol"), "protocol", base.protocol),
        hot=_dataclass_from_dict(LeadConfig, data.get("hot"), "hot", base.hot),
        cold=_dataclass_from_dict(LeadConfig, data.get("cold"), "cold", base.cold),
        initial_occupation=float(data.get("initial_occupation", 0.0)),
        numerics=_dataclass_from_dict(
            NumericsConfig, data.get("numerics"), "numerics", base.numerics),
        regime=_dataclass_from_dict(
            RegimeConfig, data.get("regime"), "regime", base.regime),
        sweep=data.get("sweep") or {},
    )
    return cfg.validate()


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "protocol": dataclasses.asdict(cfg.protocol),
        "hot": dataclasses.asdict(cfg.hot),
        "cold": dataclasses.asdict(cfg.cold),
        "initial_occupation": cfg.initial_occupation,
        "numerics": dataclasses.asdict(cfg.numerics),
        "regime": dataclasses.asdict(cfg.regime),
        "sweep": dict(cfg.sweep),
    }


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path}: {exc}") from exc
    return config_from_dict(data or {})


def save_config(cfg: RunConfig, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(config_to_dict(cfg), fh, sort_keys=False)


def with_overrides(cfg: RunConfig, **axis_values) -> RunConfig:
    """New config with sweep-axis values applied to both leads / numerics."""
    hot, cold, num = cfg.hot, cfg.cold, cfg.numerics
    for axis, v in axis_values.items():
        if axis in ("Gamma", "gamma", "delta_eps", "D"):
            hot = dataclasses.replace(hot, **{axis: v})
            cold = dataclasses.replace(cold, **{axis: v})
        elif axis == "dt":
            num = dataclasses.replace(num, dt=v)
        else:
            raise ConfigError(f"unknown override axis {axis!r}")
    out = dataclasses.replace(cfg, hot=hot, cold=cold, numerics=num, sweep={})
    return out.validate()
