"""Stable on-disk formats: per-cycle CSV, observable CSV, summary JSON,
and the binary checkpoint dump used for debugging.

CSV numbers are written with 17 significant digits so identical configs
produce byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ledger import CycleRecord, validate_records

CYCLE_COLUMNS = ("m", "W", "Qh", "Qc", "A", "F", "F0", "eta", "eta0", "dS", "Sigma")
OBSERVABLE_COLUMNS = ("t", "n_d", "epsilon", "lambda_h", "lambda_c")
REGIME_COLUMNS = ("eps1", "eps2", "W_est")

SIGMA_DUMP_MAGIC = "OTTOSIM-SIGMA v1"


def _fmt(x) -> str:
    return "%.17g" % float(x)


def write_cycles_csv(path, records: list[CycleRecord], validate: bool = True) -> None:
    if validate:
        validate_records(records)
    lines = [",".join(CYCLE_COLUMNS)]
    for r in records:
        row = [str(r.m)]
        row += [_fmt(v) for v in (r.W, r.Qh, r.Qc, r.A, r.F, r.F0)]
        # efficiency is undefined (empty field), not NaN, when Qh == 0
        row.append("" if r.eta is None else _fmt(r.eta))
        row.append("" if r.eta0 is None else _fmt(r.eta0))
        row += [_fmt(r.dS), _fmt(r.Sigma)]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_cycles_csv(path) -> list[CycleRecord]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].split(",") != list(CYCLE_COLUMNS):
        raise ValueError(f"{path}: unexpected cycle CSV header")
    out = []
    for line in lines[1:]:
        f = line.split(",")
        out.append(CycleRecord(
            m=int(f[0]), W=float(f[1]), Qh=float(f[2]), Qc=float(f[3]),
            A=float(f[4]), F=float(f[5]), F0=float(f[6]),
            eta=float(f[7]) if f[7] else None,
            eta0=float(f[8]) if f[8] else None,
            dS=float(f[9]), Sigma=float(f[10]),
        ))
    return out


def write_observables_csv(path, traj, stride: int = 1) -> None:
    p = traj.protocol
    lines = [",".join(OBSERVABLE_COLUMNS)]
    idx = np.arange(0, traj.times.size, stride)
    for i in idx:
        t = traj.times[i]
        lines.append(",".join((
            _fmt(t), _fmt(traj.occupation[i]), _fmt(p.epsilon_at(t)),
            _fmt(p.lambda_at(t, "hot")), _fmt(p.lambda_at(t, "cold")),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def write_regime_csv(path, grid) -> None:
    lines = [",".join(REGIME_COLUMNS)]
    for i, e1 in enumerate(grid.eps1_axis):
        for j, e2 in enumerate(grid.eps2_axis):
            lines.append(",".join((_fmt(e1), _fmt(e2), _fmt(grid.W_est[i, j]))))
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def dump_sigma(path, sigma: np.ndarray, t: float) -> None:
    """Binary dump: one ASCII header line, then row-major little-endian
    complex128 (interleaved float64 re/im pairs)."""
    n = sigma.shape[0]
    header = f"{SIGMA_DUMP_MAGIC} n={n} t={_fmt(t)} layout=row-major dtype=complex128-le\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(sigma, dtype="<c16").tobytes())


def load_sigma(path) -> tuple[np.ndarray, float]:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        if not header.startswith(SIGMA_DUMP_MAGIC):
            raise ValueError(f"{path}: not a correlator dump")
        fields = dict(kv.split("=", 1) for kv in header.split()[2:])
        n = int(fields["n"])
        t = float(fields["t"])
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != n * n:
        raise ValueError(f"{path}: truncated dump")
    return data.reshape(n, n).copy(), t
