"""Orchestration: single runs, parameter sweeps, convergence studies."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io, ledger
from .config import RunConfig, with_overrides
from .dynamics import DlvnSystem, Trajectory
from .regime import engine_region_map


def simulate(cfg: RunConfig, dump_dir=None) -> tuple[Trajectory, list]:
    """Propagate the configured run and build its cycle records."""
    system = DlvnSystem(cfg.hot.to_spec(), cfg.cold.to_spec(), cfg.protocol)
    hook = None
    if dump_dir is not None:
        dump_dir = Path(dump_dir)
        dump_dir.mkdir(parents=True, exist_ok=True)

        def hook(sigma, t):
            io.dump_sigma(dump_dir / f"sigma_t{t:012.4f}.bin", sigma, t)

    traj = system.run_cycles(
        n_cycles=cfg.numerics.cycles,
        dt=cfg.numerics.dt,
        n_d0=cfg.initial_occupation,
        spectrum=cfg.numerics.spectrum_checks,
        checkpoint_hook=hook,
    )
    return traj, ledger.build_records(traj)


def summarize(traj: Trajectory, records) -> dict:
    transient = ledger.transient_cycle_count(records)
    post = [r for r in records if r.m >= transient] or records[-1:]
    etas = [r.eta for r in post if r.eta is not None]
    cps = [cp for c in traj.cycles for cp in c.boundaries]
    return {
        "cycles": len(records),
        "transient_cycles": transient,
        "limit_cycle_eta": float(np.mean(etas)) if etas else None,
        "limit_cycle_work": float(np.mean([r.W for r in post])),
        "max_first_law_residual": max(abs(r.F) for r in records),
        "max_a_form_gap": max(r.a_gap for r in records),
        "max_hermiticity_deviation": traj.max_herm_dev,
        "eig_min": min(cp.eig_min for cp in cps),
        "eig_max": max(cp.eig_max for cp in cps),
        "max_hot_cold_corner": max(cp.corner_max for cp in cps),
    }


def run_to_directory(cfg: RunConfig, outdir) -> dict:
    """Execute one run and persist cycles.csv / observables.csv / summary.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    dump = outdir / "checkpoints" if cfg.numerics.dump_checkpoints else None
    traj, records = simulate(cfg, dump_dir=dump)
    io.write_cycles_csv(outdir / "cycles.csv", records)
    io.write_observables_csv(outdir / "observables.csv", traj,
                             stride=cfg.numerics.observable_stride)
    summary = summarize(traj, records)
    io.write_summary(outdir / "summary.json", summary)
    return summary


def sweep_combinations(sweep: dict) -> list[dict]:
    axes = sorted(sweep)
    combos = []
    for values in itertools.product(*(sweep[a] for a in axes)):
        combos.append(dict(zip(axes, values)))
    return combos


def sweep_dirname(combo: dict) -> str:
    return "_".join(f"{k}={v:g}" for k, v in sorted(combo.items()))


def _sweep_worker(args):
    cfg, combo, outdir = args
    try:
        summary = run_to_directory(with_overrides(cfg, **combo), outdir)
        return combo, summary, None
    except Exception as exc:  # reported in the index; sweep continues
        return combo, None, f"{type(exc).__name__}: {exc}"


def run_sweep(cfg: RunConfig, outdir, workers: int = 1) -> tuple[list, int]:
    """One run per axis combination; returns (results, n_failed)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    combos = sweep_combinations(cfg.sweep)
    tasks = [(cfg, combo, outdir / sweep_dirname(combo)) for combo in combos]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(t) for t in tasks]

    axes = sorted(cfg.sweep)
    header = axes + ["directory", "status", "transient_cycles",
                     "limit_cycle_eta", "limit_cycle_work", "max_first_law_residual"]
    lines = [",".join(header)]
    failed = 0
    for combo, summary, err in results:
        row = ["%.17g" % combo[a] for a in axes]
        row.append(sweep_dirname(combo))
        if err is None:
            eta = summary["limit_cycle_eta"]
            row += ["ok", str(summary["transient_cycles"]),
                    "" if eta is None else "%.17g" % eta,
                    "%.17g" % summary["limit_cycle_work"],
                    "%.17g" % summary["max_first_law_residual"]]
        else:
            failed += 1
            row += ["failed", "", "", "", ""]
        lines.append(",".join(row))
    (outdir / "index.csv").write_text("\n".join(lines) + "\n")
    return results, failed


def run_regime(cfg: RunConfig, outdir) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    r = cfg.regime
    eps1 = np.linspace(r.eps1_min, r.eps1_max, r.points)
    eps2 = np.linspace(r.eps2_min, r.eps2_max, r.points)
    grid = engine_region_map(eps1, eps2, cfg.hot.to_spec(), cfg.cold.to_spec())
    io.write_regime_csv(outdir / "regime.csv", grid)


# -- convergence study ---------------------------------------------------

CONVERGE_OCC_THRESHOLD = 0.02
CONVERGE_LEDGER_THRESHOLD = 0.05


def _reference_value(axis: str, values, baseline):
    if axis == "D":
        return max(values)
    if axis in ("delta_eps", "dt"):
        return min(values)
    # gamma: compare against the value closest to the baseline choice
    return min(values, key=lambda v: abs(v - baseline))


def run_converge(cfg: RunConfig, outdir) -> dict:
    """Per-axis deviation of occupation trajectory and final-cycle ledger
    entries from the finest setting of that axis."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    report = {"axes": {}, "passed": True}
    baseline_gamma = cfg.hot.to_spec().gamma
    for axis, values in sorted(cfg.sweep.items()):
        ref_value = _reference_value(axis, values, baseline_gamma)
        runs = {}
        for v in values:
            traj, records = simulate(with_overrides(cfg, **{axis: v}))
            runs[v] = (traj, records[-1])
        ref_traj, ref_rec = runs[ref_value]
        axis_report = {"reference": ref_value, "values": {}}
        for v, (traj, rec) in runs.items():
            occ = np.interp(ref_traj.times, traj.times, traj.occupation)
            occ_dev = float(np.max(np.abs(occ - ref_traj.occupation)))
            scale = max(abs(ref_rec.W), abs(ref_rec.Qh), abs(ref_rec.Qc), 1e-12)
            led_dev = max(
                abs(rec.W - ref_rec.W), abs(rec.Qh - ref_rec.Qh),
                abs(rec.Qc - ref_rec.Qc), abs(rec.A - ref_rec.A),
            ) / scale
            ok = occ_dev < CONVERGE_OCC_THRESHOLD and led_dev < CONVERGE_LEDGER_THRESHOLD
            if v != ref_value and not ok:
                report["passed"] = False
            axis_report["values"]["%g" % v] = {
                "occupation_deviation": occ_dev,
                "ledger_deviation": led_dev,
                "pass": bool(ok or v == ref_value),
            }
        report["axes"][axis] = axis_report
    io.write_summary(outdir / "convergence.json", report)
    return report
