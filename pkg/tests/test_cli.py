"""CLI behavior: subcommands, outputs, exit codes, determinism."""
import json

import pytest

from conftest import tiny_config
from ottosim import cli
from ottosim.config import NumericsConfig, RegimeConfig, save_config


@pytest.fixture
def cfg_path(tmp_path):
    def write(name="run.yaml", **kwargs):
        path = tmp_path / name
        save_config(tiny_config(**kwargs), path)
        return str(path)
    return write


class TestRun:
    def test_outputs_and_exit_code(self, tmp_path, cfg_path):
        out = tmp_path / "out"
        rc = cli.main(["run", "-c", cfg_path(), "-o", str(out), "-v"])
        assert rc == cli.EXIT_OK
        assert (out / "cycles.csv").exists()
        assert (out / "observables.csv").exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["cycles"] == 2
        assert "transient_cycles" in summary
        assert summary["max_first_law_residual"] < 1e-6

    def test_byte_determinism_across_processes(self, tmp_path, cfg_path):
        config = cfg_path()
        outs = []
        for name in ("o1", "o2"):
            out = tmp_path / name
            assert cli.main(["run", "-c", config, "-o", str(out)]) == cli.EXIT_OK
            outs.append(out)
        for fname in ("cycles.csv", "observables.csv"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()

    def test_checkpoint_dump(self, tmp_path, cfg_path):
        config = cfg_path(numerics=NumericsConfig(
            dt=0.125, cycles=1, dump_checkpoints=True))
        out = tmp_path / "out"
        assert cli.main(["run", "-c", config, "-o", str(out)]) == cli.EXIT_OK
        dumps = sorted((out / "checkpoints").iterdir())
        assert len(dumps) == 5  # cycle start + four stroke ends

    def test_bad_config_exits_2(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("hot:\n  bandwith: 3\n")
        assert cli.main(["run", "-c", str(path), "-o", str(tmp_path / "o")]) \
            == cli.EXIT_CONFIG

    def test_instability_exits_3(self, tmp_path, cfg_path):
        config = cfg_path(numerics=NumericsConfig(dt=10.0, cycles=5))
        rc = cli.main(["run", "-c", config, "-o", str(tmp_path / "o")])
        assert rc == cli.EXIT_NUMERICS


class TestSweep:
    def test_sweep_writes_index(self, tmp_path, cfg_path):
        config = cfg_path(sweep={"dt": [0.25, 0.125]})
        out = tmp_path / "sweep"
        assert cli.main(["sweep", "-c", config, "-o", str(out)]) == cli.EXIT_OK
        index = (out / "index.csv").read_text().splitlines()
        assert index[0].startswith("dt,")
        assert len(index) == 3
        assert (out / "dt=0.25" / "cycles.csv").exists()
        assert (out / "dt=0.125" / "cycles.csv").exists()

    def test_partial_failure_exits_4(self, tmp_path, cfg_path):
        # delta_eps=0.9 exceeds Gamma=0.5 and must fail its combination
        config = cfg_path(sweep={"delta_eps": [0.3, 0.9]})
        out = tmp_path / "sweep"
        assert cli.main(["sweep", "-c", config, "-o", str(out)]) == cli.EXIT_PARTIAL
        index = (out / "index.csv").read_text()
        assert ",ok," in index and ",failed," in index

    def test_sweep_without_axes_exits_2(self, tmp_path, cfg_path):
        rc = cli.main(["sweep", "-c", cfg_path(), "-o", str(tmp_path / "s")])
        assert rc == cli.EXIT_CONFIG


class TestRegime:
    def test_regime_csv(self, tmp_path, cfg_path):
        config = cfg_path(regime=RegimeConfig(points=3))
        out = tmp_path / "regime"
        assert cli.main(["regime", "-c", config, "-o", str(out)]) == cli.EXIT_OK
        lines = (out / "regime.csv").read_text().splitlines()
        assert lines[0] == "eps1,eps2,W_est"
        assert len(lines) == 1 + 9


class TestConverge:
    def test_converge_report(self, tmp_path, cfg_path):
        config = cfg_path(sweep={"dt": [0.25, 0.125]})
        out = tmp_path / "conv"
        assert cli.main(["converge", "-c", config, "-o", str(out)]) == cli.EXIT_OK
        report = json.loads((out / "convergence.json").read_text())
        assert report["passed"] is True
        assert "dt" in report["axes"]
        assert report["axes"]["dt"]["reference"] == 0.125

    def test_converge_needs_numerics_axes(self, tmp_path, cfg_path):
        config = cfg_path(sweep={"Gamma": [0.5, 0.4]})
        rc = cli.main(["converge", "-c", config, "-o", str(tmp_path / "c")])
        assert rc == cli.EXIT_CONFIG
