import json
import os
import sys
import tempfile
import pytest

import pandas as pd

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import main
from src.errors import ConfigError
from src.expcli import (
    COLUMNS,
    LAMBDA_GRID,
    SweepSpec,
    build_sweep_spec,
    emit_plot_script,
    load_sweep_spec,
    run_sweep,
    write_outputs,
)
from src.models import SchedulerKind, SimConfig


def tiny_spec(output_path, workers=1, trace=False):
    return SweepSpec(
        base=SimConfig(n_users=3, horizon_frames=300, belief_capacity=3, trace_packets=trace),
        lambda_grid=(0.1, 0.3),
        schedulers=("PIMA", "SGFEO"),
        seeds=(1, 2),
        output_path=output_path,
        workers=workers,
    )


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


class TestRunSweep:

    def test_table_layout(self):
        with tempfile.TemporaryDirectory() as tmp:
            result = run_sweep(tiny_spec(os.path.join(tmp, "sweep.csv")))
            assert list(result.table.columns) == COLUMNS
            assert len(result.table) == 4
            assert list(result.table["scheduler"]) == ["PIMA", "PIMA", "SGFEO", "SGFEO"]
            assert (result.table["seed_count"] == 2).all()
            assert len(result.runs) == 8

    def test_rerun_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = os.path.join(tmp, "a.csv")
            second = os.path.join(tmp, "b.csv")
            write_outputs(run_sweep(tiny_spec(first)))
            write_outputs(run_sweep(tiny_spec(second)))
            assert read_bytes(first) == read_bytes(second)

    def test_worker_count_does_not_change_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            serial = os.path.join(tmp, "serial.csv")
            parallel = os.path.join(tmp, "parallel.csv")
            write_outputs(run_sweep(tiny_spec(serial)))
            write_outputs(run_sweep(tiny_spec(parallel, workers=2)))
            assert read_bytes(serial) == read_bytes(parallel)

    def test_sidecars(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sweep.csv")
            paths = write_outputs(run_sweep(tiny_spec(path, trace=True)))
            with open(paths["runs"], "r", encoding="utf-8") as f:
                runs = json.load(f)
            assert len(runs["runs"]) == 8
            assert runs["spec"]["schedulers"] == ["PIMA", "SGFEO"]
            trace = pd.read_csv(paths["trace"])
            assert (trace["latency_ms"] > 0).all()

    def test_gated_cell_refused_before_running(self):
        spec = SweepSpec(
            base=SimConfig(n_users=8),
            lambda_grid=(0.1,),
            schedulers=("GFEO",),
            seeds=(1,),
        )
        with pytest.raises(ConfigError) as exc:
            run_sweep(spec)
        assert exc.value.field_name == "scheduler"


class TestConfigLoader:

    def test_fig2_preset_cells(self):
        spec = build_sweep_spec({}, preset="fig2")
        assert len(spec.cells()) == 40
        assert spec.lambda_grid == LAMBDA_GRID
        assert spec.base.n_users == 5
        assert SchedulerKind.SALOHA not in spec.schedulers

    def test_fig4_preset(self):
        spec = build_sweep_spec({}, preset="fig4")
        assert spec.base.n_users == 30
        assert spec.base.pia_len == pytest.approx(0.25)
        assert SchedulerKind.GFEO not in spec.schedulers

    def test_overrides_layer_on_preset(self):
        spec = build_sweep_spec(
            {"horizon_frames": 1000, "seed_count": 3, "schedulers": "PIMA,TDMA"}, preset="fig3"
        )
        assert spec.base.horizon_frames == 1000
        assert len(spec.seeds) == 3
        assert spec.schedulers == (SchedulerKind.PIMA, SchedulerKind.TDMA)

    def test_unknown_field(self):
        with pytest.raises(ConfigError) as exc:
            build_sweep_spec({"n_user": 5, "schedulers": ["PIMA"]})
        assert exc.value.field_name == "n_user"

    def test_wrong_type_names_field(self):
        with pytest.raises(ConfigError) as exc:
            build_sweep_spec({"n_users": "five", "schedulers": ["PIMA"]})
        assert exc.value.field_name == "n_users"

    def test_bad_lambda(self):
        with pytest.raises(ConfigError) as exc:
            build_sweep_spec({"lambda_grid": [0.1, -0.2], "schedulers": ["PIMA"]})
        assert exc.value.field_name == "lambda_grid"

    def test_missing_schedulers(self):
        with pytest.raises(ConfigError) as exc:
            build_sweep_spec({"lambda_grid": [0.1]})
        assert exc.value.field_name == "schedulers"

    def test_json_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "exp.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"preset": "fig2", "lambda_grid": [0.2, 0.4], "seeds": [7, 8]}, f)
            spec = load_sweep_spec(path, overrides={"horizon_frames": 500, "workers": None})
            assert spec.lambda_grid == (0.2, 0.4)
            assert spec.seeds == (7, 8)
            assert spec.base.horizon_frames == 500
            assert spec.figure == "fig2"

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.json")
            with open(path, "w", encoding="utf-8") as f:
                f.write("{not json")
            with pytest.raises(ConfigError) as exc:
                load_sweep_spec(path)
            assert exc.value.field_name == "config"


class TestPlotScript:

    def make_table(self):
        return pd.DataFrame(
            [
                {"scheduler": "PIMA", "lambda_total": 0.1, "latency_ms_mean": 0.15,
                 "latency_ms_ci95": 0.001},
                {"scheduler": "TDMA", "lambda_total": 0.1, "latency_ms_mean": 0.32,
                 "latency_ms_ci95": 0.002},
            ]
        )

    def test_script_written_next_to_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, "fig3.csv")
            script = emit_plot_script(self.make_table(), "fig3", csv_path)
            assert script == os.path.join(tmp, "fig3_plot.py")
            with open(script, "r", encoding="utf-8") as f:
                text = f.read()
            assert "Avg. Packet Latency [ms]" in text
            assert "'PIMA', 'TDMA'" in text

    def test_empty_table_writes_nothing(self):
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, "fig3.csv")
            with pytest.raises(ConfigError):
                emit_plot_script(self.make_table().iloc[0:0], "fig3", csv_path)
            assert not os.path.exists(os.path.join(tmp, "fig3_plot.py"))

    def test_unknown_figure(self):
        with pytest.raises(ConfigError):
            emit_plot_script(self.make_table(), "fig9", "out.csv")

    def test_missing_metric_column(self):
        with pytest.raises(ConfigError):
            emit_plot_script(self.make_table(), "fig2", "out.csv")


class TestCommandLine:

    def test_config_error_exit_code(self, monkeypatch):
        monkeypatch.setattr(main, "setup_logging", lambda: None)
        assert main.main(["simulate", "--lambda", "0.1", "--frames", "10"]) == main.EXIT_CONFIG

    def test_simulate_writes_table(self, monkeypatch):
        monkeypatch.setattr(main, "setup_logging", lambda: None)
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "run.csv")
            code = main.main([
                "simulate", "--scheduler", "PIMA", "--lambda", "0.1,0.2",
                "--frames", "200", "--seeds", "2", "--out", out,
            ])
            assert code == main.EXIT_OK
            table = pd.read_csv(out)
            assert len(table) == 2
