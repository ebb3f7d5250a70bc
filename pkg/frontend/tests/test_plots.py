"""Smoke suite: all four plot kinds render from a real solver run.

The fixture invokes the solver CLI as a subprocess, so these tests exercise
exactly the file formats the solver publishes (schema round-trip).
"""

import json
import subprocess
import sys

import pytest

from kvnplots import PlotJob, SchemaError, render
from kvnplots.cli import main as plot_main
from kvnplots.readers import load_density_csv, load_expansion_json, load_report_json


def solver(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "kvnspectral.cli", *args],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def fixture_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("solver_run")
    solver(
        "evolve", "--example", "box", "--nmax", "16", "--grid", "64",
        "--times", "0,0.75", "--out", str(root / "n16"),
    )
    solver(
        "evolve", "--example", "box", "--nmax", "32", "--grid", "64",
        "--times", "0,0.75", "--out", str(root / "n32"),
    )
    solver(
        "expand", "--example", "shifted-canonical", "--nmax", "12",
        "--out", str(root / "exp"),
    )
    return root


class TestSchemaRoundTrip:
    def test_every_emitted_file_parses_cleanly(self, fixture_run, recwarn):
        for csv_file in sorted(fixture_run.glob("*/density_t*.csv")):
            load_density_csv(csv_file)
        load_expansion_json(fixture_run / "exp" / "expansion.json")
        load_report_json(fixture_run / "n16" / "report.json")
        assert len(recwarn) == 0


class TestRenderKinds:
    def test_heatmap_with_overlays(self, fixture_run, tmp_path):
        out = tmp_path / "heat.png"
        summary = render(PlotJob(
            "heatmap", (str(fixture_run / "n16" / "density_t0.75.csv"),), str(out)
        ))
        assert out.exists() and out.stat().st_size > 0
        assert summary.overlay_circles > 0 and summary.overlay_rays > 0

    def test_tau_marginal_waterfall(self, fixture_run, tmp_path):
        out = tmp_path / "marginal.png"
        inputs = tuple(str(p) for p in sorted(fixture_run.glob("n16/density_t*.csv")))
        summary = render(PlotJob("tau_marginal", inputs, str(out)))
        assert out.exists() and out.stat().st_size > 0
        assert summary.series == len(inputs) == 2

    def test_spectrum_has_full_mode_window(self, fixture_run, tmp_path):
        out = tmp_path / "spectrum.png"
        summary = render(PlotJob(
            "spectrum", (str(fixture_run / "exp" / "expansion.json"),), str(out)
        ))
        assert out.exists() and out.stat().st_size > 0
        assert summary.bars == 2 * 12 + 1

    def test_convergence_series_nonincreasing(self, fixture_run, tmp_path):
        out = tmp_path / "conv.png"
        inputs = (
            str(fixture_run / "n16" / "report.json"),
            str(fixture_run / "n32" / "report.json"),
        )
        summary = render(PlotJob("convergence", inputs, str(out)))
        assert out.exists() and out.stat().st_size > 0
        assert summary.series == 2  # one curve per time
        # the underlying data is monotone in N, so every curve must be flagged
        assert len(summary.notes) == 2


class TestCli:
    def test_cli_renders_and_prints_path(self, fixture_run, tmp_path, capsys):
        out = tmp_path / "cli.png"
        code = plot_main([
            "--kind", "heatmap",
            "--in", str(fixture_run / "n16" / "density_t0.0.csv"),
            "--out", str(out),
        ])
        assert code == 0
        assert str(out) in capsys.readouterr().out
        assert out.exists()

    def test_schema_mismatch_exits_nonzero(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        code = plot_main(["--kind", "heatmap", "--in", str(bad), "--out", str(tmp_path / "x.png")])
        assert code == 2
        assert "expected header" in capsys.readouterr().err

    def test_missing_file_exits_nonzero(self, tmp_path):
        code = plot_main([
            "--kind", "spectrum", "--in", str(tmp_path / "nope.json"),
            "--out", str(tmp_path / "x.png"),
        ])
        assert code == 2


class TestJobValidation:
    def test_unknown_kind_rejected(self):
        with pytest.raises(SchemaError):
            PlotJob("sparkline", ("x.csv",), "out.png")

    def test_empty_inputs_rejected(self):
        with pytest.raises(SchemaError):
            PlotJob("heatmap", (), "out.png")


class TestReaderValidation:
    def test_expansion_coefficient_count_checked(self, tmp_path):
        bad = tmp_path / "expansion.json"
        bad.write_text(json.dumps({"N": 3, "coefficients": [], "completeness": 0.0}))
        with pytest.raises(SchemaError):
            load_expansion_json(bad)

    def test_report_series_checked(self, tmp_path):
        bad = tmp_path / "report.json"
        bad.write_text(json.dumps({"l2_error_vs_oracle": [{"t": 0.0}]}))
        with pytest.raises(SchemaError):
            load_report_json(bad)
