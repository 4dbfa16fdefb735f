"""Scenario catalog, CSV determinism, config parsing, sweeps, and the CLI."""

import subprocess
import sys
import time

import numpy as np
import pytest

from nvbus import (
    ConfigurationError,
    Frame,
    ResultTable,
    ScenarioConfig,
    builtin_scenarios,
    parse_config_file,
    render_csv,
    run_scenario,
    run_sweep,
    write_table,
)

CATALOG = builtin_scenarios()


def test_catalog_contents():
    assert len(CATALOG) == 17
    assert "res-bal-eq" in CATALOG and "chain-select" in CATALOG
    for sid, cfg in CATALOG.items():
        assert cfg.scenario_id == sid


def test_scenario_is_deterministic_and_fast():
    cfg = CATALOG["res-bal-eq"]
    start = time.monotonic()
    a = run_scenario(cfg)
    elapsed = time.monotonic() - start
    b = run_scenario(cfg)
    assert render_csv(a) == render_csv(b)
    assert elapsed < 5.0


def test_scenario_columns():
    table = run_scenario(CATALOG["res-bal-eq"])
    assert table.headers == ("Jt", "P_NE1", "P_NE2")
    assert table.rows.shape == (601, 3)
    assert table.column("Jt")[0] == 0.0
    assert table.column("P_NE1")[0] == pytest.approx(1.0, abs=1e-12)


def test_variant_scenario_columns():
    table = run_scenario(CATALOG["fid-res"])
    assert table.headers == ("Jt", "F_eq", "F_mag", "F_ind")
    # encoding floor: F >= |alpha|^2 = 1/3
    assert table.rows[:, 1:].min() >= 1.0 / 3.0 - 1e-9


def test_chain_select_transfers_between_enabled_sites():
    table = run_scenario(CATALOG["chain-select"])
    assert "P_NE4" in table.headers
    assert table.column("P_NE4").max() > 0.8


def test_result_table_validation():
    with pytest.raises(ValueError):
        ResultTable(headers=("Jt", "P_NE1"), rows=np.array([[0.0, 0.5, 0.5]]))
    with pytest.raises(ValueError):
        ResultTable(
            headers=("Jt", "P_NE1"), rows=np.array([[0.0, 0.5], [0.0, 0.5]])
        )
    with pytest.raises(ValueError):
        ResultTable(
            headers=("Jt", "P_NE1"), rows=np.array([[0.0, 1.5], [1.0, 0.5]])
        )
    with pytest.raises(ValueError):
        ResultTable(
            headers=("Jt", "P_NE1"), rows=np.array([[0.0, np.nan], [1.0, 0.5]])
        )


def test_golden_files_are_bit_identical(tmp_path):
    from nvbus import golden_path

    for sid in ("res-bal-eq", "disp-bal-ind", "chain-select"):
        table = run_scenario(CATALOG[sid])
        assert render_csv(table) == golden_path(sid).read_text()


def test_write_table_atomic(tmp_path):
    table = run_scenario(CATALOG["res-bal-eq"])
    out = tmp_path / "sub" / "out.csv"
    write_table(table, out)
    assert out.read_text() == render_csv(table)
    assert not list(tmp_path.glob("**/*.tmp"))


def test_sweep_summary():
    base = ScenarioConfig(g=1.0, J=1.0, t_end=40.0, samples=801)
    tables, summary = run_sweep(base, "g", [0.1, 1.0, 10.0], jobs=2)
    assert len(tables) == 3
    assert summary.headers == ("g", "peak_target", "transfer_time")
    peaks = summary.column("peak_target")
    # strong inductance (g >> J) gives near-perfect transfer by Jt = pi;
    # g << J barely moves population on this window; g = J peaks in between
    assert peaks[2] > 0.999
    assert peaks[0] < peaks[1] < peaks[2]
    tt = summary.column("transfer_time")
    assert tt[0] == -1.0 and tt[1] == -1.0  # 0.99 never reached
    assert tt[2] == pytest.approx(np.pi, abs=0.2)


def test_sweep_empty_and_bad_axis():
    base = ScenarioConfig()
    assert run_sweep(base, "g", []) == ([], None)
    with pytest.raises(ConfigurationError):
        run_sweep(base, "coupling", [1.0])


def test_parse_config_file(tmp_path):
    path = tmp_path / "scn.ini"
    path.write_text(
        "[scenario]\n"
        "frame = effective\n"
        "lam = 0.5, 0.4\n"
        "J = 1.0, 0.8\n"
        "t_end = 12\n"
        "track = NE1, NE2\n"
        "[integrator]\n"
        "samples = 121\n"
        "substeps = 8\n"
    )
    cfg = parse_config_file(path)
    assert cfg.frame is Frame.EFFECTIVE_DISPERSIVE
    assert cfg.lam == (0.5, 0.4)
    assert cfg.J == (1.0, 0.8)
    assert cfg.t_end == 12.0
    assert cfg.samples == 121 and cfg.substeps == 8
    table = run_scenario(cfg)
    assert table.rows.shape[0] == 121


def test_parse_config_error_names_field(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[scenario]\ng = one, two\n")
    with pytest.raises(ConfigurationError, match="'g'"):
        parse_config_file(path)
    path.write_text("[scenario]\nbogus = 3\n")
    with pytest.raises(ConfigurationError, match="bogus"):
        parse_config_file(path)
    path.write_text("[scenario]\nframe = sideways\n")
    with pytest.raises(ConfigurationError, match="frame"):
        parse_config_file(path)
    with pytest.raises(ConfigurationError):
        parse_config_file(tmp_path / "missing.ini")


# --- CLI -------------------------------------------------------------------

def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "nvbus.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_cli_list():
    proc = run_cli("list")
    assert proc.returncode == 0
    assert "res-bal-eq" in proc.stdout.split()


def test_cli_run_writes_csv_and_png(tmp_path):
    out = tmp_path / "eq.csv"
    proc = run_cli("run", "res-bal-eq", "--out", str(out), "--samples", "101")
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert (tmp_path / "eq.png").exists()
    header = out.read_text().splitlines()[0]
    assert header == "Jt,P_NE1,P_NE2"


def test_cli_run_no_plot(tmp_path):
    out = tmp_path / "eq.csv"
    proc = run_cli("run", "res-bal-eq", "--out", str(out), "--samples", "51", "--no-plot")
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert not (tmp_path / "eq.png").exists()


def test_cli_unknown_scenario_exit_code():
    proc = run_cli("run", "no-such-scenario")
    assert proc.returncode == 2
    assert "unknown scenario" in proc.stderr


def test_cli_bad_config_exit_code(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[scenario]\nbogus = 3\n")
    proc = run_cli("run", "--config", str(path))
    assert proc.returncode == 2
    assert "bogus" in proc.stderr


def test_cli_sweep(tmp_path):
    proc = run_cli(
        "sweep", "res-bal-eq",
        "--axis", "g", "--values", "0.5,2.0",
        "--outdir", str(tmp_path), "--jobs", "2",
    )
    assert proc.returncode == 0, proc.stderr
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert csvs == [
        "res-bal-eq_g_0.5.csv",
        "res-bal-eq_g_2.csv",
        "res-bal-eq_g_summary.csv",
    ]


def test_cli_sweep_bad_values(tmp_path):
    proc = run_cli(
        "sweep", "res-bal-eq", "--axis", "g", "--values", "a,b",
        "--outdir", str(tmp_path),
    )
    assert proc.returncode == 2
