import csv
import json
import subprocess
import sys

import pytest

from brillouin_cooling.cli import main, read_config, resolve
from brillouin_cooling.scenarios import ENSEMBLE_HEADER, SCENARIOS, SWEEP_HEADER, TIMESERIES_HEADER


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_list_scenarios(capsys):
    assert main(["--list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in SCENARIOS)


def test_fig2a_timeseries(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = fig2a\n[params]\ng_over_Gamma = 10\n")
    assert main(["--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = _rows(tmp_path / "o" / "timeseries.csv")
    assert tuple(rows[0]) == TIMESERIES_HEADER
    n_b = [float(r[3]) for r in rows[1:]]
    assert n_b[0] == 1000.0 and min(n_b) < 100 and abs(n_b[-1] - 990) < 10
    assert all(r[6] == "" for r in rows[1:])
    meta = json.loads((tmp_path / "o" / "run.meta").read_text())
    assert meta["scenario"] == "fig2a" and meta["config"]["params"]["g"] == 10.0
    assert {"version", "seed", "wall_time_s"} <= set(meta)


def test_output_is_byte_identical(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = fig2bc\nseed = 3\n[schedule]\nspan_periods = 6\n")
    for d in ("a", "b"):
        assert main(["--config", cfg, "--out", str(tmp_path / d)]) == 0
    a = (tmp_path / "a" / "timeseries.csv").read_bytes()
    assert a == (tmp_path / "b" / "timeseries.csv").read_bytes()
    events = {r[6] for r in _rows(tmp_path / "a" / "timeseries.csv")[1:]}
    assert events == {"", "off", "reset"}


def test_fig2e_sweep(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = fig2e\n[sweep]\ng_values = 3, 10, 30\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "sweep.csv")
    assert tuple(rows[0]) == SWEEP_HEADER
    assert [r[1] for r in rows[1:]] == ["g_over_Gamma"] * 3
    R = [float(r[2]) for r in rows[1:]]
    assert R == sorted(R, reverse=True)


def test_k_sweep_custom(tmp_path):
    cfg = _write(tmp_path, """[run]
scenario = custom
[params]
gamma = 0.01
Gamma = 1
g = 3
n_th = 1000
[sweep]
kind = k
k_offsets = -6, 0, 6
v_ratio = 1e-4
""")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "sweep.csv")
    assert [float(r[0]) for r in rows[1:]] == [-6.0, 0.0, 6.0]


def test_oracle_and_plot_script(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = oracle\n[oracle]\nn_traj = 200\nn_checkpoints = 5\n")
    assert main(["--config", cfg, "--out", str(tmp_path), "--emit-plot-script"]) == 0
    rows = _rows(tmp_path / "ensemble.csv")
    assert tuple(rows[0]) == ENSEMBLE_HEADER and len(rows) == 7
    script = (tmp_path / "plot_results.py").read_text()
    assert "ensemble.csv" in script
    compile(script, "plot_results.py", "exec")
    assert not list(tmp_path.glob(".*.tmp"))


def test_switch_preset_runs(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = figS7\n[schedule]\nwindows_periods = 0:5, 60:65\nspan_periods = 70\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    assert "reset" in {r[6] for r in _rows(tmp_path / "timeseries.csv")[1:]}


@pytest.mark.parametrize("text, needle", [
    ("[run]\nscenario = custom\n[params]\ngamma = 0.01\ng = 1\nn_th = 5\n", "'Gamma'"),
    ("[run]\nscenario = fig2a\n[params]\nfoo = 1\n", "'foo'"),
    ("[run]\nscenario = fig2a\n[bogus]\nx = 1\n", "[bogus]"),
    ("[run]\nscenario = nope\n", "unknown scenario"),
    ("[params]\ng = 1\n", "'scenario'"),
    ("[run]\nscenario = fig2a\n[params]\ng = abc\n", "'g'"),
    ("[run]\nscenario = fig2a\ng\n", "parse error"),
])
def test_config_errors(tmp_path, capsys, text, needle):
    cfg = _write(tmp_path, text)
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 2
    assert needle in capsys.readouterr().err


def test_invalid_parameters_exit_nonzero(tmp_path, capsys):
    cfg = _write(tmp_path, "[run]\nscenario = fig2a\n[params]\nGamma = -1\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 1
    assert "Gamma" in capsys.readouterr().err


def test_out_dir_from_config(tmp_path):
    cfg = _write(tmp_path, f"[run]\nscenario = figS1\n[output]\ndir = {tmp_path / 'cfgout'}\n")
    assert main(["--config", cfg]) == 0
    assert (tmp_path / "cfgout" / "timeseries.csv").exists()


def test_resolve_overrides_preset(tmp_path):
    cfg = _write(tmp_path, "[run]\nscenario = fig2bc\nrel_tol = 1e-8\n[schedule]\nspan = 2.5\ntau_fraction = 0.1\n")
    sc = resolve(read_config(cfg))
    assert sc.span == 2.5 and sc.span_periods is None and sc.tau_fraction == 0.1 and sc.rel_tol == 1e-8


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "brillouin_cooling", "--list-scenarios"],
                         capture_output=True, text=True, check=True)
    assert "fig2e" in out.stdout
