import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gwc.states import StateFormatError
from gwc.sweeps import FIGURE_IDS, canonical_name, sweep_rows, write_sweep


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "gwc.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


# -- grid registry --------------------------------------------------------------

def test_registry_has_fifteen_figures():
    assert FIGURE_IDS == tuple(f"fig{i}" for i in range(1, 16))


@pytest.mark.parametrize(
    "raw,name",
    [("fig1", "fig01.csv"), ("fig01", "fig01.csv"), ("FIG9", "fig09.csv"),
     ("fig15", "fig15.csv")],
)
def test_canonical_name_zero_pads(raw, name):
    assert canonical_name(raw) == name


@pytest.mark.parametrize("raw", ["fig0", "fig16", "howdy", "fig"])
def test_unknown_figure_ids_rejected(raw):
    with pytest.raises(StateFormatError):
        canonical_name(raw)


def test_all_figures_produce_rows():
    for fid in FIGURE_IDS:
        header, rows = sweep_rows(fid)
        assert len(header) >= 2
        assert len(rows) > 0
        assert all(len(r) == len(header) for r in rows[:5])


def test_fig8_brackets_the_monogamy_root():
    header, rows = sweep_rows("fig8")
    omegas = np.array([r[0] for r in rows])
    vals = np.array([r[1] for r in rows])
    lo = vals[np.searchsorted(omegas, 0.795) - 1]
    hi = vals[np.searchsorted(omegas, 0.80)]
    assert lo < 0 < hi


def test_fig15_slack_nonnegative_everywhere():
    header, rows = sweep_rows("fig15")
    col = header.index("slack")
    slack = np.array([r[col] for r in rows])
    assert slack.min() >= -1e-9


def test_fig15_squared_exponent_goes_negative():
    header, rows = sweep_rows("fig15", exponent="two")
    col = header.index("slack")
    slack = np.array([r[col] for r in rows])
    assert slack.min() < -1e-3


def test_written_csv_is_deterministic(tmp_path):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_sweep("fig3", p1)
    write_sweep("fig3", p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_uses_twelve_significant_digits(tmp_path):
    path = tmp_path / canonical_name("fig8")
    write_sweep("fig8", path)
    lines = path.read_text().splitlines()
    assert lines[0] == "omega,value"
    first = lines[1].split(",")
    assert first[1] == f"{sweep_rows('fig8')[1][0][1]:.12g}"


# -- command line ----------------------------------------------------------------

def test_cli_compute_gwc_on_bell_state(tmp_path):
    state = tmp_path / "bell.json"
    state.write_text(json.dumps({
        "kind": "pure",
        "dims": [2, 2],
        "amps": [[1 / math.sqrt(2), 0.0], [0.0, 0.0], [0.0, 0.0],
                 [1 / math.sqrt(2), 0.0]],
    }))
    proc = run_cli("compute", "--state", str(state), "--measure", "gwc",
                   "--omega", "0.9", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["value"] == pytest.approx(0.09340443728923574, rel=1e-10)


def test_cli_compute_residual_at_balanced_angle():
    proc = run_cli("compute", "--state", "preset:p422?gamma=0.7853981633974483",
                   "--measure", "residual422", "--omega", "0.9",
                   "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["r_c"] == pytest.approx(-0.5, abs=1e-10)
    assert doc["r_omega"] == pytest.approx(0.014921847984987243, rel=1e-8)


def test_cli_compute_tau_on_w_state():
    proc = run_cli("compute", "--state", "preset:wN?N=3", "--measure", "tau",
                   "--omega", "0.9", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["value"] == pytest.approx(0.0011636392106513021, rel=1e-8)


def test_cli_omega_grid_emits_one_row_per_value():
    proc = run_cli("compute", "--state", "preset:wN?N=3", "--measure", "gwc",
                   "--omega", "0.86:0.9:0.02", "--format", "json")
    assert proc.returncode == 0
    docs = json.loads(proc.stdout)
    assert [d["omega"] for d in docs] == pytest.approx([0.86, 0.88, 0.9])


def test_cli_omega_comma_list():
    proc = run_cli("compute", "--state", "preset:wN?N=3", "--measure", "gwc",
                   "--omega", "0.86,0.9,0.95", "--format", "json")
    assert proc.returncode == 0
    docs = json.loads(proc.stdout)
    assert [d["omega"] for d in docs] == pytest.approx([0.86, 0.9, 0.95])


def test_cli_rejects_malformed_state(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"kind\": \"pure\"")
    proc = run_cli("compute", "--state", str(bad), "--measure", "gwc",
                   "--omega", "0.9")
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_cli_rejects_unknown_preset():
    proc = run_cli("compute", "--state", "preset:nope", "--measure", "gwc",
                   "--omega", "0.9")
    assert proc.returncode == 2


def test_cli_dimension_errors_exit_three():
    proc = run_cli("compute", "--state", "preset:p422", "--measure", "monogamy",
                   "--omega", "0.9")
    assert proc.returncode == 3


def test_cli_focus_out_of_range_exits_three():
    proc = run_cli("compute", "--state", "preset:wN?N=3", "--measure", "tau",
                   "--omega", "0.9", "--focus", "9")
    assert proc.returncode == 3


def test_cli_roots_reports_both_thresholds():
    proc = run_cli("roots", "--format", "json")
    assert proc.returncode == 0
    docs = json.loads(proc.stdout)
    byname = {d["name"]: d for d in docs}
    assert byname["convexity-threshold"]["root"] == pytest.approx(
        0.857978784596432, abs=1e-10
    )
    assert byname["monogamy-threshold"]["root"] == pytest.approx(
        0.7961489468853957, abs=1e-10
    )


def test_cli_sweep_uses_canonical_file_name(tmp_path):
    proc = run_cli("sweep", "--id", "fig1", "--out", str(tmp_path))
    assert proc.returncode == 0
    assert (tmp_path / "fig01.csv").exists()


def test_cli_sweep_without_id_is_usage_error():
    proc = run_cli("sweep")
    assert proc.returncode == 2


def test_cli_report_writes_csv_and_png(tmp_path):
    proc = run_cli("report", "--id", "fig8", "--out", str(tmp_path))
    assert proc.returncode == 0
    assert (tmp_path / "fig08.csv").exists()
    png = tmp_path / "fig08.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_verify_selected_suites_pass():
    proc = run_cli("verify", "roots", "examples")
    assert proc.returncode == 0
    assert "checks passed" in proc.stdout


def test_cli_verify_unknown_suite_exits_two():
    proc = run_cli("verify", "nonesuch")
    assert proc.returncode == 2
