"""Sweep execution, the fixed CSV schema, artifact emission, and the CLI."""
import dataclasses
import json
import subprocess
import sys

import pytest

import imasim
from imasim import ConfusionCounts, estimate_rates
from imasim.configfile import SweepSpec
from imasim.sweep import (
    CSV_COLUMNS,
    ResultRow,
    _format_cell,
    config_snapshot,
    emit_outputs,
    parse_results_csv,
    rows_to_csv,
    run_sweep,
)
from test_sampling import shrink_window


def test_csv_column_order_is_pinned():
    assert CSV_COLUMNS == (
        "swept_var", "value", "model", "source",
        "p_fa", "p_fa_lo", "p_fa_hi",
        "p_md", "p_md_lo", "p_md_hi",
        "xi", "ima", "ima_lo", "ima_hi",
        "n_trials", "seed",
    )


def sample_rows():
    report = estimate_rates(ConfusionCounts(700, 50, 80, 170),
                            model_tag="prm:30.0")
    return [
        ResultRow.from_report("d_t", 80.0, "mc", report, 1000, 1),
        ResultRow.failed("d_t", 80.0, "prm:zeta", "mc", 1000, 1),
    ]


def test_result_row_constructors():
    good, bad = sample_rows()
    assert good.model == "prm:30.0"
    assert good.p_fa == pytest.approx(50 / 750)
    assert good.ima == pytest.approx(0.87)
    assert good.ima_lo < good.ima < good.ima_hi
    assert good.n_trials == 1000 and good.seed == 1
    assert bad.p_fa is None and bad.ima is None and bad.xi is None
    assert bad.model == "prm:zeta"


def test_csv_round_trip_is_exact(tmp_path):
    rows = sample_rows()
    text = rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    # None metrics serialize as empty cells
    assert ",,," in lines[2]
    assert parse_results_csv(text) == rows

    path = tmp_path / "rows.csv"
    path.write_text(text)
    assert parse_results_csv(path) == rows

    assert parse_results_csv(",".join(CSV_COLUMNS) + "\n") == []


def test_csv_parse_rejects_foreign_layouts():
    with pytest.raises(ValueError, match="unexpected CSV header"):
        parse_results_csv("a,b,c\n1,2,3\n")
    good = rows_to_csv(sample_rows())
    truncated = good.splitlines()[0] + "\nd_t,80.0,prm\n"
    with pytest.raises(ValueError, match="malformed CSV row"):
        parse_results_csv(truncated)


def test_format_cell_guards_the_layout():
    assert _format_cell(None) == ""
    assert _format_cell("prm:30.0") == "prm:30.0"
    assert _format_cell(0.25) == "0.25"
    assert _format_cell(7) == "7"
    with pytest.raises(ValueError, match="CSV layout"):
        _format_cell("a,b")


def test_range_sweep_shares_draws_and_adds_analytic_rows(rayleigh_config):
    config = shrink_window(rayleigh_config, 400.0)
    spec = SweepSpec("prm_range", (10.0, 20.0), ("prm", "ibm:30"),
                     n_trials=2000, seed=5)
    result = run_sweep(config, spec)
    assert result.errors == ()
    again = run_sweep(config, spec)
    assert result == again

    mc = [r for r in result.rows if r.source == "mc"]
    analytic = [r for r in result.rows if r.source == "analytic"]
    assert len(mc) == 4 and len(analytic) == 4
    assert all(r.n_trials == 2000 for r in mc)
    assert all(r.n_trials == 0 for r in analytic)
    # analytic rows are point-valued
    assert all(r.ima_lo == r.ima == r.ima_hi for r in analytic)

    # the bare token rides the grid; the fixed token stays fixed
    tags = {(r.value, r.model) for r in mc}
    assert tags == {(10.0, "prm:10.0"), (10.0, "ibm:30.0"),
                    (20.0, "prm:20.0"), (20.0, "ibm:30.0")}
    # one shared sampling pass: the fixed model's counts cannot differ
    fixed = [r for r in mc if r.model == "ibm:30.0"]
    assert fixed[0].ima == fixed[1].ima
    assert fixed[0].p_md == fixed[1].p_md


def test_spacing_sweep_reruns_each_point(rayleigh_config):
    spec = SweepSpec("d_t", (50.0, 100.0), ("prm:30",), n_trials=2000, seed=3)
    result = run_sweep(rayleigh_config, spec)
    assert result.errors == ()
    mc = {r.value: r for r in result.rows if r.source == "mc"}
    assert set(mc) == {50.0, 100.0}
    # denser deployments see more outage, so the clear-rate weight drops
    assert mc[50.0].xi < mc[100.0].xi
    analytic = {r.value: r for r in result.rows if r.source == "analytic"}
    assert analytic[50.0].xi < analytic[100.0].xi


def test_sweep_survives_unresolvable_tokens(rayleigh_config):
    config = shrink_window(rayleigh_config, 400.0)
    spec = SweepSpec("d_t", (50.0, 100.0), ("prm:zeta", "prm:30"),
                     n_trials=500, seed=3)
    result = run_sweep(config, spec)
    # the zeta request cannot resolve on a Rayleigh/omni config
    assert len(result.errors) == 2
    assert all("zeta" in e for e in result.errors)
    failed = [r for r in result.rows if r.model == "prm:zeta"]
    assert len(failed) == 2
    assert all(r.ima is None and r.source == "mc" for r in failed)
    healthy = [r for r in result.rows if r.model == "prm:30.0"]
    assert all(r.ima is not None for r in healthy)
    assert len(healthy) == 4      # mc + analytic at both grid points


def test_emit_outputs_writes_csv_plot_manifest(rayleigh_config, tmp_path):
    config = shrink_window(rayleigh_config, 400.0)
    spec = SweepSpec("prm_range", (10.0, 20.0), ("prm",), n_trials=500, seed=2)
    result = run_sweep(config, spec)
    named = {"demo": {
        "rows": result.rows,
        "errors": result.errors,
        "config": config_snapshot(config),
        "sweep": dataclasses.asdict(spec),
    }}
    written = emit_outputs(tmp_path, named)
    assert sorted(written) == ["demo.csv", "demo.pdf", "manifest.json"]
    assert parse_results_csv(tmp_path / "demo.csv") == list(result.rows)
    assert (tmp_path / "demo.pdf").stat().st_size > 0

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["package"] == "imasim"
    assert manifest["version"] == imasim.__version__
    entry = manifest["outputs"]["demo"]
    assert entry["csv"] == "demo.csv"
    assert entry["plot"] == "demo.pdf"
    assert entry["errors"] == []
    assert entry["sweep"]["variable"] == "prm_range"
    assert entry["config"]["deployment"]["link_length_m"] == 20.0

    bare = emit_outputs(tmp_path / "noplots", named, plots=False)
    assert "demo.pdf" not in bare
    manifest = json.loads((tmp_path / "noplots" / "manifest.json").read_text())
    assert "plot" not in manifest["outputs"]["demo"]


def test_config_snapshot_is_json_ready(directional_config):
    snap = config_snapshot(directional_config)
    assert set(snap) == {"radio", "deployment", "antenna", "channel",
                         "accuracy"}
    assert snap["antenna"]["pattern"] == "sector"
    assert snap["deployment"]["sim_radius_m"] == 1250.0
    assert snap["accuracy"]["xi"] == "observed"
    json.dumps(snap)


# ---------------------------------------------------------------------------
# command-line interface, exercised as a real subprocess


def run_cli(*argv, timeout=300):
    return subprocess.run(
        [sys.executable, "-m", "imasim.cli", *argv],
        capture_output=True, text=True, timeout=timeout)


def stderr_error(proc):
    return json.loads(proc.stderr)["error"]


def test_cli_version():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert imasim.__version__ in proc.stdout


def test_cli_requires_a_command():
    proc = run_cli()
    assert proc.returncode == 2


def test_cli_simulate_table_and_json(tmp_path):
    proc = run_cli("simulate", "--config", "scenario1", "--trials", "400",
                   "--seed", "2", "--model", "prm:30", "--model", "ibm:50")
    assert proc.returncode == 0, proc.stderr
    assert "prm:30.0" in proc.stdout and "ibm:50.0" in proc.stdout
    assert "ima" in proc.stdout.splitlines()[0]

    out_file = tmp_path / "report.json"
    proc = run_cli("simulate", "--config", "scenario1", "--trials", "400",
                   "--seed", "2", "--model", "prm:30", "--json",
                   "--out", str(out_file))
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["version"] == imasim.__version__
    assert doc["n_trials"] == 400 and doc["seed"] == 2
    assert doc["source"] == "mc"
    assert doc["config"]["channel"]["fading"] == "rayleigh"
    (report,) = doc["reports"]
    assert report["model"] == "prm:30.0"
    assert report["counts"]["h0_agree"] >= 0
    assert sum(report["counts"].values()) == 400
    assert json.loads(out_file.read_text()) == doc


def test_cli_simulate_defaults_to_the_reference_model():
    proc = run_cli("simulate", "--config", "scenario1", "--trials", "200",
                   "--json")
    assert proc.returncode == 0, proc.stderr
    (report,) = json.loads(proc.stdout)["reports"]
    assert report["model"] == "phym"
    assert report["p_fa"] == 0.0 and report["p_md"] == 0.0


def test_cli_simulate_dump_realization(tmp_path):
    dump = tmp_path / "field.csv"
    proc = run_cli("simulate", "--config", "scenario2", "--trials", "50",
                   "--dump-realization", str(dump))
    assert proc.returncode == 0, proc.stderr
    header = dump.read_text().splitlines()[0]
    assert header == "distance_m,angle_rad,fading_gain,is_los,aims_at_receiver"


def test_cli_analytic_matches_simulate_shape():
    proc = run_cli("analytic", "--config", "scenario1", "--model", "prm:30",
                   "--json")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["source"] == "analytic"
    (report,) = doc["reports"]
    assert report["model"] == "prm:30.0"
    assert "counts" not in report

    # closed forms do not cover the directional scenario
    proc = run_cli("analytic", "--config", "scenario2")
    assert proc.returncode == 2
    assert "scope" in " ".join(stderr_error(proc)["problems"])


def test_cli_error_contract():
    proc = run_cli("simulate", "--config", "no-such-config")
    assert proc.returncode == 2
    err = stderr_error(proc)
    assert err["kind"] == "config"

    proc = run_cli("sweep", "--config", "scenario1")
    assert proc.returncode == 2
    err = stderr_error(proc)
    assert err["kind"] == "config"
    assert any("sweep" in p for p in err["problems"])


def test_cli_sweep_writes_artifacts(tmp_path):
    cfg = tmp_path / "mini.cfg"
    cfg.write_text("""\
[radio]
tx_power_dbm = 20
noise_power_dbm = -111
sinr_threshold_db = 5
ref_attenuation_db = 22.7
path_loss_exponent = 3.6

[deployment]
avg_spacing_m = 80
link_length_m = 20
sim_radius_m = 400

[sweep]
variable = prm_range
grid = 10,30
models = prm, ibm
n_trials = 500
seed = 4
""")
    out = tmp_path / "artifacts"
    proc = run_cli("sweep", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    rows = parse_results_csv(out / "mini.csv")
    assert {r.model for r in rows if r.source == "mc"} == \
        {"prm:10.0", "prm:30.0", "ibm:10.0", "ibm:30.0"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"]["mini"]["errors"] == []
    assert (out / "mini.pdf").exists()
    assert "mini.csv" in proc.stdout


def test_cli_reproduce_runs_both_densities(tmp_path):
    out = tmp_path / "fig1"
    proc = run_cli("reproduce", "fig1", "--trials", "400", "--seed", "3",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    for stem in ("fig1_dt30", "fig1_dt80"):
        rows = parse_results_csv(out / f"{stem}.csv")
        # 10 grid points x 2 models x (mc + analytic)
        assert len(rows) == 40
        assert all(r.seed == 3 and r.n_trials in (0, 400) for r in rows)
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["outputs"]) == {"fig1_dt30", "fig1_dt80"}


def test_cli_validate_small_run():
    proc = run_cli("validate", "--trials", "3000", "--seed", "7")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = proc.stdout.strip().splitlines()
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].endswith("checks passed")
