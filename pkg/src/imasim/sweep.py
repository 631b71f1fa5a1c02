"""Parameter sweeps: shared-draw Monte Carlo rows, analytic rows, CSV/plot
output, and the run manifest.

Every grid point evaluates all requested models on the same realizations
(and every point reuses the same master seed), so differences across models
and, for range sweeps, across grid points are free of sampling noise from
model to model.  Closed-form rows appear alongside the Monte Carlo ones
whenever the configuration satisfies the Rayleigh/omnidirectional/unblocked
assumptions.

CSV column order is fixed; floats are written in shortest round-trip form
and parse back exactly, with empty cells for undefined values.  The manifest
records everything needed to regenerate each artifact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

from . import __version__
from .configfile import SweepSpec, resolve_model_token
from .core import AntennaModel, DeploymentParams, ModelSpec, ScenarioConfig
from .montecarlo import AccuracyReport, estimate_rates, run_models
from .scenario1 import Scenario1Params, analytic_accuracy

__all__ = [
    "ResultRow",
    "SweepResult",
    "run_sweep",
    "emit_outputs",
    "rows_to_csv",
    "parse_results_csv",
]

CSV_COLUMNS = (
    "swept_var", "value", "model", "source",
    "p_fa", "p_fa_lo", "p_fa_hi",
    "p_md", "p_md_lo", "p_md_hi",
    "xi", "ima", "ima_lo", "ima_hi",
    "n_trials", "seed",
)


@dataclass(frozen=True)
class ResultRow:
    """One (grid value, model, source) cell of a sweep.

    ``source`` is ``"mc"`` or ``"analytic"``.  Metrics are None when
    undefined (or when the point failed; see the manifest's error list).
    Analytic rows carry ``n_trials = 0`` and zero-width intervals.
    """

    swept_var: str
    value: float
    model: str
    source: str
    p_fa: float | None
    p_fa_lo: float | None
    p_fa_hi: float | None
    p_md: float | None
    p_md_lo: float | None
    p_md_hi: float | None
    xi: float | None
    ima: float | None
    ima_lo: float | None
    ima_hi: float | None
    n_trials: int
    seed: int

    @classmethod
    def from_report(cls, swept_var: str, value: float, source: str,
                    report: AccuracyReport, n_trials: int, seed: int
                    ) -> "ResultRow":
        f = report.csv_fields()
        return cls(swept_var, float(value), report.model_tag, source,
                   f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9],
                   n_trials, seed)

    @classmethod
    def failed(cls, swept_var: str, value: float, model: str, source: str,
               n_trials: int, seed: int) -> "ResultRow":
        return cls(swept_var, float(value), model, source, None, None, None,
                   None, None, None, None, None, None, None, n_trials, seed)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[ResultRow, ...]
    errors: tuple[str, ...]


def _config_at(config: ScenarioConfig, spec: SweepSpec,
               value: float) -> ScenarioConfig:
    """The per-point configuration for one grid value."""
    if spec.variable == "d_t":
        dep = DeploymentParams.from_spacing(
            value, config.deployment.link_length_m,
            config.deployment.sim_radius_m)
        return replace(config, deployment=dep)
    if spec.variable == "theta":
        return replace(config, antenna=AntennaModel.sector(value))
    return config


def run_sweep(config: ScenarioConfig, spec: SweepSpec,
              n_threads: int = 1) -> SweepResult:
    """Evaluate the sweep, one shared-draw Monte Carlo run per grid point.

    Range sweeps never change the deployment, so all their grid values are
    served by a single sampling pass with one model per (value, token) pair.
    Point-level failures (for example a zeta-range request on a config whose
    link is noise-limited) become empty rows plus an error entry; remaining
    points still run.
    """
    rows: list[ResultRow] = []
    errors: list[str] = []
    range_sweep = spec.variable in ("prm_range", "ibm_range")

    points: list[tuple[float, ScenarioConfig, list[ModelSpec]]] = []
    for value in spec.grid:
        point_config = _config_at(config, spec, value)
        grid_value = value if range_sweep else None
        models: list[ModelSpec] = []
        for token in spec.model_tokens:
            try:
                model = resolve_model_token(token, point_config,
                                            grid_value=grid_value,
                                            swept_kind=spec.variable)
            except ValueError as exc:
                errors.append(f"{spec.variable}={value!r} model {token!r}: {exc}")
                rows.append(ResultRow.failed(spec.variable, value, token, "mc",
                                             spec.n_trials, spec.seed))
                continue
            models.append(model)
        points.append((value, point_config, models))

    shared_counts = None
    if range_sweep:
        merged = {m.tag: m for _, _, models in points for m in models}
        if merged:
            try:
                shared_counts = run_models(config, list(merged.values()),
                                           spec.n_trials, spec.seed,
                                           n_threads=n_threads)
            except Exception as exc:
                errors.append(f"{spec.variable} sweep: {exc}")
                shared_counts = {}

    for value, point_config, models in points:
        if not models:
            continue

        if shared_counts is not None:
            counts = {m.tag: shared_counts[m.tag] for m in models
                      if m.tag in shared_counts}
            if len(counts) < len(models):
                for model in models:
                    rows.append(ResultRow.failed(spec.variable, value,
                                                 model.tag, "mc",
                                                 spec.n_trials, spec.seed))
                continue
        else:
            try:
                counts = run_models(point_config, models, spec.n_trials,
                                    spec.seed, n_threads=n_threads)
            except Exception as exc:   # keep the sweep alive, record the point
                errors.append(f"{spec.variable}={value!r}: {exc}")
                for model in models:
                    rows.append(ResultRow.failed(spec.variable, value,
                                                 model.tag, "mc",
                                                 spec.n_trials, spec.seed))
                continue
        for model in models:
            report = estimate_rates(counts[model.tag],
                                    confidence=point_config.confidence,
                                    xi_weight=point_config.xi_weight,
                                    model_tag=model.tag)
            rows.append(ResultRow.from_report(spec.variable, value, "mc",
                                              report, spec.n_trials, spec.seed))

        try:
            params = Scenario1Params.from_config(point_config)
        except ValueError:
            params = None
        if params is not None:
            for model in models:
                try:
                    report = analytic_accuracy(params, model)
                except Exception as exc:
                    errors.append(
                        f"{spec.variable}={value!r} analytic {model.tag}: {exc}")
                    rows.append(ResultRow.failed(spec.variable, value,
                                                 model.tag, "analytic",
                                                 0, spec.seed))
                    continue
                rows.append(ResultRow.from_report(spec.variable, value,
                                                  "analytic", report,
                                                  0, spec.seed))
    return SweepResult(tuple(rows), tuple(errors))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise ValueError(f"cell {value!r} would break the CSV layout")
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def rows_to_csv(rows) -> str:
    """Serialize rows in the fixed column order (shortest round-trip floats)."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(
            _format_cell(getattr(row, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def parse_results_csv(text_or_path) -> list[ResultRow]:
    """Inverse of :func:`rows_to_csv`; accepts a path or the CSV text."""
    text = text_or_path
    if "\n" not in str(text_or_path):
        with open(text_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in str(text).splitlines() if ln]
    header = lines[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(CSV_COLUMNS):
            raise ValueError(f"malformed CSV row {line!r}")
        kwargs = {}
        for name, cell in zip(CSV_COLUMNS, cells):
            if name in ("swept_var", "model", "source"):
                kwargs[name] = cell
            elif name in ("n_trials", "seed"):
                kwargs[name] = int(cell)
            elif cell == "":
                kwargs[name] = None
            else:
                kwargs[name] = float(cell)
        kwargs["value"] = float(kwargs["value"])
        rows.append(ResultRow(**kwargs))
    return rows


_X_LABELS = {
    "prm_range": "interference range (m)",
    "ibm_range": "interference range (m)",
    "d_t": "average transmitter spacing (m)",
    "theta": "beamwidth (rad)",
}


def plot_rows(rows, path, title: str = "") -> None:
    """Accuracy index against the swept variable: analytic curves as lines,
    Monte Carlo points with interval bars.  Written as a vector graphic."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    swept = rows[0].swept_var if rows else ""
    groups: dict[tuple[str, str], list[ResultRow]] = {}
    for row in rows:
        if row.ima is None:
            continue
        groups.setdefault((row.model, row.source), []).append(row)
    for (model, source), grp in sorted(groups.items()):
        grp = sorted(grp, key=lambda r: r.value)
        xs = [r.value for r in grp]
        ys = [r.ima for r in grp]
        if source == "analytic":
            ax.plot(xs, ys, "-", label=f"{model} (closed form)")
        else:
            yerr = [
                [0.0 if r.ima_lo is None else max(0.0, r.ima - r.ima_lo)
                 for r in grp],
                [0.0 if r.ima_hi is None else max(0.0, r.ima_hi - r.ima)
                 for r in grp],
            ]
            ax.errorbar(xs, ys, yerr=yerr, fmt="o", markersize=3.5,
                        capsize=2, linestyle="none", label=f"{model} (MC)")
    ax.set_xlabel(_X_LABELS.get(swept, swept))
    ax.set_ylabel("accuracy index")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def config_snapshot(config: ScenarioConfig) -> dict:
    """JSON-ready dump of a resolved configuration."""
    return {
        "radio": {
            "tx_power_dbm": config.radio.tx_power_dbm,
            "noise_power_dbm": config.radio.noise_power_dbm,
            "sinr_threshold_db": config.radio.sinr_threshold_db,
            "ref_attenuation_db": config.radio.ref_attenuation_db,
            "path_loss_exponent": config.radio.path_loss_exponent,
        },
        "deployment": {
            "density_per_m2": config.deployment.interferer_density_per_m2,
            "link_length_m": config.deployment.link_length_m,
            "sim_radius_m": config.sim_radius_m,
        },
        "antenna": {
            "pattern": "sector" if config.antenna.is_sector else "omni",
            "beamwidth_rad": config.antenna.beamwidth_rad,
        },
        "channel": {
            "fading": config.channel.fading,
            "blockage_rate_per_m": config.channel.blockage_rate_per_m,
        },
        "accuracy": {
            "xi": "observed" if config.xi_weight is None else config.xi_weight,
            "confidence": config.confidence,
        },
    }


def emit_outputs(out_dir, named_results, manifest_extra=None,
                 plots: bool = True) -> list[str]:
    """Write one CSV (and optionally one plot) per named sweep plus a
    manifest describing the whole run.

    ``named_results`` maps an artifact stem to a dict with keys ``rows``,
    ``errors``, ``config`` (snapshot dict), and ``sweep`` (spec dict).
    Returns the list of files written, relative to ``out_dir``.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []
    manifest = {
        "package": "imasim",
        "version": __version__,
        "outputs": {},
    }
    if manifest_extra:
        manifest.update(manifest_extra)
    for stem, result in named_results.items():
        csv_name = f"{stem}.csv"
        with open(os.path.join(out_dir, csv_name), "w", encoding="utf-8",
                  newline="") as fh:
            fh.write(rows_to_csv(result["rows"]))
        written.append(csv_name)
        entry = {
            "csv": csv_name,
            "config": result["config"],
            "sweep": result.get("sweep"),
            "errors": list(result.get("errors", ())),
        }
        if plots:
            plot_name = f"{stem}.pdf"
            plot_rows(result["rows"], os.path.join(out_dir, plot_name),
                      title=stem)
            written.append(plot_name)
            entry["plot"] = plot_name
        manifest["outputs"][stem] = entry
    with open(os.path.join(out_dir, "manifest.json"), "w",
              encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append("manifest.json")
    return written
