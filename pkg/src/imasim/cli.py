"""Command-line front end.

Subcommands:

* ``simulate``   Monte Carlo accuracy of chosen models on one config.
* ``analytic``   closed-form accuracy (Rayleigh/omni configs only).
* ``sweep``      run the config's grid sweep, emit CSV + plot + manifest.
* ``reproduce``  run a bundled experiment (fig1, fig2 or fig3).
* ``validate``   analytic-versus-simulation cross-check suite.

Exit status is 0 only when every requested computation completed: 2 for
configuration or usage problems, 1 for runtime failures (a sweep point
failed, a cross-check failed).  Failures also print a one-line JSON error
summary to stderr so callers can react without scraping logs.  Worker
threads come from ``--threads``, then the IMASIM_THREADS environment
variable, then default to one.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__
from .configfile import (DEFAULT_SEED, DEFAULT_SWEEP_TRIALS, ConfigError,
                         SweepSpec, bundled_config_path, parse_config,
                         resolve_model_token)
from .core import DeploymentParams, ScenarioConfig
from .montecarlo import AccuracyReport, estimate_rates, run_models
from .sampling import realization_to_csv, sample_realization
from .scenario1 import Scenario1Params, analytic_accuracy
from .special import QuadratureError
from .sweep import config_snapshot, emit_outputs, run_sweep
from .validation import run_validation

__all__ = ["main"]

_THREADS_ENV = "IMASIM_THREADS"


def _error(kind: str, **payload) -> int:
    """Print a machine-readable error summary; return the exit status."""
    print(json.dumps({"error": {"kind": kind, **payload}}, sort_keys=True),
          file=sys.stderr)
    return 2 if kind in ("config", "usage") else 1


def _thread_count(args) -> int:
    if args.threads is not None:
        value = args.threads
    else:
        raw = os.environ.get(_THREADS_ENV)
        if raw is None:
            return 1
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(
                [f"{_THREADS_ENV} must be an integer, got {raw!r}"])
    if value < 1:
        raise ConfigError([f"thread count must be >= 1, got {value!r}"])
    return value


def _load_config(ref: str):
    """Accept a filesystem path or the stem of a bundled config."""
    if not os.path.exists(ref) and os.path.basename(ref) == ref \
            and not ref.endswith(".cfg"):
        try:
            return parse_config(bundled_config_path(ref))
        except ValueError:
            pass
    if not os.path.exists(ref):
        raise ConfigError([f"config {ref!r}: no such file or bundled name"])
    return parse_config(ref)


def _resolve_models(tokens, config: ScenarioConfig):
    models = {}
    for token in tokens:
        spec = resolve_model_token(token, config)
        models.setdefault(spec.tag, spec)
    return list(models.values())


def _fmt(value, digits: int = 6) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def _fmt_ci(ci) -> str:
    if ci is None:
        return "-"
    return f"[{ci[0]:.6f}, {ci[1]:.6f}]"


def _print_reports(reports: list[AccuracyReport]) -> None:
    header = (f"{'model':<16} {'p_fa':>9} {'p_fa interval':>22} "
              f"{'p_md':>9} {'p_md interval':>22} {'xi':>9} "
              f"{'ima':>9} {'ima interval':>22}")
    print(header)
    print("-" * len(header))
    for r in reports:
        print(f"{r.model_tag:<16} {_fmt(r.p_fa):>9} {_fmt_ci(r.p_fa_ci):>22} "
              f"{_fmt(r.p_md):>9} {_fmt_ci(r.p_md_ci):>22} "
              f"{_fmt(r.xi):>9} {_fmt(r.ima):>9} {_fmt_ci(r.ima_ci):>22}")


def _report_dict(report: AccuracyReport) -> dict:
    out = {
        "model": report.model_tag,
        "p_fa": report.p_fa, "p_fa_ci": report.p_fa_ci,
        "p_md": report.p_md, "p_md_ci": report.p_md_ci,
        "xi": report.xi, "ima": report.ima, "ima_ci": report.ima_ci,
        "undefined": list(report.undefined),
    }
    if report.counts is not None:
        c = report.counts
        out["counts"] = {
            "h0_agree": c.n_h0_agree, "false_alarm": c.n_false_alarm,
            "miss_detect": c.n_miss_detect, "h1_agree": c.n_h1_agree,
        }
    return out


def _emit_report_document(args, config: ScenarioConfig, reports, extra
                          ) -> None:
    document = {
        "version": __version__,
        "config": config_snapshot(config),
        "reports": [_report_dict(r) for r in reports],
    }
    document.update(extra)
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if args.json:
        sys.stdout.write(text)
    else:
        _print_reports(reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_simulate(args) -> int:
    config, _ = _load_config(args.config)
    models = _resolve_models(args.model, config)
    n_threads = _thread_count(args)
    n_trials = args.trials if args.trials is not None else DEFAULT_SWEEP_TRIALS
    seed = args.seed if args.seed is not None else DEFAULT_SEED

    if args.dump_realization:
        rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
        realization_to_csv(sample_realization(config, rng),
                           args.dump_realization)

    counts = run_models(config, models, n_trials, seed, n_threads=n_threads)
    reports = [
        estimate_rates(counts[m.tag], confidence=config.confidence,
                       xi_weight=config.xi_weight, model_tag=m.tag)
        for m in models
    ]
    _emit_report_document(args, config, reports,
                          {"source": "mc", "n_trials": n_trials, "seed": seed})
    return 0


def _cmd_analytic(args) -> int:
    config, _ = _load_config(args.config)
    models = _resolve_models(args.model, config)
    params = Scenario1Params.from_config(config)
    reports = [analytic_accuracy(params, m) for m in models]
    _emit_report_document(args, config, reports, {"source": "analytic"})
    return 0


def _override_spec(spec: SweepSpec, args) -> SweepSpec:
    changes = {}
    if args.trials is not None:
        changes["n_trials"] = args.trials
    if args.seed is not None:
        changes["seed"] = args.seed
    return dataclasses.replace(spec, **changes) if changes else spec


def _sweep_entry(config: ScenarioConfig, spec: SweepSpec, n_threads: int):
    result = run_sweep(config, spec, n_threads=n_threads)
    return {
        "rows": result.rows,
        "errors": result.errors,
        "config": config_snapshot(config),
        "sweep": dataclasses.asdict(spec),
    }


def _cmd_sweep(args) -> int:
    config, spec = _load_config(args.config)
    if spec is None:
        raise ConfigError(
            [f"config {args.config!r} has no [sweep] section to run"])
    spec = _override_spec(spec, args)
    n_threads = _thread_count(args)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    entry = _sweep_entry(config, spec, n_threads)
    written = emit_outputs(args.out, {stem: entry},
                           manifest_extra={"command": "sweep"})
    for name in written:
        print(os.path.join(args.out, name))
    if entry["errors"]:
        return _error("sweep", errors=list(entry["errors"]))
    return 0


def _cmd_reproduce(args) -> int:
    config, spec = parse_config(bundled_config_path(args.figure))
    spec = _override_spec(spec, args)
    n_threads = _thread_count(args)

    named = {}
    if args.figure == "fig1":
        # the range sweep is run on a dense and a sparse deployment
        for spacing in (30.0, 80.0):
            dep = DeploymentParams.from_spacing(
                spacing, config.deployment.link_length_m,
                config.deployment.sim_radius_m)
            point = dataclasses.replace(config, deployment=dep)
            named[f"fig1_dt{spacing:g}"] = _sweep_entry(point, spec, n_threads)
    else:
        named[args.figure] = _sweep_entry(config, spec, n_threads)

    written = emit_outputs(args.out, named,
                           manifest_extra={"command": f"reproduce {args.figure}"})
    for name in written:
        print(os.path.join(args.out, name))
    errors = [f"{stem}: {e}"
              for stem, entry in named.items() for e in entry["errors"]]
    if errors:
        return _error("sweep", errors=errors)
    return 0


def _cmd_validate(args) -> int:
    n_threads = _thread_count(args)
    n_trials = args.trials if args.trials is not None else 1_000_000
    seed = args.seed if args.seed is not None else 7

    def show(result) -> None:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        sys.stdout.flush()

    results = run_validation(n_trials=n_trials, seed=seed,
                             n_threads=n_threads, on_result=show)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        return _error("validation", failed=failed)
    return 0


def _add_common(sub, trials_help: str) -> None:
    sub.add_argument("--trials", type=int, default=None, help=trials_help)
    sub.add_argument("--seed", type=int, default=None,
                     help="base seed for the trial stream (default 1)")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: IMASIM_THREADS or 1)")


def _add_report_flags(sub) -> None:
    sub.add_argument("--json", action="store_true",
                     help="print the JSON document instead of the table")
    sub.add_argument("--out", default=None, metavar="FILE",
                     help="also write the JSON document to FILE")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imasim",
        description="Score simplified interference models against the full "
                    "SINR computation on shared random deployments.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser(
        "simulate", help="Monte Carlo accuracy of chosen models on one config")
    sim.add_argument("--config", required=True,
                     help="config file path or bundled name (e.g. scenario1)")
    sim.add_argument("--model", action="append", default=None,
                     metavar="TOKEN",
                     help="model token (phym, ibm:<m>, prm:<m>, "
                          "prm:delta=<f>, prm:zeta, ibm:2*zeta); repeatable; "
                          "default phym")
    sim.add_argument("--dump-realization", default=None, metavar="FILE",
                     help="also write one sampled network realization as CSV")
    _add_common(sim, "number of Monte Carlo trials (default 100000)")
    _add_report_flags(sim)
    sim.set_defaults(handler=_cmd_simulate)

    ana = commands.add_parser(
        "analytic", help="closed-form accuracy (Rayleigh/omni configs only)")
    ana.add_argument("--config", required=True,
                     help="config file path or bundled name")
    ana.add_argument("--model", action="append", default=None,
                     metavar="TOKEN", help="model token; repeatable; "
                                           "default phym")
    _add_report_flags(ana)
    ana.set_defaults(handler=_cmd_analytic)

    swp = commands.add_parser(
        "sweep", help="run the config's grid sweep and emit CSV/plot/manifest")
    swp.add_argument("--config", required=True,
                     help="config file path or bundled name; needs [sweep]")
    swp.add_argument("--out", default="imasim-out", metavar="DIR",
                     help="output directory (default imasim-out)")
    _add_common(swp, "override the sweep's n_trials")
    swp.set_defaults(handler=_cmd_sweep)

    rep = commands.add_parser(
        "reproduce", help="run a bundled experiment end to end")
    rep.add_argument("figure", choices=("fig1", "fig2", "fig3"),
                     help="which bundled experiment to run")
    rep.add_argument("--out", default="imasim-out", metavar="DIR",
                     help="output directory (default imasim-out)")
    _add_common(rep, "override the experiment's n_trials")
    rep.set_defaults(handler=_cmd_reproduce)

    val = commands.add_parser(
        "validate", help="analytic-versus-simulation cross-check suite")
    _add_common(val, "trials per cross-check (default 1000000)")
    val.set_defaults(handler=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "model", None) is None and hasattr(args, "model"):
        args.model = ["phym"]
    try:
        return args.handler(args)
    except ConfigError as exc:
        return _error("config", problems=exc.problems)
    except QuadratureError as exc:
        return _error("runtime", message=str(exc))
    except ValueError as exc:
        return _error("config", problems=[str(exc)])
    except OSError as exc:
        return _error("io", message=str(exc))


if __name__ == "__main__":
    sys.exit(main())
