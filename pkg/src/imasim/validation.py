"""Cross-checks tying the simulator to the closed forms.

Each check compares two independent routes to the same number: Monte Carlo
counts against closed-form outage probabilities and error rates, structural
zero-false-alarm guarantees against exact counts, sampled potential-interferer
counts against the mean measure of the thinned field, and the two sampling
paths against each other.  Statistical comparisons use three binomial
standard errors (a Wilson interval at z = 3); structural guarantees must
hold exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configfile import bundled_config_path, parse_config
from .core import ModelSpec, ScenarioConfig
from .montecarlo import ConfusionCounts, run_models, wilson_interval
from .sampling import sample_batch_thinned
from .scenario1 import (Scenario1Params, analytic_accuracy, p_outage_ibm,
                        p_outage_phym, p_outage_prm)
from .scenario2 import Scenario2Params, region_measure, zeta_radius

__all__ = ["CheckResult", "run_validation"]

_Z = 3.0


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named cross-check."""

    name: str
    passed: bool
    detail: str


def _covers(value: float, successes: int, trials: int) -> tuple[bool, str]:
    lo, hi = wilson_interval(successes, trials, z=_Z)
    ok = lo <= value <= hi
    return ok, (f"closed form {value:.6f}, simulated {successes}/{trials} "
                f"-> [{lo:.6f}, {hi:.6f}] at z={_Z:g}")


def _model_outage(counts: ConfusionCounts) -> int:
    return counts.n_false_alarm + counts.n_h1_agree


def _rayleigh_checks(config: ScenarioConfig, n_trials: int, seed: int,
                     n_threads: int):
    """Simulator versus closed forms on the Rayleigh/omni scenario."""
    params = Scenario1Params.from_config(config)
    disk = ModelSpec.prm(30.0)
    ball = ModelSpec.ibm(50.0)
    counts = run_models(config, [disk, ball], n_trials, seed,
                        n_threads=n_threads)
    c_disk, c_ball = counts[disk.tag], counts[ball.tag]

    ok, detail = _covers(p_outage_phym(params), c_disk.n_outage,
                         c_disk.n_total)
    yield CheckResult("full-outage-matches-closed-form", ok, detail)

    ok, detail = _covers(p_outage_ibm(params, ball.range_m),
                         _model_outage(c_ball), c_ball.n_total)
    yield CheckResult("ball-outage-matches-closed-form", ok, detail)

    ok, detail = _covers(p_outage_prm(disk.range_m, params.density),
                         _model_outage(c_disk), c_disk.n_total)
    yield CheckResult("disk-trigger-matches-void-probability", ok, detail)

    acc_disk = analytic_accuracy(params, disk)
    ok_fa, detail_fa = _covers(acc_disk.p_fa, c_disk.n_false_alarm,
                               c_disk.n_clear)
    ok_md, detail_md = _covers(acc_disk.p_md, c_disk.n_miss_detect,
                               c_disk.n_outage)
    yield CheckResult("disk-error-rates-match-closed-forms",
                      ok_fa and ok_md,
                      f"false alarms: {detail_fa}; misses: {detail_md}")

    acc_ball = analytic_accuracy(params, ball)
    ok, detail = _covers(acc_ball.p_md, c_ball.n_miss_detect,
                         c_ball.n_outage)
    yield CheckResult("ball-miss-rate-matches-closed-form", ok, detail)

    for label, acc, c in (("disk", acc_disk, c_disk), ("ball", acc_ball, c_ball)):
        agree = c.n_h0_agree + c.n_h1_agree
        ok, detail = _covers(acc.ima, agree, c.n_total)
        yield CheckResult(f"accuracy-index-matches-closed-form-{label}",
                          ok, detail)

    yield c_ball  # handed back for the cross-scenario exact-zero check


def _directional_checks(config: ScenarioConfig, n_trials: int, seed: int,
                        n_threads: int):
    """Structural guarantees and field statistics on the directional,
    blockage-limited scenario."""
    params = Scenario2Params.from_config(config)
    radius = zeta_radius(params)
    disk = ModelSpec.prm(radius)
    ball = ModelSpec.ibm(2.0 * radius)
    counts = run_models(config, [disk, ball], n_trials, seed,
                        n_threads=n_threads)
    c_disk, c_ball = counts[disk.tag], counts[ball.tag]

    yield CheckResult(
        "zero-false-alarm-radius-silences-disk",
        c_disk.n_false_alarm == 0,
        f"range {radius:.6f} m, false alarms "
        f"{c_disk.n_false_alarm}/{c_disk.n_clear}")

    rng = np.random.default_rng(np.random.SeedSequence((seed, 10_000)))
    fields = sample_batch_thinned(config, rng, n_trials)
    mean = float(np.mean(fields.counts))
    measure = region_measure(params.beamwidth_rad, config.sim_radius_m, params)
    tol = _Z * math.sqrt(measure / n_trials)
    yield CheckResult(
        "potential-count-matches-mean-measure",
        abs(mean - measure) <= tol,
        f"sampled mean {mean:.6f}, measure {measure:.6f}, "
        f"tolerance {tol:.6f} at z={_Z:g}")

    m = max(1, n_trials // 5)
    full = run_models(config, [disk], m, seed + 1, n_threads=n_threads,
                      sampler="full")[disk.tag]
    thin = run_models(config, [disk], m, seed + 1, n_threads=n_threads,
                      sampler="thinned")[disk.tag]
    ok = True
    pieces = []
    for label, x1, x2 in (("full-model outage", full.n_outage, thin.n_outage),
                          ("disk trigger", _model_outage(full),
                           _model_outage(thin))):
        pooled = (x1 + x2) / (2.0 * m)
        se = math.sqrt(max(pooled * (1.0 - pooled) * 2.0 / m, 0.0))
        gap = abs(x1 - x2) / m
        ok = ok and gap <= _Z * se
        pieces.append(f"{label} {x1} vs {x2} of {m} (gap {gap:.2e}, "
                      f"tol {_Z * se:.2e})")
    yield CheckResult("sampling-paths-agree", ok, "; ".join(pieces))

    yield c_ball


def run_validation(n_trials: int = 1_000_000, seed: int = 7,
                   n_threads: int = 1, on_result=None) -> list[CheckResult]:
    """Run every cross-check and return the results in a fixed order.

    ``on_result`` is called with each :class:`CheckResult` as soon as it is
    known, which lets callers stream progress on long runs.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials!r}")
    results: list[CheckResult] = []

    def emit(result: CheckResult) -> None:
        results.append(result)
        if on_result is not None:
            on_result(result)

    s1_config, _ = parse_config(bundled_config_path("scenario1"))
    s2_config, _ = parse_config(bundled_config_path("scenario2"))

    ball_counts: list[ConfusionCounts] = []
    for scenario in (
        _rayleigh_checks(s1_config, n_trials, seed, n_threads),
        _directional_checks(s2_config, n_trials, seed, n_threads),
    ):
        for item in scenario:
            if isinstance(item, ConfusionCounts):
                ball_counts.append(item)
            else:
                emit(item)

    total_fa = sum(c.n_false_alarm for c in ball_counts)
    total_clear = sum(c.n_clear for c in ball_counts)
    emit(CheckResult(
        "ball-model-never-false-alarms",
        total_fa == 0,
        f"false alarms {total_fa}/{total_clear} across both scenarios"))
    return results
