"""Monte Carlo agreement estimation and the accuracy index.

A run classifies every realization into one of four boxes (clear/clear,
false alarm, miss, outage/outage) against the full SINR model evaluated on
the same draws.  Rates are conditional relative frequencies with Wilson
score intervals; the accuracy index weighs the two error rates by the
probability of each hypothesis:

    index = 1 - xi * p_fa - (1 - xi) * p_md

where ``xi`` is the probability the full model sees no outage.  When ``xi``
is taken from the run itself the index collapses to the plain agreement
rate, which is how its interval is computed.

Trial streams derive from ``(seed, batch_index)`` with a fixed batch size,
so results are identical no matter how many workers process the batches.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import ModelSpec, ScenarioConfig
from .engine import outage_flags
from .sampling import sample_batch_full, sample_batch_thinned, thinned_mean_count

__all__ = [
    "ConfusionCounts",
    "AccuracyReport",
    "wilson_interval",
    "ima",
    "run_monte_carlo",
    "run_models",
    "estimate_rates",
]

# Batches aim for this many interferer rows; the resulting batch size is a
# pure function of the configuration, which keeps streams reproducible.
_TARGET_ROWS_PER_BATCH = 4_000_000
_MAX_BATCH_TRIALS = 32_768


@dataclass(frozen=True)
class ConfusionCounts:
    """Agreement counts of a simplified model against the full model."""

    n_h0_agree: int = 0
    n_false_alarm: int = 0
    n_miss_detect: int = 0
    n_h1_agree: int = 0

    def __post_init__(self) -> None:
        for name in ("n_h0_agree", "n_false_alarm", "n_miss_detect", "n_h1_agree"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def n_total(self) -> int:
        return self.n_h0_agree + self.n_false_alarm + self.n_miss_detect + self.n_h1_agree

    @property
    def n_clear(self) -> int:
        """Trials where the full model saw no outage."""
        return self.n_h0_agree + self.n_false_alarm

    @property
    def n_outage(self) -> int:
        """Trials where the full model saw an outage."""
        return self.n_miss_detect + self.n_h1_agree

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.n_h0_agree + other.n_h0_agree,
            self.n_false_alarm + other.n_false_alarm,
            self.n_miss_detect + other.n_miss_detect,
            self.n_h1_agree + other.n_h1_agree,
        )


def wilson_interval(successes: int, trials: int, confidence: float = 0.95,
                    z: float | None = None) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    ``z`` overrides the normal quantile directly (useful for
    "within k standard errors" checks); otherwise it comes from the
    two-sided confidence level.
    """
    if trials <= 0:
        raise ValueError("wilson_interval needs at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes!r} outside [0, {trials}]")
    if z is None:
        if not 0.0 < confidence < 1.0:
            raise ValueError(f"confidence must lie in (0, 1), got {confidence!r}")
        z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    p_hat = successes / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    centre = (p_hat + z2n / 2.0) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2n / (4.0 * trials)) / denom
    # the score interval provably contains p_hat; the outer min/max only
    # corrects the last-ulp rounding that would otherwise break that promise
    return (min(max(0.0, centre - half), p_hat),
            max(min(1.0, centre + half), p_hat))


def ima(p_fa: float, p_md: float, xi: float) -> float:
    """Accuracy index: one minus the hypothesis-weighted error rates."""
    for name, v in (("p_fa", p_fa), ("p_md", p_md), ("xi", xi)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
    return 1.0 - xi * p_fa - (1.0 - xi) * p_md


@dataclass(frozen=True)
class AccuracyReport:
    """Rates, intervals, and the accuracy index for one model.

    ``None`` metrics are undefined conditionals (no trials under the
    relevant hypothesis); their names appear in ``undefined``.  Analytic
    reports carry zero-width intervals and no counts.

    CSV serialization order (see :meth:`csv_fields`): p_fa, p_fa_lo,
    p_fa_hi, p_md, p_md_lo, p_md_hi, xi, ima, ima_lo, ima_hi.
    """

    model_tag: str
    p_fa: float | None
    p_fa_ci: tuple[float, float] | None
    p_md: float | None
    p_md_ci: tuple[float, float] | None
    xi: float
    ima: float | None
    ima_ci: tuple[float, float] | None
    counts: ConfusionCounts | None = None
    undefined: tuple[str, ...] = field(default=())

    def csv_fields(self) -> list[float | None]:
        def pair(ci):
            return (None, None) if ci is None else ci
        fa_lo, fa_hi = pair(self.p_fa_ci)
        md_lo, md_hi = pair(self.p_md_ci)
        ima_lo, ima_hi = pair(self.ima_ci)
        return [self.p_fa, fa_lo, fa_hi, self.p_md, md_lo, md_hi,
                self.xi, self.ima, ima_lo, ima_hi]


def _batch_trials(config: ScenarioConfig, use_thinned: bool) -> int:
    if use_thinned:
        mean_rows = thinned_mean_count(config)
    else:
        mean_rows = (config.deployment.interferer_density_per_m2
                     * math.pi * config.sim_radius_m ** 2)
    per_batch = int(_TARGET_ROWS_PER_BATCH / max(1.0, mean_rows))
    return max(1, min(_MAX_BATCH_TRIALS, per_batch))


def _use_thinned(config: ScenarioConfig) -> bool:
    """Use the potential-only sampler whenever thinning actually discards
    anything; the choice depends only on the configuration, never on the
    models, so streams stay reproducible."""
    return config.antenna.is_sector or config.channel.has_blockage


def run_models(config: ScenarioConfig, models: list[ModelSpec], n_trials: int,
               seed: int, n_threads: int = 1,
               sampler: str = "auto") -> dict[str, ConfusionCounts]:
    """Classify ``n_trials`` shared realizations under several models at once.

    All models see exactly the same draws, so cross-model count differences
    reflect the models alone.  ``sampler`` is ``"auto"`` (potential-only
    sampling when profitable), ``"full"``, or ``"thinned"``.
    Results depend on ``(config, n_trials, seed)`` only.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials!r}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed!r}")
    if sampler not in ("auto", "full", "thinned"):
        raise ValueError(f"unknown sampler {sampler!r}")
    use_thinned = _use_thinned(config) if sampler == "auto" else sampler == "thinned"
    sample = sample_batch_thinned if use_thinned else sample_batch_full
    batch_trials = _batch_trials(config, use_thinned)
    n_batches = -(-n_trials // batch_trials)
    tags = [m.tag for m in models]

    def one_batch(index: int) -> dict[str, np.ndarray]:
        size = min(batch_trials, n_trials - index * batch_trials)
        rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
        fields = sample(config, rng, size)
        flags = outage_flags(fields, config, models)
        full = flags["phym"]
        out = {}
        for tag in tags:
            model_out = flags[tag]
            out[tag] = np.array([
                int(np.count_nonzero(~model_out & ~full)),
                int(np.count_nonzero(model_out & ~full)),
                int(np.count_nonzero(~model_out & full)),
                int(np.count_nonzero(model_out & full)),
            ])
        return out

    if n_threads > 1 and n_batches > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            partials = list(pool.map(one_batch, range(n_batches)))
    else:
        partials = [one_batch(i) for i in range(n_batches)]

    totals = {tag: np.zeros(4, dtype=np.int64) for tag in tags}
    for part in partials:
        for tag in tags:
            totals[tag] += part[tag]
    return {
        tag: ConfusionCounts(*(int(v) for v in totals[tag])) for tag in tags
    }


def run_monte_carlo(config: ScenarioConfig, model: ModelSpec, n_trials: int,
                    seed: int, n_threads: int = 1,
                    sampler: str = "auto") -> ConfusionCounts:
    """Agreement counts for one model over ``n_trials`` fresh realizations."""
    return run_models(config, [model], n_trials, seed,
                      n_threads=n_threads, sampler=sampler)[model.tag]


def estimate_rates(counts: ConfusionCounts, confidence: float = 0.95,
                   xi_weight: float | None = None,
                   model_tag: str = "") -> AccuracyReport:
    """Turn agreement counts into rates, intervals, and the accuracy index.

    With ``xi_weight=None`` the index weighs errors by the observed clear
    rate and equals the plain agreement rate, so its interval is a Wilson
    interval.  With a fixed weight the index combines the two conditional
    rates; an undefined conditional with a nonzero weight leaves the index
    undefined, while a zero-weight term simply drops out.  Interval bounds
    in the fixed-weight case combine the per-rate Wilson bounds, which is
    conservative.
    """
    n = counts.n_total
    if n <= 0:
        raise ValueError("cannot estimate rates from zero trials")
    undefined: list[str] = []

    if counts.n_clear > 0:
        p_fa = counts.n_false_alarm / counts.n_clear
        p_fa_ci = wilson_interval(counts.n_false_alarm, counts.n_clear, confidence)
    else:
        p_fa, p_fa_ci = None, None
        undefined.append("p_fa")
    if counts.n_outage > 0:
        p_md = counts.n_miss_detect / counts.n_outage
        p_md_ci = wilson_interval(counts.n_miss_detect, counts.n_outage, confidence)
    else:
        p_md, p_md_ci = None, None
        undefined.append("p_md")

    xi_hat = counts.n_clear / n

    if xi_weight is None:
        agree = counts.n_h0_agree + counts.n_h1_agree
        index = agree / n
        index_ci = wilson_interval(agree, n, confidence)
        xi = xi_hat
    else:
        xi = xi_weight
        fa_term = 0.0 if xi == 0.0 else None if p_fa is None else xi * p_fa
        md_term = 0.0 if xi == 1.0 else None if p_md is None else (1.0 - xi) * p_md
        if fa_term is None or md_term is None:
            index, index_ci = None, None
            undefined.append("ima")
        else:
            index = 1.0 - fa_term - md_term
            lo = 1.0
            hi = 1.0
            if xi > 0.0:
                lo -= xi * p_fa_ci[1]
                hi -= xi * p_fa_ci[0]
            if xi < 1.0:
                lo -= (1.0 - xi) * p_md_ci[1]
                hi -= (1.0 - xi) * p_md_ci[0]
            index_ci = (max(0.0, lo), min(1.0, hi))

    return AccuracyReport(
        model_tag=model_tag,
        p_fa=p_fa, p_fa_ci=p_fa_ci,
        p_md=p_md, p_md_ci=p_md_ci,
        xi=xi, ima=index, ima_ci=index_ci,
        counts=counts, undefined=tuple(undefined),
    )
