"""SINR evaluation under the full, ball-truncated, and protocol outage models.

The full model (``phym``) sums power from every potential interferer; the
ball model (``ibm``) keeps only those within its range and ignores the rest;
the protocol model (``prm``) skips power arithmetic entirely and declares
outage whenever some potential interferer sits within its range.  The
protocol trigger is represented by a marker object, never by an infinite
float, so no NaN can leak out of the arithmetic.

All three decisions for one realization share the same fading and placement
draws, which is what makes per-realization agreement counting meaningful.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import IBM, PHYM, PRM, ModelSpec, ScenarioConfig
from .sampling import BatchFields, Interferer, NetworkRealization, potential_mask

__all__ = [
    "FORCED_OUTAGE",
    "SinrOutcome",
    "Classification",
    "virtual_gain",
    "sinr",
    "classify",
    "outage_flags",
]


class _ForcedOutage:
    """Marker for the protocol model's in-range trigger."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FORCED_OUTAGE"


FORCED_OUTAGE = _ForcedOutage()


class Classification(enum.Enum):
    """Per-realization agreement between a simplified model and the full one.

    The null hypothesis is "the full model sees no outage"; a false alarm is
    a simplified-model outage under that hypothesis, a miss is a clear
    verdict while the full model is in outage.
    """

    H0_AGREE = "h0_agree"
    FALSE_ALARM = "false_alarm"
    MISS_DETECTION = "miss_detection"
    H1_AGREE = "h1_agree"


def virtual_gain(model: ModelSpec, interferer: Interferer,
                 config: ScenarioConfig):
    """Channel gain an interferer contributes under the given model.

    Callers must pass potential interferers only (blocked or misaimed ones
    deposit nothing under any model).  Returns a float, or the
    :data:`FORCED_OUTAGE` marker when the protocol model's range is hit;
    the marker compares unequal to every float and survives no arithmetic.
    """
    radio = config.radio
    r = interferer.distance_m
    if r <= 0.0:
        raise ValueError("interferer distance must be positive")
    rng_m = model.resolved_range_m(config.deployment.link_length_m)
    if model.kind == PRM:
        return FORCED_OUTAGE if r <= rng_m else 0.0
    gain = radio.ref_gain_lin * interferer.fading_gain * r ** (-radio.path_loss_exponent)
    if model.kind == IBM and r > rng_m:
        return 0.0
    return gain


@dataclass(frozen=True)
class SinrOutcome:
    """Outage verdict for one model on one realization.

    ``sinr`` is None exactly when the protocol trigger fired (``forced``);
    otherwise it is the linear signal-to-interference-plus-noise ratio.
    Ties with the threshold count as clear, not outage.
    """

    model_tag: str
    sinr: float | None
    outage: bool
    forced: bool = False


def sinr(model: ModelSpec, real: NetworkRealization) -> SinrOutcome:
    """Evaluate one model on one realization.

    The intended link is never blocked and always beam-aligned, so the
    received signal is ``p * G^2 * a * h0 * d0^-alpha`` with ``h0`` the
    realization's own link fading draw.
    """
    config = real.config
    radio = config.radio
    beta = radio.sinr_threshold_lin
    signal = config.signal_power_mw * real.link_fading

    mask = potential_mask(config, real.distance_m, real.angle_rad,
                          real.is_los, real.aims)
    dist = real.distance_m[mask]
    fad = real.fading[mask]
    rng_m = model.resolved_range_m(config.deployment.link_length_m)

    if model.kind == PRM:
        if dist.size and float(dist.min()) <= rng_m:
            return SinrOutcome(model.tag, None, True, forced=True)
        value = signal / radio.noise_power_mw
        return SinrOutcome(model.tag, value, value < beta)

    if model.kind == IBM:
        keep = dist <= rng_m
        dist, fad = dist[keep], fad[keep]
    coef = radio.tx_power_mw * config.antenna.gain ** 2 * radio.ref_gain_lin
    interference = coef * float(
        np.sum(fad * dist ** (-radio.path_loss_exponent))) if dist.size else 0.0
    value = signal / (interference + radio.noise_power_mw)
    return SinrOutcome(model.tag, value, value < beta)


def classify(model: ModelSpec, real: NetworkRealization) -> Classification:
    """Agreement class of ``model`` against the full model on one realization."""
    full_outage = sinr(ModelSpec.phym(), real).outage
    model_outage = sinr(model, real).outage
    if full_outage:
        return Classification.H1_AGREE if model_outage else Classification.MISS_DETECTION
    return Classification.FALSE_ALARM if model_outage else Classification.H0_AGREE


def _nearest_potential(fields: BatchFields, pot: np.ndarray) -> np.ndarray:
    """Per-trial distance to the nearest potential interferer (inf if none)."""
    masked = np.where(pot, fields.distance_m, np.inf)
    # reduceat needs a guard element so empty trailing segments stay in bounds;
    # empty segments produce garbage and are overwritten below.
    guarded = np.append(masked, np.inf)
    starts = fields.offsets[:-1]
    nearest = np.minimum.reduceat(guarded, starts) if guarded.size > 1 else \
        np.full(fields.n_trials, np.inf)
    nearest[fields.counts == 0] = np.inf
    return nearest


def outage_flags(fields: BatchFields, config: ScenarioConfig,
                 models: list[ModelSpec]) -> dict[str, np.ndarray]:
    """Outage verdicts for each model over a batch, plus the full model's.

    Returns a dict keyed by model tag (always including ``"phym"``); each
    value is a boolean array over trials.  Outage is tested as
    ``signal < beta * (interference + noise)`` to avoid divisions.
    """
    radio = config.radio
    beta = radio.sinr_threshold_lin
    noise = radio.noise_power_mw
    coef = radio.tx_power_mw * config.antenna.gain ** 2 * radio.ref_gain_lin
    signal = config.signal_power_mw * fields.link_fading

    pot = potential_mask(config, fields.distance_m, fields.angle_rad,
                         fields.is_los, fields.aims)
    contrib = np.where(
        pot, fields.fading * fields.distance_m ** (-radio.path_loss_exponent), 0.0)
    full_interf = coef * np.bincount(
        fields.trial_index, weights=contrib, minlength=fields.n_trials)
    flags = {PHYM: signal < beta * (full_interf + noise)}

    nearest = None
    d0 = config.deployment.link_length_m
    for model in models:
        if model.kind == PHYM:
            continue
        rng_m = model.resolved_range_m(d0)
        if model.kind == IBM:
            near_contrib = np.where(fields.distance_m <= rng_m, contrib, 0.0)
            interf = coef * np.bincount(
                fields.trial_index, weights=near_contrib, minlength=fields.n_trials)
            flags[model.tag] = signal < beta * (interf + noise)
        else:
            if nearest is None:
                nearest = _nearest_potential(fields, pot)
            flags[model.tag] = (nearest <= rng_m) | (signal < beta * noise)
    for model in models:
        if model.kind == PHYM:
            flags[model.tag] = flags[PHYM]
    return flags
