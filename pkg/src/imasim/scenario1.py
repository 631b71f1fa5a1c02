"""Closed-form outage probabilities for Rayleigh fading over an
omnidirectional, unblocked Poisson field, and the accuracy rates they imply.

With unit-mean exponential fading on the intended link, the probability that
the SINR stays above the threshold factorizes into a noise term and the
Laplace functional of the interference field.  For the full model the radial
integral collapses to a Gamma-function product; truncating the field at a
ball (the ball model) or conditioning on an empty disk (the protocol model's
clear event) leaves incomplete-Gamma integrands that are averaged over the
interferers' fading with :func:`imasim.special.expect_over_h`.

Everything here works in exponent space until the final ``1 - exp(-T)``;
raw probabilities are asserted to sit within 1e-12 of [0, 1] before being
clamped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IBM, PHYM, PRM, ModelSpec, ScenarioConfig
from .montecarlo import AccuracyReport
from .special import (expect_over_h, gamma_complete, gamma_lower_incomplete,
                      gamma_upper_incomplete)

__all__ = [
    "Scenario1Params",
    "p_outage_phym",
    "p_outage_ibm",
    "p_outage_prm",
    "p_phym_outage_given_prm_clear",
    "analytic_accuracy",
]

_PROB_SLACK = 1e-12


@dataclass(frozen=True)
class Scenario1Params:
    """Linear-unit parameters of the closed forms.

    ``tx_power_mw`` and ``noise_mw`` are in milliwatts, ``ref_gain`` is the
    linear channel gain at unit distance, ``threshold`` the linear SINR
    threshold, ``link_length_m`` the intended link length, and ``density``
    the interferer density per square metre.
    """

    tx_power_mw: float
    ref_gain: float
    path_loss_exponent: float
    noise_mw: float
    threshold: float
    link_length_m: float
    density: float

    def __post_init__(self) -> None:
        if self.path_loss_exponent <= 2.0:
            raise ValueError("path loss exponent must exceed 2")
        for name in ("tx_power_mw", "ref_gain", "threshold", "link_length_m"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.noise_mw < 0.0 or self.density < 0.0:
            raise ValueError("noise and density must be >= 0")

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "Scenario1Params":
        """Project a scenario onto the closed forms' assumptions.

        Requires Rayleigh fading, omnidirectional antennas, and no blockage;
        anything else falls outside what the expressions describe.
        """
        problems = []
        if config.channel.fading != "rayleigh":
            problems.append("fading must be rayleigh")
        if config.antenna.is_sector:
            problems.append("antennas must be omnidirectional")
        if config.channel.has_blockage:
            problems.append("blockage must be disabled")
        if problems:
            raise ValueError(
                "configuration outside the closed forms' scope: " + "; ".join(problems)
            )
        r = config.radio
        return cls(
            tx_power_mw=r.tx_power_mw,
            ref_gain=r.ref_gain_lin,
            path_loss_exponent=r.path_loss_exponent,
            noise_mw=r.noise_power_mw,
            threshold=r.sinr_threshold_lin,
            link_length_m=config.deployment.link_length_m,
            density=config.deployment.interferer_density_per_m2,
        )

    @property
    def interference_scale(self) -> float:
        """The factor beta * d0^alpha multiplying each interferer's fading."""
        return self.threshold * self.link_length_m ** self.path_loss_exponent

    @property
    def noise_exponent(self) -> float:
        """Exponent contributed by noise alone."""
        return (self.noise_mw * self.interference_scale
                / (self.tx_power_mw * self.ref_gain))


def _as_probability(raw: float) -> float:
    if not -_PROB_SLACK <= raw <= 1.0 + _PROB_SLACK:
        raise AssertionError(f"probability candidate {raw!r} outside [0, 1] tolerance")
    return min(1.0, max(0.0, raw))


def _outage_from_exponent(exponent: float) -> float:
    # exponent >= 0 up to rounding; 1 - exp(-T) through expm1 keeps precision
    return _as_probability(-math.expm1(-exponent))


def _ball_bracket(params: Scenario1Params, radius_m: float):
    """Integrand (in the fading variable) of the truncated field's exponent.

    Equals, for each fading value ``h``, twice the radial integral over
    [0, radius] of ``(1 - exp(-c h t^-alpha)) t`` with ``c`` the interference
    scale; written with the upper incomplete Gamma so no numerical radial
    integration is needed.
    """
    alpha = params.path_loss_exponent
    c = params.interference_scale
    s = 1.0 - 2.0 / alpha
    r_sq = radius_m * radius_m
    r_pow = radius_m ** (-alpha)

    def bracket(h: np.ndarray) -> np.ndarray:
        x = c * h * r_pow
        ch_pow = (c * h) ** (2.0 / alpha)
        return -r_sq * np.expm1(-x) + ch_pow * gamma_upper_incomplete(s, x)

    return bracket


def _tail_bracket(params: Scenario1Params, radius_m: float):
    """Same as :func:`_ball_bracket` but for the field outside the ball."""
    alpha = params.path_loss_exponent
    c = params.interference_scale
    s = 1.0 - 2.0 / alpha
    r_sq = radius_m * radius_m
    r_pow = radius_m ** (-alpha)

    def bracket(h: np.ndarray) -> np.ndarray:
        x = c * h * r_pow
        ch_pow = (c * h) ** (2.0 / alpha)
        return r_sq * np.expm1(-x) + ch_pow * gamma_lower_incomplete(s, x)

    return bracket


def p_outage_phym(params: Scenario1Params) -> float:
    """Outage probability under the full SINR model.

    The fading average of the unbounded-field exponent is available in
    closed form: E[h^(2/alpha)] is a complete Gamma value.
    """
    alpha = params.path_loss_exponent
    s = 1.0 - 2.0 / alpha
    mean_pow = float(gamma_complete(1.0 + 2.0 / alpha))
    exponent = params.noise_exponent + (
        math.pi * params.density
        * params.interference_scale ** (2.0 / alpha)
        * mean_pow * float(gamma_complete(s))
    )
    return _outage_from_exponent(exponent)


def p_outage_ibm(params: Scenario1Params, r_ibm_m: float) -> float:
    """Outage probability when only interferers within ``r_ibm_m`` count."""
    if r_ibm_m <= 0.0:
        raise ValueError(f"ball radius must be positive, got {r_ibm_m!r}")
    mean_bracket = expect_over_h(_ball_bracket(params, r_ibm_m))
    exponent = params.noise_exponent + math.pi * params.density * mean_bracket
    return _outage_from_exponent(exponent)


def p_outage_prm(r_prm_m: float, density: float) -> float:
    """Probability some interferer sits within the protocol range: one minus
    the void probability of the disk."""
    if r_prm_m <= 0.0:
        raise ValueError(f"protocol range must be positive, got {r_prm_m!r}")
    if density < 0.0:
        raise ValueError(f"density must be >= 0, got {density!r}")
    return _outage_from_exponent(density * math.pi * r_prm_m * r_prm_m)


def p_phym_outage_given_prm_clear(params: Scenario1Params, r_prm_m: float) -> float:
    """Full-model outage probability given no interferer within the protocol
    range, i.e. with the interference field restricted to the outside of the
    disk."""
    if r_prm_m <= 0.0:
        raise ValueError(f"protocol range must be positive, got {r_prm_m!r}")
    mean_bracket = expect_over_h(_tail_bracket(params, r_prm_m))
    exponent = params.noise_exponent + math.pi * params.density * mean_bracket
    return _outage_from_exponent(exponent)


def analytic_accuracy(params: Scenario1Params, model: ModelSpec) -> AccuracyReport:
    """Closed-form error rates and accuracy index for one model.

    The clear-rate weight is ``1 - P_full``.  Degenerate conditionals
    (full-model outage probability exactly 0 or 1 in floating point) are
    reported as undefined rather than invented.  Intervals are zero-width:
    these are not estimates.
    """
    p_full = p_outage_phym(params)
    xi = 1.0 - p_full
    undefined: list[str] = []

    if model.kind == PHYM:
        p_fa, p_md = 0.0, 0.0
    elif model.kind == IBM:
        r = model.resolved_range_m(params.link_length_m)
        p_ball = p_outage_ibm(params, r)
        if p_ball > p_full + 1e-9:
            raise AssertionError(
                f"ball-model outage {p_ball!r} exceeds full-model outage {p_full!r}"
            )
        p_fa = 0.0
        if p_full > 0.0:
            p_md = _as_probability(1.0 - min(p_ball, p_full) / p_full)
        else:
            p_md = None
            undefined.append("p_md")
    else:
        r = model.resolved_range_m(params.link_length_m)
        p_trigger = p_outage_prm(r, params.density)
        p_cond = p_phym_outage_given_prm_clear(params, r)
        joint_clear = (1.0 - p_trigger) * (1.0 - p_cond)   # both models clear
        joint_md = (1.0 - p_trigger) * p_cond              # trigger clear, full outage
        if joint_md > p_full + _PROB_SLACK:
            raise AssertionError(
                "miss joint probability exceeds total full-model outage "
                f"({joint_md!r} > {p_full!r})"
            )
        if xi > 0.0:
            p_fa = _as_probability(1.0 - joint_clear / xi)
        else:
            p_fa = None
            undefined.append("p_fa")
        if p_full > 0.0:
            p_md = _as_probability(min(joint_md, p_full) / p_full)
        else:
            p_md = None
            undefined.append("p_md")

    fa_term = 0.0 if xi == 0.0 else None if p_fa is None else xi * p_fa
    md_term = 0.0 if p_full == 0.0 else None if p_md is None else p_full * p_md
    if fa_term is None or md_term is None:
        index = None
        undefined.append("ima")
    else:
        index = _as_probability(1.0 - fa_term - md_term)

    def point(v):
        return None if v is None else (v, v)

    return AccuracyReport(
        model_tag=model.tag,
        p_fa=p_fa, p_fa_ci=point(p_fa),
        p_md=p_md, p_md_ci=point(p_md),
        xi=xi, ima=index, ima_ci=point(index),
        counts=None, undefined=tuple(undefined),
    )
