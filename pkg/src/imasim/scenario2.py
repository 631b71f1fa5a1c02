"""Analytics for directional antennas with distance-dependent blockage.

With sector lobes of beamwidth ``theta`` and line-of-sight probability
``exp(-b r)``, the interferers that can actually reach the receiver form an
inhomogeneous Poisson field whose mean count stays finite even over the
whole plane.  This module computes that mean over a finite window and in the
limit, and the largest protocol-model range that can never produce a false
alarm on a deterministic channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as sp

from .core import TWO_PI, ScenarioConfig

__all__ = [
    "Scenario2Params",
    "NoiseLimitedLinkError",
    "region_measure",
    "interferer_limit",
    "zeta_radius",
]


class NoiseLimitedLinkError(ValueError):
    """The intended link fails on noise alone for some fading-free geometry,
    so no protocol range can guarantee zero false alarms."""


@dataclass(frozen=True)
class Scenario2Params:
    """Linear-unit parameters for the directional, blockage-limited setting."""

    tx_power_mw: float
    ref_gain: float
    path_loss_exponent: float
    noise_mw: float
    threshold: float
    link_length_m: float
    density: float
    beamwidth_rad: float
    blockage_rate_per_m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.beamwidth_rad <= TWO_PI:
            raise ValueError(
                f"beamwidth must lie in (0, 2*pi], got {self.beamwidth_rad!r}")
        if self.blockage_rate_per_m < 0.0:
            raise ValueError(
                f"blockage rate must be >= 0, got {self.blockage_rate_per_m!r}")
        for name in ("tx_power_mw", "ref_gain", "threshold", "link_length_m"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.path_loss_exponent <= 2.0:
            raise ValueError("path loss exponent must exceed 2")
        if self.noise_mw < 0.0 or self.density < 0.0:
            raise ValueError("noise and density must be >= 0")

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "Scenario2Params":
        """Project a scenario onto this module's assumptions (sector
        antennas; deterministic fading for the zero-false-alarm radius)."""
        problems = []
        if not config.antenna.is_sector:
            problems.append("antennas must be sector patterns")
        if config.channel.fading != "deterministic":
            problems.append("channel must be deterministic (no fading)")
        if problems:
            raise ValueError(
                "configuration outside the directional analytics' scope: "
                + "; ".join(problems)
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
            beamwidth_rad=config.antenna.beamwidth_rad,
            blockage_rate_per_m=config.channel.blockage_rate_per_m,
        )


def region_measure(theta_rad: float, radius_m: float,
                   params: Scenario2Params) -> float:
    """Mean number of potential interferers within ``radius_m``.

    Combines the aiming probability ``theta / 2*pi``, the receiver sector of
    angle ``theta``, and the line-of-sight survival ``exp(-b r)``:

        theta^2 * density / (2*pi*b^2) * (1 - (1 + b R) exp(-b R))

    The parenthesized factor is evaluated as a regularized lower
    incomplete Gamma value, which is exact and stable for small ``b R``.
    """
    if not 0.0 < theta_rad <= TWO_PI:
        raise ValueError(f"theta must lie in (0, 2*pi], got {theta_rad!r}")
    if radius_m < 0.0:
        raise ValueError(f"radius must be >= 0, got {radius_m!r}")
    b = params.blockage_rate_per_m
    if b == 0.0:
        radial = radius_m * radius_m / 2.0
    else:
        radial = float(sp.gammainc(2.0, b * radius_m)) / (b * b)
    return theta_rad * theta_rad * params.density / TWO_PI * radial


def interferer_limit(params: Scenario2Params) -> float:
    """Mean number of potential interferers over the whole plane.

    Finite only because blockage thins distant interferers exponentially;
    without blockage the mean grows with the window, so that case is
    rejected.
    """
    b = params.blockage_rate_per_m
    if b == 0.0:
        raise ValueError(
            "the whole-plane mean diverges without blockage; "
            "use region_measure over a finite window instead"
        )
    th = params.beamwidth_rad
    return th * th * params.density / (TWO_PI * b * b)


def zeta_radius(params: Scenario2Params) -> float:
    """Largest protocol range that guarantees zero false alarms.

    On a deterministic channel, a single potential interferer at distance
    ``d`` pushes the full model into outage exactly when ``d^-alpha``
    exceeds

        zeta = d0^-alpha / threshold - noise/(p*a) * (theta/2*pi)^2,

    so any protocol range at or below ``zeta^(-1/alpha)`` only ever fires
    when the full model is already in outage (additional interferers only
    lower the SINR).  Raises :class:`NoiseLimitedLinkError` when ``zeta``
    is not positive: then the noise floor alone can break the link and no
    range suppresses false alarms.
    """
    alpha = params.path_loss_exponent
    frac = params.beamwidth_rad / TWO_PI
    zeta = (params.link_length_m ** (-alpha) / params.threshold
            - params.noise_mw / (params.tx_power_mw * params.ref_gain) * frac * frac)
    if zeta <= 0.0:
        raise NoiseLimitedLinkError(
            "noise alone can push the link below the threshold, so no "
            f"protocol range has zero false alarms (zeta = {zeta!r})"
        )
    return zeta ** (-1.0 / alpha)
