"""Parameter types and unit conversions shared by every other module.

All power arithmetic inside the package happens in linear milliwatts; dB and
dBm values exist only at the configuration boundary.  The reference channel
attenuation is always interpreted as a magnitude, so both ``22.7`` and
``-61.4`` describe a linear gain below one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RadioParams",
    "DeploymentParams",
    "AntennaModel",
    "ChannelModel",
    "ModelSpec",
    "ScenarioConfig",
    "db_to_linear",
    "linear_to_db",
    "attenuation_db_to_gain",
    "sector_gain",
    "density_from_spacing",
    "spacing_from_density",
    "resolve_prm_range",
]

TWO_PI = 2.0 * math.pi


def db_to_linear(value_db: float) -> float:
    """Convert a dB (or dBm) value to a linear ratio (or milliwatts)."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Inverse of :func:`db_to_linear`; requires a strictly positive input."""
    if value <= 0.0:
        raise ValueError(f"cannot express non-positive value {value!r} in dB")
    return 10.0 * math.log10(value)


def attenuation_db_to_gain(attenuation_db: float) -> float:
    """Linear power gain for a reference attenuation given in dB.

    The figure is treated as a magnitude: ``22.7`` and ``-22.7`` both mean
    a channel that attenuates, and the returned gain is always in (0, 1].
    """
    return 10.0 ** (-abs(attenuation_db) / 10.0)


def sector_gain(beamwidth_rad: float) -> float:
    """Antenna power gain of an ideal sector pattern of the given beamwidth."""
    if not 0.0 < beamwidth_rad <= TWO_PI:
        raise ValueError(
            f"beamwidth must lie in (0, 2*pi], got {beamwidth_rad!r}"
        )
    return TWO_PI / beamwidth_rad


def density_from_spacing(avg_spacing_m: float) -> float:
    """Transmitter density (per m^2) from the average transmitter spacing."""
    if avg_spacing_m <= 0.0:
        raise ValueError(f"average spacing must be positive, got {avg_spacing_m!r}")
    return 1.0 / (avg_spacing_m * avg_spacing_m)


def spacing_from_density(density_per_m2: float) -> float:
    """Average transmitter spacing (m) for a given density; inverse of
    :func:`density_from_spacing`."""
    if density_per_m2 <= 0.0:
        raise ValueError(f"density must be positive, got {density_per_m2!r}")
    return 1.0 / math.sqrt(density_per_m2)


def resolve_prm_range(d0_m: float, radius_m: float | None = None,
                      guard_delta: float | None = None) -> float:
    """Protocol-model interference range in metres.

    Exactly one of ``radius_m`` (explicit) or ``guard_delta`` (guard-zone
    factor, range ``(1 + guard_delta) * d0``) must be given.
    """
    if (radius_m is None) == (guard_delta is None):
        raise ValueError("give exactly one of radius_m or guard_delta")
    if radius_m is not None:
        if radius_m <= 0.0:
            raise ValueError(f"protocol range must be positive, got {radius_m!r}")
        return float(radius_m)
    if guard_delta < 0.0:
        raise ValueError(f"guard delta must be >= 0, got {guard_delta!r}")
    return (1.0 + guard_delta) * d0_m


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class RadioParams:
    """Link-level radio description.

    Attributes hold the boundary (dB / dBm) values; the ``*_mw`` / ``*_lin``
    properties expose the linear quantities the rest of the package uses.
    """

    tx_power_dbm: float
    noise_power_dbm: float
    sinr_threshold_db: float
    ref_attenuation_db: float
    path_loss_exponent: float

    def __post_init__(self) -> None:
        for name in ("tx_power_dbm", "noise_power_dbm", "sinr_threshold_db",
                     "ref_attenuation_db", "path_loss_exponent"):
            _require_finite(name, getattr(self, name))
        if self.path_loss_exponent <= 2.0:
            raise ValueError(
                "path_loss_exponent must exceed 2 so aggregate interference "
                f"from an unbounded field stays finite, got {self.path_loss_exponent!r}"
            )

    @property
    def tx_power_mw(self) -> float:
        return db_to_linear(self.tx_power_dbm)

    @property
    def noise_power_mw(self) -> float:
        return db_to_linear(self.noise_power_dbm)

    @property
    def sinr_threshold_lin(self) -> float:
        return db_to_linear(self.sinr_threshold_db)

    @property
    def ref_gain_lin(self) -> float:
        return attenuation_db_to_gain(self.ref_attenuation_db)


@dataclass(frozen=True)
class DeploymentParams:
    """Interferer field geometry: density, link length, simulation window."""

    interferer_density_per_m2: float
    link_length_m: float
    sim_radius_m: float | None = None   # None: resolved from the scenario

    def __post_init__(self) -> None:
        if self.interferer_density_per_m2 < 0.0:
            raise ValueError(
                f"interferer density must be >= 0, got {self.interferer_density_per_m2!r}"
            )
        if self.link_length_m <= 0.0:
            raise ValueError(f"link length must be positive, got {self.link_length_m!r}")
        if self.sim_radius_m is not None and self.sim_radius_m <= 0.0:
            raise ValueError(f"sim radius must be positive, got {self.sim_radius_m!r}")

    @classmethod
    def from_spacing(cls, avg_spacing_m: float, link_length_m: float,
                     sim_radius_m: float | None = None) -> "DeploymentParams":
        return cls(density_from_spacing(avg_spacing_m), link_length_m, sim_radius_m)

    @property
    def avg_spacing_m(self) -> float:
        return spacing_from_density(self.interferer_density_per_m2)


@dataclass(frozen=True)
class AntennaModel:
    """Ideal antenna pattern: either omnidirectional or a flat sector lobe.

    A sector lobe of beamwidth ``theta`` carries gain ``2*pi/theta`` inside
    the lobe and zero outside; omnidirectional patterns have unit gain.
    """

    beamwidth_rad: float | None = None   # None: omnidirectional

    def __post_init__(self) -> None:
        if self.beamwidth_rad is not None and not 0.0 < self.beamwidth_rad <= TWO_PI:
            raise ValueError(
                f"sector beamwidth must lie in (0, 2*pi], got {self.beamwidth_rad!r}"
            )

    @classmethod
    def omni(cls) -> "AntennaModel":
        return cls(None)

    @classmethod
    def sector(cls, beamwidth_rad: float) -> "AntennaModel":
        if beamwidth_rad is None:
            raise ValueError("sector antennas need an explicit beamwidth")
        return cls(float(beamwidth_rad))

    @property
    def is_sector(self) -> bool:
        return self.beamwidth_rad is not None

    @property
    def gain(self) -> float:
        """Main-lobe power gain (1.0 for omnidirectional patterns)."""
        if self.beamwidth_rad is None:
            return 1.0
        return sector_gain(self.beamwidth_rad)


@dataclass(frozen=True)
class ChannelModel:
    """Small-scale fading plus an optional exponential blockage process.

    ``blockage_rate_per_m`` is the product of obstacle density and expected
    obstacle cross-section, so the line-of-sight probability at distance
    ``r`` is ``exp(-blockage_rate_per_m * r)``.  A rate of zero disables
    blockage entirely.
    """

    fading: str = "rayleigh"            # "rayleigh" | "deterministic"
    blockage_rate_per_m: float = 0.0

    def __post_init__(self) -> None:
        if self.fading not in ("rayleigh", "deterministic"):
            raise ValueError(
                f"fading must be 'rayleigh' or 'deterministic', got {self.fading!r}"
            )
        if self.blockage_rate_per_m < 0.0:
            raise ValueError(
                f"blockage rate must be >= 0, got {self.blockage_rate_per_m!r}"
            )

    @property
    def has_blockage(self) -> bool:
        return self.blockage_rate_per_m > 0.0

    def los_probability(self, distance_m):
        """Probability that a link of the given length is unobstructed."""
        return np.exp(-self.blockage_rate_per_m * np.asarray(distance_m, dtype=float))


PHYM = "phym"
IBM = "ibm"
PRM = "prm"


@dataclass(frozen=True)
class ModelSpec:
    """Which outage model to evaluate, with its interference range.

    * ``phym``: the full SINR reference; takes no range.
    * ``ibm``:  counts only interferers within ``range_m``.
    * ``prm``:  declares outage whenever any potential interferer sits within
      ``range_m``; the range may instead be given as a guard factor
      ``guard_delta``, meaning ``(1 + guard_delta) * link_length``.
    """

    kind: str
    range_m: float | None = None
    guard_delta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in (PHYM, IBM, PRM):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == PHYM:
            if self.range_m is not None or self.guard_delta is not None:
                raise ValueError("the full SINR model takes no interference range")
        elif self.kind == IBM:
            if self.range_m is None or self.guard_delta is not None:
                raise ValueError("ibm needs an explicit range_m (no guard factor)")
            if self.range_m <= 0.0:
                raise ValueError(f"ibm range must be positive, got {self.range_m!r}")
        else:  # PRM
            # validation of the one-of constraint happens in resolve_prm_range
            resolve_prm_range(1.0, self.range_m, self.guard_delta)

    @classmethod
    def phym(cls) -> "ModelSpec":
        return cls(PHYM)

    @classmethod
    def ibm(cls, range_m: float) -> "ModelSpec":
        return cls(IBM, range_m=float(range_m))

    @classmethod
    def prm(cls, range_m: float | None = None,
            guard_delta: float | None = None) -> "ModelSpec":
        return cls(PRM, range_m=None if range_m is None else float(range_m),
                   guard_delta=None if guard_delta is None else float(guard_delta))

    def resolved_range_m(self, link_length_m: float) -> float | None:
        """Interference range in metres, or None for the full SINR model."""
        if self.kind == PHYM:
            return None
        if self.kind == IBM:
            return self.range_m
        return resolve_prm_range(link_length_m, self.range_m, self.guard_delta)

    @property
    def tag(self) -> str:
        """Stable short label used in CSV output and reports."""
        if self.kind == PHYM:
            return "phym"
        if self.guard_delta is not None:
            return f"{self.kind}:delta={self.guard_delta!r}"
        return f"{self.kind}:{self.range_m!r}"


# Minimum simulation window for unblocked scenarios; keeps the neglected
# far-field interference well under the Monte Carlo resolution at the
# densities this package targets.
MIN_SIM_RADIUS_M = 1000.0
BLOCKAGE_WINDOW_FACTOR = 10.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, validated description of one simulated scenario."""

    radio: RadioParams
    deployment: DeploymentParams
    antenna: AntennaModel = field(default_factory=AntennaModel.omni)
    channel: ChannelModel = field(default_factory=ChannelModel)
    xi_weight: float | None = None      # None: weight by observed clear rate
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if self.xi_weight is not None and not 0.0 <= self.xi_weight <= 1.0:
            raise ValueError(f"xi weight must lie in [0, 1], got {self.xi_weight!r}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must lie in (0, 1), got {self.confidence!r}")

    @property
    def sim_radius_m(self) -> float:
        """Simulation window radius, resolving the default when unset.

        With blockage the window extends to ten mean blockage lengths, past
        which fewer than 1e-3 of the potential interferers remain; without it
        the window is ten average spacings, floored at 1 km.
        """
        if self.deployment.sim_radius_m is not None:
            return self.deployment.sim_radius_m
        if self.channel.has_blockage:
            return BLOCKAGE_WINDOW_FACTOR / self.channel.blockage_rate_per_m
        if self.deployment.interferer_density_per_m2 == 0.0:
            return MIN_SIM_RADIUS_M
        return max(BLOCKAGE_WINDOW_FACTOR * self.deployment.avg_spacing_m,
                   MIN_SIM_RADIUS_M)

    @property
    def signal_power_mw(self) -> float:
        """Received power of the intended link before fading."""
        r = self.radio
        g = self.antenna.gain
        return (r.tx_power_mw * g * g * r.ref_gain_lin
                * self.deployment.link_length_m ** (-r.path_loss_exponent))
