"""Poisson network realizations: placement, marks, and the potential filter.

Interferers form a homogeneous Poisson field on a disk around the typical
receiver (at the origin, boresight along angle zero, intended transmitter at
the link length away).  Each interferer carries independent marks: a fading
gain, a line-of-sight flag, and a flag saying whether its own sector lobe
happens to cover the receiver.  An interferer can deposit power only when it
aims at the receiver, is unobstructed, and sits inside the receiver's lobe;
the rest of the package calls those the *potential* interferers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .core import TWO_PI, ScenarioConfig

__all__ = [
    "Interferer",
    "NetworkRealization",
    "AnnulusSector",
    "sample_realization",
    "potential_interferers",
    "potential_mask",
    "effective_intensity",
    "realization_to_csv",
]


@dataclass(frozen=True)
class Interferer:
    """One interfering transmitter in polar coordinates around the receiver."""

    distance_m: float
    angle_rad: float
    fading_gain: float
    is_los: bool
    aims_at_receiver: bool


@dataclass(frozen=True)
class AnnulusSector:
    """Region between two radii, spanning ``angle_rad`` centred on boresight."""

    angle_rad: float
    inner_m: float
    outer_m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.angle_rad <= TWO_PI:
            raise ValueError(f"sector angle must lie in (0, 2*pi], got {self.angle_rad!r}")
        if not 0.0 <= self.inner_m < self.outer_m:
            raise ValueError(
                f"need 0 <= inner < outer, got {self.inner_m!r}, {self.outer_m!r}"
            )

    def contains(self, distance_m, angle_rad):
        """Elementwise membership test for polar points."""
        d = np.asarray(distance_m, dtype=float)
        a = _wrap_angle(np.asarray(angle_rad, dtype=float))
        radial = (d >= self.inner_m) & (d <= self.outer_m)
        if self.angle_rad >= TWO_PI:
            return radial
        return radial & (np.abs(a) <= self.angle_rad / 2.0)


def _wrap_angle(a):
    """Wrap angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - a, TWO_PI)


class BatchFields:
    """Flat arrays describing a batch of independent realizations.

    ``trial_index`` maps each interferer row to its trial; ``offsets`` holds
    the prefix sums of per-trial counts, so trial ``j`` owns rows
    ``offsets[j]:offsets[j+1]``.  The batch kernel in the engine works on
    these arrays directly; :class:`NetworkRealization` objects are views into
    a single-trial batch.
    """

    __slots__ = ("n_trials", "counts", "offsets", "trial_index", "distance_m",
                 "angle_rad", "fading", "is_los", "aims", "link_fading")

    def __init__(self, n_trials, counts, offsets, trial_index, distance_m,
                 angle_rad, fading, is_los, aims, link_fading):
        self.n_trials = n_trials
        self.counts = counts
        self.offsets = offsets
        self.trial_index = trial_index
        self.distance_m = distance_m
        self.angle_rad = angle_rad
        self.fading = fading
        self.is_los = is_los
        self.aims = aims
        self.link_fading = link_fading


@dataclass(frozen=True)
class NetworkRealization:
    """One sampled network plus the typical link's own fading draw.

    Interferer attributes live in parallel arrays; the ``interferers``
    property materializes them as objects when convenient.  The receiver
    sits at the origin with boresight along angle zero and the intended
    transmitter at ``config.deployment.link_length_m``.
    """

    config: ScenarioConfig
    distance_m: np.ndarray
    angle_rad: np.ndarray
    fading: np.ndarray
    is_los: np.ndarray
    aims: np.ndarray
    link_fading: float

    @property
    def n_interferers(self) -> int:
        return int(self.distance_m.shape[0])

    @property
    def interferers(self) -> tuple[Interferer, ...]:
        return tuple(
            Interferer(float(d), float(a), float(h), bool(l), bool(m))
            for d, a, h, l, m in zip(self.distance_m, self.angle_rad,
                                     self.fading, self.is_los, self.aims)
        )

    def count_in(self, region: AnnulusSector) -> int:
        return int(np.count_nonzero(region.contains(self.distance_m, self.angle_rad)))


def _sector_fraction(config: ScenarioConfig) -> float:
    ant = config.antenna
    return 1.0 if ant.beamwidth_rad is None else ant.beamwidth_rad / TWO_PI


def sample_batch_full(config: ScenarioConfig, rng: np.random.Generator,
                      n_trials: int) -> BatchFields:
    """Draw ``n_trials`` realizations of the full interferer field.

    Draw order is fixed (counts, radii, angles, fading, blockage, aiming,
    link fading) so a given generator state always yields the same batch.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials!r}")
    radius = config.sim_radius_m
    mean_count = config.deployment.interferer_density_per_m2 * math.pi * radius ** 2
    counts = rng.poisson(mean_count, size=n_trials)
    offsets = np.zeros(n_trials + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    trial_index = np.repeat(np.arange(n_trials, dtype=np.int64), counts)

    distance = radius * np.sqrt(rng.random(total))
    angle = rng.uniform(0.0, TWO_PI, size=total)
    if config.channel.fading == "rayleigh":
        fading = rng.exponential(1.0, size=total)
    else:
        fading = np.ones(total)
    if config.channel.has_blockage:
        is_los = rng.random(total) < np.exp(
            -config.channel.blockage_rate_per_m * distance)
    else:
        is_los = np.ones(total, dtype=bool)
    frac = _sector_fraction(config)
    if frac < 1.0:
        aims = rng.random(total) < frac
    else:
        aims = np.ones(total, dtype=bool)
    if config.channel.fading == "rayleigh":
        link_fading = rng.exponential(1.0, size=n_trials)
    else:
        link_fading = np.ones(n_trials)
    return BatchFields(n_trials, counts, offsets, trial_index, distance,
                       angle, fading, is_los, aims, link_fading)


def thinned_mean_count(config: ScenarioConfig) -> float:
    """Expected number of potential interferers inside the simulation window."""
    lam = config.deployment.interferer_density_per_m2
    frac = _sector_fraction(config)
    radius = config.sim_radius_m
    b = config.channel.blockage_rate_per_m
    if b > 0.0:
        radial = sp.gammainc(2.0, b * radius) / (b * b)
    else:
        radial = radius * radius / 2.0
    return lam * frac * frac * TWO_PI * radial


def sample_batch_thinned(config: ScenarioConfig, rng: np.random.Generator,
                         n_trials: int) -> BatchFields:
    """Draw only the potential interferers, skipping everything that could
    never deposit power.

    By the independent-marking property of Poisson fields, keeping each point
    with probability (aims) x (line of sight) x (inside receiver lobe) leaves
    an inhomogeneous Poisson field whose radial intensity carries the factor
    ``(beamwidth / 2*pi)^2 * exp(-blockage_rate * r)``.  Sampling that field
    directly is statistically identical to filtering the full one and is far
    cheaper when the keep probability is small.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials!r}")
    radius = config.sim_radius_m
    b = config.channel.blockage_rate_per_m
    counts = rng.poisson(thinned_mean_count(config), size=n_trials)
    offsets = np.zeros(n_trials + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    trial_index = np.repeat(np.arange(n_trials, dtype=np.int64), counts)

    u = rng.random(total)
    if b > 0.0:
        # inverse CDF of density ~ r exp(-b r) truncated to [0, radius]
        distance = sp.gammaincinv(2.0, u * sp.gammainc(2.0, b * radius)) / b
    else:
        distance = radius * np.sqrt(u)
    half = (config.antenna.beamwidth_rad or TWO_PI) / 2.0
    angle = rng.uniform(-half, half, size=total)
    if config.channel.fading == "rayleigh":
        fading = rng.exponential(1.0, size=total)
    else:
        fading = np.ones(total)
    is_los = np.ones(total, dtype=bool)
    aims = np.ones(total, dtype=bool)
    if config.channel.fading == "rayleigh":
        link_fading = rng.exponential(1.0, size=n_trials)
    else:
        link_fading = np.ones(n_trials)
    return BatchFields(n_trials, counts, offsets, trial_index, distance,
                       angle, fading, is_los, aims, link_fading)


def sample_realization(config: ScenarioConfig,
                       rng: np.random.Generator) -> NetworkRealization:
    """Sample one full network realization (no thinning shortcuts)."""
    batch = sample_batch_full(config, rng, 1)
    return NetworkRealization(
        config=config,
        distance_m=batch.distance_m,
        angle_rad=batch.angle_rad,
        fading=batch.fading,
        is_los=batch.is_los,
        aims=batch.aims,
        link_fading=float(batch.link_fading[0]),
    )


def potential_mask(config: ScenarioConfig, distance_m, angle_rad,
                   is_los, aims) -> np.ndarray:
    """Boolean mask of interferers that can deposit power at the receiver."""
    mask = np.asarray(aims) & np.asarray(is_los)
    beamwidth = config.antenna.beamwidth_rad
    if beamwidth is not None and beamwidth < TWO_PI:
        wrapped = _wrap_angle(np.asarray(angle_rad, dtype=float))
        mask = mask & (np.abs(wrapped) <= beamwidth / 2.0)
    return mask


def potential_interferers(real: NetworkRealization) -> list[Interferer]:
    """Interferers that aim at the receiver, have line of sight, and fall
    inside the receiver's lobe.  Idempotent: filtering the result changes
    nothing."""
    mask = potential_mask(real.config, real.distance_m, real.angle_rad,
                          real.is_los, real.aims)
    return [
        Interferer(float(d), float(a), float(h), bool(l), bool(m))
        for d, a, h, l, m in zip(real.distance_m[mask], real.angle_rad[mask],
                                 real.fading[mask], real.is_los[mask],
                                 real.aims[mask])
    ]


def effective_intensity(distance_m, config: ScenarioConfig):
    """Radial intensity of interferers that aim at the receiver with line of
    sight, before the receiver-lobe selection (which is applied geometrically
    at sampling time).

    Only meaningful when both directional antennas and blockage are present;
    for omnidirectional or unblocked deployments the homogeneous density
    already answers the question, so those configurations are rejected.
    """
    if not config.antenna.is_sector:
        raise ValueError(
            "effective_intensity needs sector antennas; omnidirectional "
            "fields keep the homogeneous density"
        )
    if not config.channel.has_blockage:
        raise ValueError(
            "effective_intensity needs a blockage process; without one the "
            "field keeps the homogeneous density"
        )
    lam = config.deployment.interferer_density_per_m2
    frac = _sector_fraction(config)
    d = np.asarray(distance_m, dtype=float)
    return lam * frac * np.exp(-config.channel.blockage_rate_per_m * d)


_CSV_HEADER = "distance_m,angle_rad,fading_gain,is_los,aims_at_receiver"


def realization_to_csv(real: NetworkRealization, path) -> None:
    """Dump one realization's interferers to CSV.

    Columns: distance_m, angle_rad, fading_gain (all floats, shortest
    round-trip form), then is_los and aims_at_receiver as 0/1.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_CSV_HEADER + "\n")
        for k in range(real.n_interferers):
            fh.write(
                f"{float(real.distance_m[k])!r},{float(real.angle_rad[k])!r},"
                f"{float(real.fading[k])!r},{int(real.is_los[k])},{int(real.aims[k])}\n"
            )
