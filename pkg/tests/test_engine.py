"""Virtual gains, per-realization verdicts, and the batch outage kernel."""
import dataclasses
import math

import numpy as np
import pytest

from imasim import (
    FORCED_OUTAGE,
    Classification,
    Interferer,
    ModelSpec,
    NetworkRealization,
    Scenario2Params,
    classify,
    sinr,
    virtual_gain,
    zeta_radius,
)
from imasim.engine import _ForcedOutage, outage_flags
from imasim.sampling import BatchFields, sample_batch_full
from test_sampling import shrink_window


def make_realization(config, rows, link_fading=1.0):
    """Hand-built realization; rows are (distance, angle, fading, los, aims)."""
    rows = list(rows)
    return NetworkRealization(
        config=config,
        distance_m=np.array([r[0] for r in rows], dtype=float),
        angle_rad=np.array([r[1] for r in rows], dtype=float),
        fading=np.array([r[2] for r in rows], dtype=float),
        is_los=np.array([r[3] for r in rows], dtype=bool),
        aims=np.array([r[4] for r in rows], dtype=bool),
        link_fading=float(link_fading),
    )


def test_forced_outage_marker_is_a_singleton():
    assert _ForcedOutage() is FORCED_OUTAGE
    assert repr(FORCED_OUTAGE) == "FORCED_OUTAGE"
    assert FORCED_OUTAGE != 0.0
    assert FORCED_OUTAGE != 1.0


def test_virtual_gain_per_model(rayleigh_config):
    config = rayleigh_config
    radio = config.radio
    hit = Interferer(50.0, 0.3, 0.7, True, True)
    expected = radio.ref_gain_lin * 0.7 * 50.0 ** -3.6
    assert virtual_gain(ModelSpec.phym(), hit, config) == pytest.approx(
        expected, rel=1e-14)
    assert virtual_gain(ModelSpec.ibm(60.0), hit, config) == pytest.approx(
        expected, rel=1e-14)
    assert virtual_gain(ModelSpec.ibm(40.0), hit, config) == 0.0
    assert virtual_gain(ModelSpec.prm(60.0), hit, config) is FORCED_OUTAGE
    assert virtual_gain(ModelSpec.prm(40.0), hit, config) == 0.0
    # guard factor resolves against the link length (20 m here)
    assert virtual_gain(ModelSpec.prm(guard_delta=1.6), hit, config) is FORCED_OUTAGE
    with pytest.raises(ValueError):
        virtual_gain(ModelSpec.phym(), Interferer(0.0, 0.0, 1.0, True, True),
                     config)


def test_single_interferer_at_zero_false_alarm_radius(directional_config):
    config = directional_config
    radius = zeta_radius(Scenario2Params.from_config(config))
    beta = config.radio.sinr_threshold_lin

    at = make_realization(config, [(radius, 0.0, 1.0, True, True)])
    outcome = sinr(ModelSpec.phym(), at)
    assert outcome.sinr == pytest.approx(beta, rel=1e-12)

    inside = make_realization(config, [(radius * (1 - 1e-9), 0.0, 1.0, True, True)])
    assert sinr(ModelSpec.phym(), inside).outage
    outside = make_realization(config, [(radius * (1 + 1e-9), 0.0, 1.0, True, True)])
    assert not sinr(ModelSpec.phym(), outside).outage


def test_ball_truncation_only_raises_sinr(rayleigh_config):
    config = shrink_window(rayleigh_config, 200.0)
    rng = np.random.default_rng(19)
    from imasim import sample_realization
    for _ in range(100):
        real = sample_realization(config, rng)
        full = sinr(ModelSpec.phym(), real)
        for radius in (10.0, 50.0, 200.0):
            ball = sinr(ModelSpec.ibm(radius), real)
            assert ball.sinr >= full.sinr
            if ball.outage:
                assert full.outage


def test_protocol_model_branches(rayleigh_config):
    config = rayleigh_config
    noise = config.radio.noise_power_mw
    beta = config.radio.sinr_threshold_lin

    forced = sinr(ModelSpec.prm(30.0),
                  make_realization(config, [(25.0, 1.0, 1.0, True, True)]))
    assert forced.forced and forced.outage and forced.sinr is None

    clear = sinr(ModelSpec.prm(20.0),
                 make_realization(config, [(25.0, 1.0, 1e9, True, True)]))
    assert not clear.forced
    # out-of-range interferers vanish entirely; only noise remains
    assert clear.sinr == pytest.approx(config.signal_power_mw / noise, rel=1e-12)
    assert not clear.outage

    # the clear branch still loses to noise when the link fade is deep enough
    faded = sinr(ModelSpec.prm(20.0),
                 make_realization(config, [(25.0, 1.0, 1.0, True, True)],
                                  link_fading=1e-12))
    assert not faded.forced
    assert faded.outage and faded.sinr < beta

    empty = sinr(ModelSpec.prm(30.0), make_realization(config, []))
    assert not empty.forced and not empty.outage


def test_blocked_or_misaimed_interferers_never_count(rayleigh_config,
                                                     directional_config):
    # a blocked interferer inside the protocol range must not trigger it
    blocked = make_realization(directional_config,
                               [(10.0, 0.0, 1.0, False, True)])
    assert not sinr(ModelSpec.prm(30.0), blocked).forced
    misaimed = make_realization(directional_config,
                                [(10.0, 0.0, 1.0, True, False)])
    assert not sinr(ModelSpec.prm(30.0), misaimed).forced
    out_of_lobe = make_realization(directional_config,
                                   [(10.0, math.pi, 1.0, True, True)])
    assert not sinr(ModelSpec.prm(30.0), out_of_lobe).forced
    assert sinr(ModelSpec.phym(), out_of_lobe).sinr == sinr(
        ModelSpec.phym(), make_realization(directional_config, [])).sinr


def test_classify_hits_all_four_classes(rayleigh_config):
    config = rayleigh_config
    ball = ModelSpec.ibm(30.0)
    disk = ModelSpec.prm(30.0)

    quiet = make_realization(config, [])
    assert classify(ball, quiet) is Classification.H0_AGREE

    # weak interferer just inside the disk: full model clear, disk fires
    weak_near = make_realization(config, [(29.0, 0.0, 1e-9, True, True)])
    assert classify(disk, weak_near) is Classification.FALSE_ALARM

    # strong interferer outside the ball: full model in outage, ball clear
    strong_far = make_realization(config, [(100.0, 0.0, 1e8, True, True)])
    assert classify(ball, strong_far) is Classification.MISS_DETECTION

    strong_near = make_realization(config, [(10.0, 0.0, 1e8, True, True)])
    assert classify(ball, strong_near) is Classification.H1_AGREE

    values = {c.value for c in Classification}
    assert values == {"h0_agree", "false_alarm", "miss_detection", "h1_agree"}


def batch_trial(batch, config, j):
    lo, hi = int(batch.offsets[j]), int(batch.offsets[j + 1])
    return NetworkRealization(
        config=config,
        distance_m=batch.distance_m[lo:hi],
        angle_rad=batch.angle_rad[lo:hi],
        fading=batch.fading[lo:hi],
        is_los=batch.is_los[lo:hi],
        aims=batch.aims[lo:hi],
        link_fading=float(batch.link_fading[j]),
    )


@pytest.mark.parametrize("scenario", ["rayleigh", "directional"])
def test_batch_kernel_matches_object_path(scenario, rayleigh_config,
                                          directional_config):
    config = shrink_window(
        rayleigh_config if scenario == "rayleigh" else directional_config,
        250.0, spacing_m=40.0)
    models = [ModelSpec.phym(), ModelSpec.ibm(30.0), ModelSpec.ibm(80.0),
              ModelSpec.prm(30.0), ModelSpec.prm(guard_delta=0.5)]
    n = 300
    batch = sample_batch_full(config, np.random.default_rng(101), n)
    flags = outage_flags(batch, config, models)
    assert set(flags) == {m.tag for m in models} | {"phym"}
    for j in range(n):
        real = batch_trial(batch, config, j)
        for model in models:
            assert flags[model.tag][j] == sinr(model, real).outage, (
                model.tag, j)


def test_outage_sets_grow_with_range(rayleigh_config):
    config = shrink_window(rayleigh_config, 200.0)
    models = [ModelSpec.phym()]
    radii = (10.0, 20.0, 40.0, 80.0, 160.0)
    models += [ModelSpec.ibm(r) for r in radii]
    models += [ModelSpec.prm(r) for r in radii]
    batch = sample_batch_full(config, np.random.default_rng(55), 4_000)
    flags = outage_flags(batch, config, models)
    for kind in ("ibm", "prm"):
        for small, large in zip(radii[:-1], radii[1:]):
            a = flags[f"{kind}:{small!r}"]
            b = flags[f"{kind}:{large!r}"]
            assert not np.any(a & ~b), (kind, small, large)
    for r in radii:
        # ball-model outage implies full-model outage on the same draw
        assert not np.any(flags[f"ibm:{r!r}"] & ~flags["phym"])


def test_disk_verdicts_ignore_interferer_fading(rayleigh_config):
    config = shrink_window(rayleigh_config, 200.0)
    models = [ModelSpec.prm(30.0), ModelSpec.ibm(30.0)]
    batch = sample_batch_full(config, np.random.default_rng(77), 500)
    scrambled = BatchFields(
        batch.n_trials, batch.counts, batch.offsets, batch.trial_index,
        batch.distance_m, batch.angle_rad,
        np.random.default_rng(0).permutation(batch.fading),
        batch.is_los, batch.aims, batch.link_fading)
    before = outage_flags(batch, config, models)
    after = outage_flags(scrambled, config, models)
    assert np.array_equal(before["prm:30.0"], after["prm:30.0"])
    # sanity: the scramble really moved power around
    assert not np.array_equal(before["ibm:30.0"], after["ibm:30.0"])
