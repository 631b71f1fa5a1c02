"""Explore the directional, blockage-limited deployment analytics.

Narrow beams and exponential line-of-sight decay thin the interference
field to a handful of transmitters that actually matter.  This script
shows the two quantities the package derives for that setting, checks
them against the sampler, and finishes with the accuracy of range rules
tied to the zero-false-alarm radius.
"""
import dataclasses
import math

import numpy as np

from imasim.configfile import bundled_config_path, parse_config
from imasim.core import AntennaModel, DeploymentParams, ModelSpec
from imasim.montecarlo import estimate_rates, run_models
from imasim.sampling import sample_batch_thinned
from imasim.scenario2 import (Scenario2Params, interferer_limit,
                              region_measure, zeta_radius)

TRIALS = 100_000


def main() -> None:
    config, _ = parse_config(bundled_config_path("scenario2"))
    params = Scenario2Params.from_config(config)

    guard = zeta_radius(params)
    print("Zero-false-alarm radius")
    print(f"  a disk rule with range {guard:.2f} m can never flag a link "
          "the full model accepts:")
    print("  a single interferer there, aimed and unblocked, lands exactly "
          "on the decoding threshold.")
    print()

    print("Mean number of potential interferers (infinite window)")
    print(f"{'beamwidth':>12}  {'limit':>8}  {'sampled':>8}")
    for theta in (math.pi / 12, math.pi / 6, math.pi / 3):
        cfg = dataclasses.replace(config, antenna=AntennaModel.sector(theta))
        limit = interferer_limit(Scenario2Params.from_config(cfg))
        fields = sample_batch_thinned(cfg, np.random.default_rng(1), TRIALS)
        sampled = float(np.diff(fields.offsets).mean())
        print(f"{theta:12.4f}  {limit:8.4f}  {sampled:8.4f}")
    print()

    print("Window convergence of the mean-count measure (beamwidth pi/6)")
    print(f"{'radius (m)':>12}  {'share of the limit':>20}")
    limit = interferer_limit(params)
    theta = config.antenna.beamwidth_rad
    for radius in (125.0, 250.0, 500.0, 1250.0):
        share = region_measure(theta, radius, params) / limit
        print(f"{radius:12.0f}  {share:20.6f}")
    print(f"  (the bundled window of {config.sim_radius_m:.0f} m keeps "
          "all but a few parts in ten thousand)")
    print()

    dense = dataclasses.replace(
        config, deployment=DeploymentParams.from_spacing(
            20.0, config.deployment.link_length_m, config.sim_radius_m))
    models = [ModelSpec.prm(guard), ModelSpec.ibm(2 * guard)]
    counts = run_models(dense, models, TRIALS, seed=3)
    print(f"Range rules tied to the radius "
          f"(20 m spacing, {TRIALS} trials)")
    print(f"{'model':>10}  {'false alarms':>12}  {'misses':>8}  "
          f"{'accuracy':>9}")
    for model in models:
        report = estimate_rates(counts[model.tag], model_tag=model.tag)
        print(f"{model.tag[:3]:>10}  {report.counts.n_false_alarm:>12}  "
              f"{report.counts.n_miss_detect:8}  {report.ima:9.5f}")
    print()
    print("Even at this density both rules stay within a fraction of a "
          "percent of the full model once their ranges are tied to the "
          "geometry of the link; the disk buys its zero false alarms with "
          "a few misses.")


if __name__ == "__main__":
    main()
