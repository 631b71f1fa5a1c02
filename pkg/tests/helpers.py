"""Small shared utilities for the test suite."""
import dataclasses

from imasim.configfile import bundled_config_path, parse_config
from imasim.core import DeploymentParams, ScenarioConfig


def load_bundled(name: str) -> ScenarioConfig:
    config, _ = parse_config(bundled_config_path(name))
    return config


def at_spacing(config: ScenarioConfig, spacing_m: float) -> ScenarioConfig:
    """The same scenario with the average transmitter spacing replaced."""
    dep = DeploymentParams.from_spacing(
        spacing_m, config.deployment.link_length_m,
        config.deployment.sim_radius_m)
    return dataclasses.replace(config, deployment=dep)
