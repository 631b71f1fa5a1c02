"""imasim: how well do simplified interference models predict link outages?

The package simulates Poisson fields of interfering transmitters and scores
two classical simplifications of interference — a protocol-style disk rule
and a ball-truncated SINR — against the full SINR computation on the same
random draws.  Agreement is summarized by false-alarm and miss-detection
rates and a single hypothesis-weighted accuracy index.  For Rayleigh fading
over omnidirectional, unblocked fields the same quantities exist in closed
form, and the two routes cross-validate each other.
"""
from .core import (AntennaModel, ChannelModel, DeploymentParams, ModelSpec,
                   RadioParams, ScenarioConfig, attenuation_db_to_gain,
                   db_to_linear, density_from_spacing, linear_to_db,
                   resolve_prm_range, sector_gain, spacing_from_density)
from .engine import (FORCED_OUTAGE, Classification, SinrOutcome, classify,
                     sinr, virtual_gain)
from .montecarlo import (AccuracyReport, ConfusionCounts, estimate_rates, ima,
                         run_models, run_monte_carlo, wilson_interval)
from .sampling import (AnnulusSector, Interferer, NetworkRealization,
                       effective_intensity, potential_interferers,
                       realization_to_csv, sample_realization)
from .scenario1 import (Scenario1Params, analytic_accuracy, p_outage_ibm,
                        p_outage_phym, p_outage_prm,
                        p_phym_outage_given_prm_clear)
from .scenario2 import (NoiseLimitedLinkError, Scenario2Params,
                        interferer_limit, region_measure, zeta_radius)
from .special import (QuadratureError, expect_over_h, gamma_complete,
                      gamma_upper_incomplete)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "AnnulusSector",
    "AntennaModel",
    "ChannelModel",
    "Classification",
    "ConfusionCounts",
    "DeploymentParams",
    "FORCED_OUTAGE",
    "Interferer",
    "ModelSpec",
    "NetworkRealization",
    "NoiseLimitedLinkError",
    "QuadratureError",
    "RadioParams",
    "Scenario1Params",
    "Scenario2Params",
    "ScenarioConfig",
    "SinrOutcome",
    "analytic_accuracy",
    "attenuation_db_to_gain",
    "classify",
    "db_to_linear",
    "density_from_spacing",
    "effective_intensity",
    "estimate_rates",
    "expect_over_h",
    "gamma_complete",
    "gamma_upper_incomplete",
    "ima",
    "interferer_limit",
    "linear_to_db",
    "p_outage_ibm",
    "p_outage_phym",
    "p_outage_prm",
    "p_phym_outage_given_prm_clear",
    "potential_interferers",
    "realization_to_csv",
    "region_measure",
    "resolve_prm_range",
    "run_models",
    "run_monte_carlo",
    "sample_realization",
    "sector_gain",
    "sinr",
    "spacing_from_density",
    "virtual_gain",
    "wilson_interval",
    "zeta_radius",
]
