"""Uplink RIS-aided massive MIMO toolkit.

Closed-form achievable rates under Rician fading, a Monte Carlo oracle to
validate them, and a genetic optimizer for the reflection phases, plus a
CSV-producing experiment harness.
"""

__version__ = "0.1.0"

from .channel import (
    AnglePair,
    ChannelRealization,
    Scenario,
    array_response,
    cascaded_channel,
    los_components,
    path_loss,
    sample_channels,
)
from .ga import GAConfig, GAResult, Individual, ga_optimize
from .moments import (
    MomentSet,
    PhaseVector,
    aligned_phases,
    array_gain,
    interference_moment,
    moment_set,
    noise_moment,
    random_phases,
    signal_moment,
)
from .montecarlo import (
    McEstimate,
    mc_condition_number,
    mc_ergodic_rate,
    mc_moments,
    mc_random_phase_moment_rate,
    mc_random_phase_rate,
)
from .rates import (
    RateReport,
    aligned_power_limit,
    closed_form_rates,
    discrete_alignment_bound,
    nlos_power_scaling_limit,
    non_ris_los_rate,
    non_ris_scaling_rate,
    power_scaled_rate,
    pure_los_rate,
    random_phase_rate_limit,
    rayleigh_rate,
    rayleigh_rate_limits,
)

__all__ = [
    "AnglePair",
    "ChannelRealization",
    "GAConfig",
    "GAResult",
    "Individual",
    "McEstimate",
    "MomentSet",
    "PhaseVector",
    "RateReport",
    "Scenario",
    "aligned_phases",
    "aligned_power_limit",
    "array_gain",
    "array_response",
    "cascaded_channel",
    "closed_form_rates",
    "discrete_alignment_bound",
    "ga_optimize",
    "interference_moment",
    "los_components",
    "mc_condition_number",
    "mc_ergodic_rate",
    "mc_moments",
    "mc_random_phase_moment_rate",
    "mc_random_phase_rate",
    "moment_set",
    "nlos_power_scaling_limit",
    "noise_moment",
    "non_ris_los_rate",
    "non_ris_scaling_rate",
    "path_loss",
    "power_scaled_rate",
    "pure_los_rate",
    "random_phase_rate_limit",
    "random_phases",
    "rayleigh_rate",
    "rayleigh_rate_limits",
    "sample_channels",
    "signal_moment",
]
