"""Rate-equation laser model and receiver chain used as the reference oracle."""

from .link import (
    DEFAULT_DAC_BITS,
    DEFAULT_PHASE,
    DEFAULT_SPS,
    WaveformPair,
    drive_voltage,
    make_lms_channel,
    simulate_link,
)
from .noise import noise_stream
from .params import (
    ReceiverParams,
    VcselParams,
    bias_to_current,
    threshold_current,
)
from .rate_equations import (
    integrate_rate_equations,
    integrate_state,
    rate_derivatives,
    relaxation_frequency_hz,
    steady_state,
)
from .receiver import apply_rin, detect

__all__ = [
    "DEFAULT_DAC_BITS",
    "DEFAULT_PHASE",
    "DEFAULT_SPS",
    "ReceiverParams",
    "VcselParams",
    "WaveformPair",
    "apply_rin",
    "bias_to_current",
    "detect",
    "drive_voltage",
    "integrate_rate_equations",
    "integrate_state",
    "make_lms_channel",
    "noise_stream",
    "rate_derivatives",
    "relaxation_frequency_hz",
    "simulate_link",
    "steady_state",
    "threshold_current",
]
