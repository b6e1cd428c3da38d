"""Transmit-side signal generation: PRBS, PAM-4 mapping, DAC and FFE."""

from .dac import quantize_dac
from .ffe import (
    FfeTaps,
    apply_ffe,
    estimate_channel_response,
    lms_optimize_ffe,
    symbol_mse,
)
from .pam4 import (
    PAM4_ALPHABET,
    SymbolSequence,
    bits_to_symbol_indices,
    demap_pam4,
    map_pam4,
    pam4_levels,
    slice_pam4,
    upsample_hold,
)
from .prbs import BitSequence, Mt19937, generate_prbs

__all__ = [
    "BitSequence",
    "FfeTaps",
    "Mt19937",
    "PAM4_ALPHABET",
    "SymbolSequence",
    "apply_ffe",
    "bits_to_symbol_indices",
    "demap_pam4",
    "estimate_channel_response",
    "generate_prbs",
    "lms_optimize_ffe",
    "map_pam4",
    "pam4_levels",
    "quantize_dac",
    "slice_pam4",
    "symbol_mse",
    "upsample_hold",
]
