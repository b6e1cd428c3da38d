"""Regime adaptation: transfer, frozen-core fine-tuning and interpolation."""

from .interpolate import (
    LinearityReport,
    interpolate_weights,
    weight_trajectory_linearity,
)
from .regime_set import (
    MANIFEST_NAME,
    RegimeEntry,
    RegimeModelSet,
    load_regime_set,
    model_filename,
    save_regime_set,
)
from .transfer import (
    RESERVOIR_MASK,
    adapt_chain,
    epochs_to_threshold,
    fine_tune,
    reservoir_fine_tune,
)

__all__ = [
    "LinearityReport",
    "MANIFEST_NAME",
    "RESERVOIR_MASK",
    "RegimeEntry",
    "RegimeModelSet",
    "adapt_chain",
    "epochs_to_threshold",
    "fine_tune",
    "interpolate_weights",
    "load_regime_set",
    "model_filename",
    "reservoir_fine_tune",
    "save_regime_set",
    "weight_trajectory_linearity",
]
