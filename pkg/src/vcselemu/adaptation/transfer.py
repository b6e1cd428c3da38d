"""Warm-start fine-tuning, frozen-core fine-tuning and the adaptation chain."""

from __future__ import annotations

import logging
from typing import Mapping

from vcselemu.core.time import TimeSource
from vcselemu.dataset.store import SymbolDataset
from vcselemu.network.model import BLOCK_NAMES, RECURRENT_BLOCKS, BiLstmModel
from vcselemu.network.train import TrainConfig, TrainReport, train

from .regime_set import RegimeModelSet

__all__ = [
    "RESERVOIR_MASK",
    "fine_tune",
    "reservoir_fine_tune",
    "epochs_to_threshold",
    "adapt_chain",
]

logger = logging.getLogger(__name__)

# input mappings, gate biases and readout train; recurrent matrices stay fixed
RESERVOIR_MASK: dict[str, bool] = {k: k not in RECURRENT_BLOCKS for k in BLOCK_NAMES}


def _check_base(base: BiLstmModel, config: TrainConfig) -> None:
    if base.hidden_size != config.hidden_size:
        raise ValueError(
            f"base model hidden size {base.hidden_size} differs from config "
            f"{config.hidden_size}"
        )


def fine_tune(
    base: BiLstmModel,
    dataset: SymbolDataset,
    config: TrainConfig,
    *,
    time_source: TimeSource | None = None,
) -> tuple[BiLstmModel, TrainReport]:
    """Continue training *base* on another regime with a fresh optimizer."""
    _check_base(base, config)
    logger.info(
        "fine-tuning %.2f V model on %.2f V",
        base.regime_voltage,
        dataset.regime_voltage,
    )
    return train(
        dataset, config, init=base, provenance="transfer", time_source=time_source
    )


def reservoir_fine_tune(
    base: BiLstmModel,
    dataset: SymbolDataset,
    config: TrainConfig,
    *,
    time_source: TimeSource | None = None,
) -> tuple[BiLstmModel, TrainReport]:
    """Fine-tune only the boundary blocks; ``w_rec_*`` are left untouched."""
    _check_base(base, config)
    frozen = config.model_copy(update={"trainable_mask": dict(RESERVOIR_MASK)})
    return train(
        dataset, frozen, init=base, provenance="reservoir", time_source=time_source
    )


def epochs_to_threshold(report: TrainReport, target_mse: float) -> int | None:
    """First epoch whose validation MSE is at or below *target_mse*."""
    for epoch, (_, val) in enumerate(report.loss_curve):
        if val <= target_mse:
            return epoch
    return None


def adapt_chain(
    base: BiLstmModel,
    datasets: Mapping[float, SymbolDataset],
    config: TrainConfig,
    *,
    reservoir: bool = False,
    time_source: TimeSource | None = None,
) -> tuple[RegimeModelSet, dict[float, TrainReport]]:
    """Adapt *base* across every regime in *datasets*, one step at a time.

    Regimes are visited in order of distance from the base voltage; each one
    starts from the nearest regime adapted so far. A dataset at the base
    voltage is not retrained.
    """
    rs = RegimeModelSet()
    rs.add(base)
    reports: dict[float, TrainReport] = {}
    step = reservoir_fine_tune if reservoir else fine_tune
    todo = sorted(
        (v for v in datasets if v not in rs.voltages),
        key=lambda v: (abs(v - base.regime_voltage), v),
    )
    for v in todo:
        start = rs.nearest(v)
        model, report = step(start.model, datasets[v], config, time_source=time_source)
        rs.add(model)
        reports[v] = report
    return rs, reports
