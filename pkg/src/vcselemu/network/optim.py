"""Adam with per-block trainable masks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .model import BLOCK_NAMES, BiLstmModel, Blocks, check_block_names

__all__ = [
    "ADAM_BETA1",
    "ADAM_BETA2",
    "ADAM_EPS",
    "AdamState",
    "adam_step",
    "full_mask",
]

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def full_mask(value: bool = True) -> dict[str, bool]:
    return {k: value for k in BLOCK_NAMES}


@dataclass(slots=True)
class AdamState:
    """First/second moment buffers and the global step counter."""

    step: int = 0
    m: Blocks = field(default_factory=dict)
    v: Blocks = field(default_factory=dict)

    @classmethod
    def for_model(cls, model: BiLstmModel) -> "AdamState":
        return cls(
            m={k: np.zeros_like(b) for k, b in model.blocks.items()},
            v={k: np.zeros_like(b) for k, b in model.blocks.items()},
        )


def adam_step(
    model: BiLstmModel,
    grads: Mapping[str, np.ndarray],
    state: AdamState,
    lr: float,
    mask: Mapping[str, bool] | None = None,
) -> BiLstmModel:
    """Apply one bias-corrected Adam update and return the new model.

    Masked-out blocks keep their values and their moment buffers. ``state``
    is updated in place.
    """
    if lr < 0:
        raise ValueError(f"learning rate must be >= 0, got {lr}")
    if mask is not None:
        check_block_names(mask)
    if not state.m:
        fresh = AdamState.for_model(model)
        state.m, state.v = fresh.m, fresh.v
    state.step += 1
    t = state.step
    corr1 = 1.0 - ADAM_BETA1**t
    corr2 = 1.0 - ADAM_BETA2**t
    updated: Blocks = {}
    for name in BLOCK_NAMES:
        if mask is not None and not mask.get(name, False):
            continue
        g = np.asarray(grads[name], dtype=np.float64)
        m = state.m[name] = ADAM_BETA1 * state.m[name] + (1.0 - ADAM_BETA1) * g
        v = state.v[name] = ADAM_BETA2 * state.v[name] + (1.0 - ADAM_BETA2) * (g * g)
        if lr == 0.0:
            continue
        step = lr * (m / corr1) / (np.sqrt(v / corr2) + ADAM_EPS)
        updated[name] = model.blocks[name] - step
    if not updated:
        return model
    return model.with_blocks(updated)
