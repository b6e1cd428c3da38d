"""Bi-LSTM weight container and block layout.

Gate pre-activations are 4*H wide and ordered (i, f, g, o). Every model
carries the normalization statistics of the dataset it was trained on so it
can map physical drive samples to physical received samples on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Mapping

import numpy as np
from numpy.typing import NDArray

from vcselemu.core.errors import ShapeError, UnknownBlockError
from vcselemu.dataset.symbols import NormStats

__all__ = [
    "HIDDEN_SIZE",
    "GATE_ORDER",
    "BLOCK_NAMES",
    "WEIGHT_BLOCKS",
    "RECURRENT_BLOCKS",
    "Provenance",
    "Blocks",
    "BiLstmModel",
    "block_shapes",
    "init_model",
    "check_block_names",
]

HIDDEN_SIZE = 28
GATE_ORDER: tuple[str, ...] = ("i", "f", "g", "o")
BLOCK_NAMES: tuple[str, ...] = (
    "w_in_fwd",
    "w_rec_fwd",
    "b_fwd",
    "w_in_bwd",
    "w_rec_bwd",
    "b_bwd",
    "w_fc",
    "b_fc",
)
WEIGHT_BLOCKS: tuple[str, ...] = (
    "w_in_fwd",
    "w_rec_fwd",
    "w_in_bwd",
    "w_rec_bwd",
    "w_fc",
)
RECURRENT_BLOCKS: tuple[str, ...] = ("w_rec_fwd", "w_rec_bwd")

Provenance = Literal["scratch", "transfer", "reservoir", "interpolated"]
Blocks = dict[str, NDArray[np.float64]]

_IDENTITY = NormStats(mean=0.0, std=1.0)


def block_shapes(hidden_size: int = HIDDEN_SIZE) -> dict[str, tuple[int, ...]]:
    g = len(GATE_ORDER) * hidden_size
    return {
        "w_in_fwd": (1, g),
        "w_rec_fwd": (hidden_size, g),
        "b_fwd": (g,),
        "w_in_bwd": (1, g),
        "w_rec_bwd": (hidden_size, g),
        "b_bwd": (g,),
        "w_fc": (2 * hidden_size, 1),
        "b_fc": (1,),
    }


def check_block_names(names: Iterable[str]) -> None:
    """Raise UnknownBlockError for any name outside the declared block set."""
    for name in names:
        if name not in BLOCK_NAMES:
            raise UnknownBlockError(
                f"unknown weight block {name!r}; "
                f"expected one of {', '.join(BLOCK_NAMES)}"
            )


@dataclass(frozen=True, slots=True, eq=False)
class BiLstmModel:
    blocks: Blocks
    hidden_size: int = HIDDEN_SIZE
    input_stats: NormStats = _IDENTITY
    target_stats: NormStats = _IDENTITY
    regime_voltage: float = 0.0
    provenance: Provenance = "scratch"
    gate_order: tuple[str, ...] = field(default=GATE_ORDER)

    def __post_init__(self) -> None:
        if tuple(self.gate_order) != GATE_ORDER:
            raise ShapeError(
                f"gate order {tuple(self.gate_order)} differs from {GATE_ORDER}"
            )
        expected = block_shapes(self.hidden_size)
        if set(self.blocks) != set(expected):
            missing = sorted(set(expected) - set(self.blocks))
            extra = sorted(set(self.blocks) - set(expected))
            raise ShapeError(f"block set mismatch: missing {missing}, extra {extra}")
        for name, shape in expected.items():
            blk = self.blocks[name]
            if blk.shape != shape:
                raise ShapeError(
                    f"block {name!r} has shape {blk.shape}, expected {shape}"
                )
            if not np.isfinite(blk).all():
                raise ShapeError(f"block {name!r} holds non-finite values")

    def copy(self) -> "BiLstmModel":
        return replace(self, blocks={k: v.copy() for k, v in self.blocks.items()})

    def with_blocks(self, blocks: Mapping[str, NDArray[np.float64]]) -> "BiLstmModel":
        """New model with some blocks replaced; the rest are shared."""
        check_block_names(blocks)
        return replace(self, blocks={**self.blocks, **blocks})

    def parameter_count(self, mask: Mapping[str, bool] | None = None) -> int:
        """Number of (trainable, when *mask* is given) parameters."""
        return sum(
            int(v.size)
            for k, v in self.blocks.items()
            if mask is None or mask.get(k, False)
        )

    def same_layout(self, other: "BiLstmModel") -> bool:
        return self.hidden_size == other.hidden_size and tuple(
            self.gate_order
        ) == tuple(other.gate_order)


def init_model(
    rng: np.random.Generator,
    hidden_size: int = HIDDEN_SIZE,
    *,
    input_stats: NormStats = _IDENTITY,
    target_stats: NormStats = _IDENTITY,
    regime_voltage: float = 0.0,
) -> BiLstmModel:
    """Fresh model with every block uniform in ``[-k, k]``, ``k = 1/sqrt(fan_in)``.

    Fan-in is 1 for the input rows, H for the recurrent matrices and gate
    biases, and 2H for the readout. Blocks are drawn in ``BLOCK_NAMES`` order.
    """
    fan_in = {
        "w_in_fwd": 1,
        "w_rec_fwd": hidden_size,
        "b_fwd": hidden_size,
        "w_in_bwd": 1,
        "w_rec_bwd": hidden_size,
        "b_bwd": hidden_size,
        "w_fc": 2 * hidden_size,
        "b_fc": 2 * hidden_size,
    }
    shapes = block_shapes(hidden_size)
    blocks: Blocks = {}
    for name in BLOCK_NAMES:
        k = 1.0 / np.sqrt(fan_in[name])
        blocks[name] = rng.uniform(-k, k, size=shapes[name])
    return BiLstmModel(
        blocks=blocks,
        hidden_size=hidden_size,
        input_stats=input_stats,
        target_stats=target_stats,
        regime_voltage=regime_voltage,
    )
