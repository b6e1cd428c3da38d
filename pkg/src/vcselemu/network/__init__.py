"""Bidirectional LSTM emulator: model, gradients, optimizer and training."""

from .checkpoint import MODEL_MAGIC, MODEL_VERSION, load_model, save_model
from .lstm import (
    backward,
    backward_batch,
    forward,
    forward_batch,
    lstm_cell_step,
    mse_loss,
)
from .model import (
    BLOCK_NAMES,
    GATE_ORDER,
    HIDDEN_SIZE,
    RECURRENT_BLOCKS,
    WEIGHT_BLOCKS,
    BiLstmModel,
    Blocks,
    Provenance,
    block_shapes,
    check_block_names,
    init_model,
)
from .optim import AdamState, adam_step, full_mask
from .train import TrainConfig, TrainReport, emulate, evaluate_mse, train

__all__ = [
    "AdamState",
    "BLOCK_NAMES",
    "BiLstmModel",
    "Blocks",
    "GATE_ORDER",
    "HIDDEN_SIZE",
    "MODEL_MAGIC",
    "MODEL_VERSION",
    "Provenance",
    "RECURRENT_BLOCKS",
    "TrainConfig",
    "TrainReport",
    "WEIGHT_BLOCKS",
    "adam_step",
    "backward",
    "backward_batch",
    "block_shapes",
    "check_block_names",
    "emulate",
    "evaluate_mse",
    "forward",
    "forward_batch",
    "full_mask",
    "init_model",
    "load_model",
    "lstm_cell_step",
    "mse_loss",
    "save_model",
    "train",
]
