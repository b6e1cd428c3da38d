"""Mini-batch training loop with early stopping, and the emulation helper."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from vcselemu.core.errors import EmptyRequestError, TrainingDivergedError
from vcselemu.core.time import RealTimeSource, TimeSource
from vcselemu.dataset.store import SymbolDataset
from vcselemu.dataset.symbols import WORD_LENGTH, denormalize, normalize

from .lstm import backward_batch, forward_batch
from .model import BLOCK_NAMES, HIDDEN_SIZE, BiLstmModel, Provenance, init_model
from .optim import AdamState, adam_step

__all__ = ["TrainConfig", "TrainReport", "train", "evaluate_mse", "emulate"]

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Optimizer and stopping settings for one training run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    batch_words: int = Field(default=1000, ge=1)
    max_epochs: int = Field(default=1000, ge=0)
    learning_rate: float = Field(default=1e-4, gt=0)
    patience: int = Field(default=50, ge=1)
    min_delta: float = Field(default=0.0, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    hidden_size: int = Field(default=HIDDEN_SIZE, ge=1)
    shard_words: int = Field(default=250, ge=1)
    threads: int = Field(default=1, ge=1)
    # None trains every block
    trainable_mask: dict[str, bool] | None = None

    @field_validator("trainable_mask")
    @classmethod
    def _chk_mask(cls, v: dict[str, bool] | None) -> dict[str, bool] | None:
        if v is None:
            return v
        unknown = sorted(set(v) - set(BLOCK_NAMES))
        if unknown:
            raise ValueError(f"unknown blocks in trainable_mask: {unknown}")
        return {k: bool(v.get(k, False)) for k in BLOCK_NAMES}

    def mask(self) -> dict[str, bool]:
        if self.trainable_mask is None:
            return {k: True for k in BLOCK_NAMES}
        return dict(self.trainable_mask)


@dataclass(slots=True)
class TrainReport:
    """Outcome of :func:`train`.

    ``loss_curve[0]`` evaluates the starting weights; entry ``e`` is
    ``(train_mse, val_mse)`` after epoch ``e``.
    """

    epochs_run: int
    best_val_mse: float
    best_epoch: int
    stopped_early: bool
    wall_time_s: float
    loss_curve: list[tuple[float, float]] = field(default_factory=list)

    @property
    def val_curve(self) -> list[float]:
        return [v for _, v in self.loss_curve]


def evaluate_mse(
    model: BiLstmModel,
    x: NDArray[np.float64],
    y: NDArray[np.float64],
    batch_words: int = 1000,
) -> float:
    """Mean per-word MSE of *model* on word arrays ``(B, T)``."""
    if x.shape[0] == 0:
        raise EmptyRequestError("no words to evaluate")
    total = 0.0
    for lo in range(0, x.shape[0], batch_words):
        pred = forward_batch(model, x[lo : lo + batch_words])
        total += float(np.sum((pred - y[lo : lo + batch_words]) ** 2))
    return total / x.size


def train(
    dataset: SymbolDataset,
    config: TrainConfig,
    init: BiLstmModel | None = None,
    *,
    provenance: Provenance = "scratch",
    time_source: TimeSource | None = None,
) -> tuple[BiLstmModel, TrainReport]:
    """Fit a Bi-LSTM to the train split, selecting on the validation split.

    Each epoch shuffles the train words and takes one Adam step per batch of
    ``batch_words`` words. Training stops after ``max_epochs`` or when the
    validation MSE has not improved by more than ``min_delta`` for
    ``patience`` epochs; the best-validation weights are returned.

    Raises:
        EmptyRequestError: the dataset has no train or no val words.
        TrainingDivergedError: a batch or validation loss became non-finite.
    """
    ts = time_source or RealTimeSource()
    t0 = ts.monotonic()
    xtr, ytr = dataset.words("train")
    xva, yva = dataset.words("val")
    if xtr.shape[0] == 0 or xva.shape[0] == 0:
        raise EmptyRequestError("training needs at least one train and one val word")

    init_seq, shuffle_seq = np.random.SeedSequence(config.seed).spawn(2)
    if init is None:
        model = init_model(np.random.default_rng(init_seq), config.hidden_size)
    else:
        model = init.copy()
    model = replace(
        model,
        input_stats=dataset.input_stats,
        target_stats=dataset.target_stats,
        regime_voltage=dataset.regime_voltage,
        provenance=provenance,
    )
    mask = config.mask()
    shuffle = np.random.default_rng(shuffle_seq)

    val0 = evaluate_mse(model, xva, yva, config.batch_words)
    curve = [(evaluate_mse(model, xtr, ytr, config.batch_words), val0)]
    best, best_val, best_epoch = model, val0, 0
    ref_val, ref_epoch = val0, 0
    stopped_early = False
    epoch = 0

    if not any(mask.values()):
        logger.warning("every block is frozen; returning the initial weights")
    elif not math.isfinite(val0):
        raise TrainingDivergedError(0, 0, val0)
    else:
        state = AdamState.for_model(model)
        n_train = xtr.shape[0]
        for epoch in range(1, config.max_epochs + 1):
            order = shuffle.permutation(n_train)
            loss_acc = 0.0
            for b, lo in enumerate(range(0, n_train, config.batch_words)):
                idx = order[lo : lo + config.batch_words]
                loss, grads = backward_batch(
                    model,
                    xtr[idx],
                    ytr[idx],
                    shard_words=config.shard_words,
                    threads=config.threads,
                )
                if not math.isfinite(loss):
                    raise TrainingDivergedError(epoch, b, loss)
                model = adam_step(model, grads, state, config.learning_rate, mask)
                loss_acc += loss * idx.size
            val = evaluate_mse(model, xva, yva, config.batch_words)
            if not math.isfinite(val):
                raise TrainingDivergedError(epoch, -1, val)
            curve.append((loss_acc / n_train, val))
            logger.debug(
                "epoch %d: train %.6g val %.6g", epoch, loss_acc / n_train, val
            )
            if val < best_val:
                best, best_val, best_epoch = model, val, epoch
            if val < ref_val - config.min_delta:
                ref_val, ref_epoch = val, epoch
            elif epoch - ref_epoch >= config.patience:
                stopped_early = True
                break

    wall = ts.monotonic() - t0
    report = TrainReport(
        epochs_run=epoch,
        best_val_mse=best_val,
        best_epoch=best_epoch,
        stopped_early=stopped_early,
        wall_time_s=wall,
        loss_curve=curve,
    )
    logger.info(
        "trained %s model at %.2f V: %d epochs, best val %.4g at epoch %d (%.1fs)",
        provenance,
        dataset.regime_voltage,
        report.epochs_run,
        best_val,
        best_epoch,
        wall,
    )
    return best, report


def emulate(
    model: BiLstmModel, drive: ArrayLike, word_length: int = WORD_LENGTH
) -> NDArray[np.float64]:
    """Predict the received sequence (physical units) for a symbol-rate drive.

    The drive is normalized with the model's statistics and cut into words;
    a partial last word is padded with the normalized mean (zero).
    """
    x = np.asarray(drive, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise EmptyRequestError("drive must be a non-empty 1-D sequence")
    xn, _ = normalize(x, model.input_stats)
    pad = (-x.size) % word_length
    words = np.concatenate([xn, np.zeros(pad)]).reshape(-1, word_length)
    pred = forward_batch(model, words).reshape(-1)[: x.size]
    return denormalize(pred, model.target_stats)
