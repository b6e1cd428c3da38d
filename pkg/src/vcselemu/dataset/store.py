"""Symbol datasets: construction from waveform captures and persistence."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from vcselemu.core.codec import read_container, write_container
from vcselemu.core.errors import LengthError, ShapeError
from vcselemu.physics.link import DEFAULT_PHASE, WaveformPair

from .symbols import WORD_LENGTH, NormStats, decimate_to_symbol_rate, normalize

__all__ = [
    "DATASET_MAGIC",
    "DATASET_VERSION",
    "SPLITS",
    "Split",
    "SplitMode",
    "SymbolDataset",
    "build_dataset",
    "save_dataset",
    "load_dataset",
    "export_text",
]

logger = logging.getLogger(__name__)

DATASET_MAGIC = b"VEMU"
DATASET_VERSION = (1, 0)

Split = Literal["train", "val", "test"]
SplitMode = Literal["contiguous", "shuffled"]
SPLITS: tuple[Split, ...] = ("train", "val", "test")


@dataclass(frozen=True, slots=True, eq=False)
class SymbolDataset:
    """Normalized one-sample-per-symbol sequences split into words.

    ``inputs``/``targets`` hold the training pool followed by the independent
    test capture; ``split_indices`` address words of ``word_length`` samples.
    """

    inputs: NDArray[np.float64]
    targets: NDArray[np.float64]
    input_stats: NormStats
    target_stats: NormStats
    regime_voltage: float
    split_indices: dict[str, NDArray[np.int64]]
    word_length: int = WORD_LENGTH
    split_mode: SplitMode = "contiguous"
    split_seed: int = 0
    extra: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.inputs.shape != self.targets.shape or self.inputs.ndim != 1:
            raise ShapeError("inputs and targets must be 1-D with equal length")
        if self.inputs.size % self.word_length:
            raise ShapeError(
                f"sequence length {self.inputs.size} is not a multiple of "
                f"word_length={self.word_length}"
            )
        n_words = self.n_words
        seen: set[int] = set()
        for name in SPLITS:
            idx = self.split_indices.get(name)
            if idx is None:
                raise ShapeError(f"missing split {name!r}")
            if idx.size and (idx.min() < 0 or idx.max() >= n_words):
                raise ShapeError(f"split {name!r} indexes past {n_words} words")
            ids = set(idx.tolist())
            if ids & seen:
                raise ShapeError(f"split {name!r} overlaps another split")
            seen |= ids

    @property
    def n_words(self) -> int:
        return self.inputs.size // self.word_length

    def words(self, split: Split) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """``(x, y)`` arrays of shape ``(n_words_in_split, word_length)``."""
        idx = self.split_indices[split]
        xw = self.inputs.reshape(-1, self.word_length)
        yw = self.targets.reshape(-1, self.word_length)
        return xw[idx], yw[idx]

    def split_size(self, split: Split) -> int:
        return int(self.split_indices[split].size)


def _pool(
    pair: WaveformPair, phase: int, n_symbols: int | None, word_length: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, y = decimate_to_symbol_rate(pair, phase)
    n = x.size if n_symbols is None else min(n_symbols, x.size)
    n -= n % word_length
    return x[:n], y[:n]


def build_dataset(
    train_pair: WaveformPair,
    test_pair: WaveformPair,
    *,
    word_length: int = WORD_LENGTH,
    phase: int = DEFAULT_PHASE,
    train_symbols: int | None = None,
    test_symbols: int | None = None,
    val_fraction: float = 0.2,
    split_mode: SplitMode = "contiguous",
    split_seed: int = 0,
) -> SymbolDataset:
    """Decimate both captures, normalize with train-split stats and split.

    The training capture is cut into words and divided into train and
    validation words; every word of the second capture is a test word.

    Raises:
        LengthError: any split would be empty.
    """
    if not 0.0 < val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    if train_pair.regime_voltage != test_pair.regime_voltage:
        raise ValueError("train and test captures come from different regimes")
    px, py = _pool(train_pair, phase, train_symbols, word_length)
    tx, ty = _pool(test_pair, phase, test_symbols, word_length)
    n_pool = px.size // word_length
    n_test = tx.size // word_length
    n_val = int(round(n_pool * val_fraction))
    n_train = n_pool - n_val
    if n_train < 1 or n_val < 1 or n_test < 1:
        raise LengthError(
            f"dataset too small: {n_train} train, {n_val} val, {n_test} test words"
        )

    if split_mode == "contiguous":
        train_idx = np.arange(n_train, dtype=np.int64)
        val_idx = np.arange(n_train, n_pool, dtype=np.int64)
    elif split_mode == "shuffled":
        perm = np.random.default_rng(split_seed).permutation(n_pool)
        train_idx = np.sort(perm[:n_train]).astype(np.int64)
        val_idx = np.sort(perm[n_train:]).astype(np.int64)
    else:
        raise ValueError(f"unknown split_mode {split_mode!r}")
    test_idx = np.arange(n_pool, n_pool + n_test, dtype=np.int64)

    in_stats = NormStats.of(px.reshape(-1, word_length)[train_idx])
    tg_stats = NormStats.of(py.reshape(-1, word_length)[train_idx])
    inputs, _ = normalize(np.concatenate([px, tx]), in_stats)
    targets, _ = normalize(np.concatenate([py, ty]), tg_stats)
    logger.info(
        "dataset %.2f V: %d train / %d val / %d test words",
        train_pair.regime_voltage,
        n_train,
        n_val,
        n_test,
    )
    return SymbolDataset(
        inputs=inputs,
        targets=targets,
        input_stats=in_stats,
        target_stats=tg_stats,
        regime_voltage=float(train_pair.regime_voltage),
        split_indices={"train": train_idx, "val": val_idx, "test": test_idx},
        word_length=word_length,
        split_mode=split_mode,
        split_seed=split_seed,
    )


def save_dataset(ds: SymbolDataset, path: str | os.PathLike[str]) -> int:
    """Write *ds* as a VEMU container; return the file CRC-32."""
    arrays = {
        "inputs": ds.inputs,
        "targets": ds.targets,
        **{f"split_{k}": ds.split_indices[k].astype(np.float64) for k in SPLITS},
    }
    meta = {
        "word_length": ds.word_length,
        "regime_voltage": ds.regime_voltage,
        "input_stats": ds.input_stats.as_list(),
        "target_stats": ds.target_stats.as_list(),
        "split_mode": ds.split_mode,
        "split_seed": ds.split_seed,
        "extra": dict(ds.extra),
    }
    crc = write_container(path, DATASET_MAGIC, DATASET_VERSION, arrays, {"meta": meta})
    logger.info("wrote dataset %s (crc %08x)", path, crc)
    return crc


def load_dataset(path: str | os.PathLike[str]) -> SymbolDataset:
    """Read a dataset written by :func:`save_dataset`.

    Raises:
        FormatError, VersionError, TruncatedFileError, ChecksumError: container
            problems, each with its own ``code``.
        ShapeError: sections missing or inconsistent.
    """
    c = read_container(path, DATASET_MAGIC, DATASET_VERSION[0])
    try:
        meta = c.records["meta"]
        splits = {
            k: c.arrays[f"split_{k}"].astype(np.int64).reshape(-1) for k in SPLITS
        }
        return SymbolDataset(
            inputs=c.arrays["inputs"],
            targets=c.arrays["targets"],
            input_stats=NormStats(*meta["input_stats"]),
            target_stats=NormStats(*meta["target_stats"]),
            regime_voltage=float(meta["regime_voltage"]),
            split_indices=splits,
            word_length=int(meta["word_length"]),
            split_mode=meta["split_mode"],
            split_seed=int(meta["split_seed"]),
            extra=dict(meta.get("extra", {})),
        )
    except KeyError as exc:
        raise ShapeError(f"{path}: dataset section {exc} missing") from exc


def export_text(ds: SymbolDataset, path: str | os.PathLike[str]) -> None:
    """Write one ``input<TAB>target`` pair per line."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(p, np.column_stack([ds.inputs, ds.targets]), fmt="%.17g", delimiter="\t")
