from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from vcselemu.dataset import NormStats, SymbolDataset
from vcselemu.network import BiLstmModel, init_model
from vcselemu.signal import PAM4_ALPHABET

DatasetFactory = Callable[..., SymbolDataset]


def synthetic_pair(
    n: int, seed: int = 0, *, nonlinear: float = 0.3
) -> tuple[np.ndarray, np.ndarray]:
    """PAM-4 drive and a smeared, compressed response of it."""
    rng = np.random.default_rng(seed)
    x = rng.choice(PAM4_ALPHABET, size=n)
    lin = np.convolve(x, [0.2, 0.6, 0.2], mode="same")
    y = lin - nonlinear * lin**3 + 0.01 * rng.standard_normal(n)
    return x, y


def dataset_from(
    x: np.ndarray,
    y: np.ndarray,
    *,
    word_length: int,
    n_train: int,
    n_val: int,
    regime_voltage: float = 1.4,
) -> SymbolDataset:
    n_words = x.size // word_length
    n = n_words * word_length
    x, y = x[:n], y[:n]
    in_stats = NormStats.of(x[: n_train * word_length])
    tg_stats = NormStats.of(y[: n_train * word_length])
    return SymbolDataset(
        inputs=(x - in_stats.mean) / in_stats.std,
        targets=(y - tg_stats.mean) / tg_stats.std,
        input_stats=in_stats,
        target_stats=tg_stats,
        regime_voltage=regime_voltage,
        split_indices={
            "train": np.arange(n_train),
            "val": np.arange(n_train, n_train + n_val),
            "test": np.arange(n_train + n_val, n_words),
        },
        word_length=word_length,
    )


@pytest.fixture
def make_dataset() -> DatasetFactory:
    """Build a small synthetic dataset: 24 words of 16 symbols by default."""

    def _make(
        *,
        n_words: int = 24,
        word_length: int = 16,
        n_train: int = 14,
        n_val: int = 5,
        seed: int = 0,
        regime_voltage: float = 1.4,
        nonlinear: float = 0.3,
    ) -> SymbolDataset:
        x, y = synthetic_pair(n_words * word_length, seed, nonlinear=nonlinear)
        return dataset_from(
            x,
            y,
            word_length=word_length,
            n_train=n_train,
            n_val=n_val,
            regime_voltage=regime_voltage,
        )

    return _make


@pytest.fixture
def tiny_dataset(make_dataset: DatasetFactory) -> SymbolDataset:
    return make_dataset()


@pytest.fixture
def small_model() -> BiLstmModel:
    return init_model(np.random.default_rng(7), hidden_size=4, regime_voltage=1.4)


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    d = tmp_path / "run"
    d.mkdir()
    return d


@pytest.fixture
def identity_dataset() -> Callable[..., SymbolDataset]:
    """Dataset from raw word arrays with unit normalization stats."""

    def _make(
        x: np.ndarray, y: np.ndarray, *, n_train: int, n_val: int = 1
    ) -> SymbolDataset:
        n_words, word_length = x.shape
        return SymbolDataset(
            inputs=x.reshape(-1).astype(np.float64),
            targets=y.reshape(-1).astype(np.float64),
            input_stats=NormStats(0.0, 1.0),
            target_stats=NormStats(0.0, 1.0),
            regime_voltage=1.4,
            split_indices={
                "train": np.arange(n_train),
                "val": np.arange(n_train, n_train + n_val),
                "test": np.arange(n_train + n_val, n_words),
            },
            word_length=word_length,
        )

    return _make
