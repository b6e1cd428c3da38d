from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from vcselemu.core.errors import (
    ChecksumError,
    FormatError,
    LengthError,
    ShapeError,
)
from vcselemu.dataset import (
    NormStats,
    SymbolDataset,
    build_dataset,
    export_text,
    load_dataset,
    save_dataset,
)
from vcselemu.physics import WaveformPair

RATE = 53.125e9
SPS = 4


def _capture(n_symbols: int, seed: int, voltage: float = 1.4) -> WaveformPair:
    rng = np.random.default_rng(seed)
    levels = rng.choice([-1.0, -1 / 3, 1 / 3, 1.0], size=n_symbols)
    drive = 1.4 + 0.12 * np.repeat(levels, SPS)
    received = 1e-3 * (1 + 0.5 * drive) + 1e-5 * rng.standard_normal(drive.size)
    return WaveformPair(drive, received, 1 / (RATE * SPS), SPS, voltage, RATE)


def _build(**kw) -> SymbolDataset:
    opts = dict(word_length=10, phase=1)
    opts.update(kw)
    return build_dataset(_capture(205, 0), _capture(64, 1), **opts)


def test_contiguous_split_sizes() -> None:
    ds = _build()
    # 200 pool symbols -> 20 words, 4 val; 60 test symbols -> 6 words
    assert ds.n_words == 26
    assert ds.split_size("train") == 16
    assert ds.split_size("val") == 4
    assert ds.split_size("test") == 6
    np.testing.assert_array_equal(ds.split_indices["val"], np.arange(16, 20))
    x, y = ds.words("test")
    assert x.shape == y.shape == (6, 10)


def test_normalized_with_train_statistics() -> None:
    ds = _build()
    x, y = ds.words("train")
    assert abs(x.mean()) < 1e-12
    assert y.std() == pytest.approx(1.0)


def test_shuffled_split_is_seeded_and_disjoint() -> None:
    a = _build(split_mode="shuffled", split_seed=3)
    b = _build(split_mode="shuffled", split_seed=3)
    np.testing.assert_array_equal(a.split_indices["val"], b.split_indices["val"])
    pool = np.concatenate([a.split_indices["train"], a.split_indices["val"]])
    np.testing.assert_array_equal(np.sort(pool), np.arange(20))


def test_empty_split_rejected() -> None:
    with pytest.raises(LengthError):
        build_dataset(_capture(12, 0), _capture(12, 1), word_length=10, phase=1)


def test_regime_mismatch_rejected() -> None:
    with pytest.raises(ValueError):
        build_dataset(
            _capture(100, 0), _capture(100, 1, voltage=1.6), word_length=10, phase=1
        )


def test_overlapping_splits_rejected() -> None:
    with pytest.raises(ShapeError):
        SymbolDataset(
            inputs=np.arange(20.0),
            targets=np.arange(20.0),
            input_stats=NormStats(0, 1),
            target_stats=NormStats(0, 1),
            regime_voltage=1.4,
            split_indices={
                "train": np.array([0, 1]),
                "val": np.array([1]),
                "test": np.array([], dtype=np.int64),
            },
            word_length=10,
        )


def test_save_load_preserves_dataset(tmp_path: Path) -> None:
    ds = _build(split_mode="shuffled", split_seed=9)
    ds = SymbolDataset(**{**_fields(ds), "extra": {"seed": 4, "ffe_taps": [0.0, 1.0]}})
    path = tmp_path / "d.vemu"
    save_dataset(ds, path)
    back = load_dataset(path)
    np.testing.assert_array_equal(back.inputs, ds.inputs)
    np.testing.assert_array_equal(back.targets, ds.targets)
    for k in ("train", "val", "test"):
        np.testing.assert_array_equal(back.split_indices[k], ds.split_indices[k])
    assert back.input_stats == ds.input_stats
    assert back.split_mode == "shuffled"
    assert back.extra == {"seed": 4, "ffe_taps": [0.0, 1.0]}


def test_saving_twice_is_bitwise_identical(tmp_path: Path) -> None:
    ds = _build()
    save_dataset(ds, tmp_path / "a.vemu")
    save_dataset(ds, tmp_path / "b.vemu")
    assert (tmp_path / "a.vemu").read_bytes() == (tmp_path / "b.vemu").read_bytes()


def test_corruption_detected(tmp_path: Path) -> None:
    path = tmp_path / "d.vemu"
    save_dataset(_build(), path)
    raw = bytearray(path.read_bytes())
    raw[len(raw) // 2] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(ChecksumError):
        load_dataset(path)


def test_checkpoint_magic_rejected(tmp_path: Path) -> None:
    path = tmp_path / "d.vemu"
    save_dataset(_build(), path)
    raw = path.read_bytes()
    path.write_bytes(b"VEMW" + raw[4:])
    with pytest.raises(FormatError):
        load_dataset(path)


def test_export_text(tmp_path: Path) -> None:
    ds = _build()
    out = tmp_path / "txt" / "d.tsv"
    export_text(ds, out)
    table = np.loadtxt(out, delimiter="\t")
    np.testing.assert_array_equal(table[:, 0], ds.inputs)


def _fields(ds: SymbolDataset) -> dict:
    return {
        name: getattr(ds, name)
        for name in (
            "inputs",
            "targets",
            "input_stats",
            "target_stats",
            "regime_voltage",
            "split_indices",
            "word_length",
            "split_mode",
            "split_seed",
        )
    }
