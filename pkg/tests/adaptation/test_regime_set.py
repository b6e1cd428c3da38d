from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from vcselemu.adaptation import (
    MANIFEST_NAME,
    RegimeModelSet,
    load_regime_set,
    model_filename,
    save_regime_set,
)
from vcselemu.core.errors import ChecksumError, DataError, ShapeError
from vcselemu.network import BLOCK_NAMES, BiLstmModel, init_model


def _model(v: float, seed: int = 0, hidden: int = 3) -> BiLstmModel:
    return init_model(np.random.default_rng(seed), hidden, regime_voltage=v)


def _set(*voltages: float) -> RegimeModelSet:
    rs = RegimeModelSet()
    for k, v in enumerate(voltages):
        rs.add(_model(v, k))
    return rs


def test_entries_kept_sorted() -> None:
    rs = _set(1.8, 1.0, 1.4)
    assert rs.voltages == [1.0, 1.4, 1.8]
    assert len(rs) == 3


def test_duplicate_voltage_rejected() -> None:
    rs = _set(1.4)
    with pytest.raises(ValueError):
        rs.add(_model(1.4, 9))


def test_layout_mismatch_rejected() -> None:
    rs = _set(1.4)
    with pytest.raises(ShapeError):
        rs.add(_model(1.6, hidden=4))


def test_lookup() -> None:
    rs = _set(1.0, 1.4, 1.8)
    assert rs.get(1.4).voltage == 1.4
    with pytest.raises(KeyError):
        rs.get(1.5)
    assert rs.nearest(1.55).voltage == 1.4
    lo, hi = rs.bracket(1.5)
    assert (lo.voltage, hi.voltage) == (1.4, 1.8)
    with pytest.raises(KeyError):
        rs.bracket(1.9)
    with pytest.raises(KeyError):
        rs.bracket(1.4 - 0.5)


def test_nearest_tie_goes_low() -> None:
    rs = _set(1.0, 1.5, 2.0)
    assert rs.nearest(1.25).voltage == 1.0


def test_provenance_override() -> None:
    rs = RegimeModelSet()
    rs.add(_model(1.4), "transfer")
    assert rs.get(1.4).provenance == "transfer"
    rs.add(replace(_model(1.6), provenance="reservoir"))
    assert rs.get(1.6).provenance == "reservoir"


def test_save_load(tmp_path: Path) -> None:
    rs = _set(1.0, 1.4)
    manifest = save_regime_set(rs, tmp_path / "chain")
    assert manifest.name == MANIFEST_NAME
    assert (tmp_path / "chain" / model_filename(1.4)).is_file()
    back = load_regime_set(tmp_path / "chain")
    assert back.voltages == [1.0, 1.4]
    for name in BLOCK_NAMES:
        np.testing.assert_array_equal(
            back.get(1.4).model.blocks[name], rs.get(1.4).model.blocks[name]
        )


def test_crc_mismatch_detected(tmp_path: Path) -> None:
    d = tmp_path / "chain"
    save_regime_set(_set(1.0, 1.4), d)
    other = tmp_path / "other"
    save_regime_set(_set(1.4, 1.8), other)
    # swap in a valid checkpoint that the manifest does not describe
    (d / model_filename(1.4)).write_bytes((other / model_filename(1.4)).read_bytes())
    with pytest.raises(ChecksumError):
        load_regime_set(d)


def test_missing_manifest(tmp_path: Path) -> None:
    with pytest.raises(DataError):
        load_regime_set(tmp_path)


def test_malformed_manifest(tmp_path: Path) -> None:
    (tmp_path / MANIFEST_NAME).write_text("1.4\tscratch\n", encoding="utf-8")
    with pytest.raises(DataError, match=":1:"):
        load_regime_set(tmp_path)


def test_manifest_checksums_are_per_file(tmp_path: Path) -> None:
    d = tmp_path / "chain"
    save_regime_set(_set(1.0, 1.2, 1.4), d)
    lines = (d / MANIFEST_NAME).read_text(encoding="utf-8").splitlines()
    crcs = [line.split("\t")[3] for line in lines]
    assert len(set(crcs)) == 3
