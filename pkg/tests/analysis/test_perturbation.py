from __future__ import annotations

import numpy as np
import pytest

from vcselemu.analysis import (
    SIGMA_FRACTION,
    nmse,
    perturb_block,
    sensitivity_study,
)
from vcselemu.core.errors import LengthError, UnknownBlockError
from vcselemu.network import WEIGHT_BLOCKS, BiLstmModel, forward_batch, init_model


def test_zero_block_unchanged(small_model: BiLstmModel) -> None:
    model = small_model.with_blocks({"w_fc": np.zeros((8, 1))})
    out = perturb_block(model, "w_fc", np.random.default_rng(0))
    np.testing.assert_array_equal(out.blocks["w_fc"], 0.0)


def test_other_blocks_untouched(small_model: BiLstmModel) -> None:
    out = perturb_block(small_model, "w_fc", np.random.default_rng(0))
    for name in small_model.blocks:
        if name != "w_fc":
            np.testing.assert_array_equal(out.blocks[name], small_model.blocks[name])
    assert not np.array_equal(out.blocks["w_fc"], small_model.blocks["w_fc"])


def test_noise_scale() -> None:
    model = init_model(np.random.default_rng(0))
    block = model.blocks["w_rec_bwd"]
    out = perturb_block(model, "w_rec_bwd", np.random.default_rng(1))
    added = out.blocks["w_rec_bwd"] - block
    expected = SIGMA_FRACTION * np.mean(np.abs(block))
    assert added.std() == pytest.approx(expected, rel=0.1)


def test_biases_not_perturbable(small_model: BiLstmModel) -> None:
    with pytest.raises(UnknownBlockError):
        perturb_block(small_model, "b_fc", np.random.default_rng(0))


def test_study_rows_and_baseline(tiny_dataset, small_model) -> None:
    report = sensitivity_study(small_model, tiny_dataset, n_trials=3, seed=5)
    assert [r.block_name for r in report.rows] == list(WEIGHT_BLOCKS)
    x, y = tiny_dataset.words("test")
    assert report.baseline_nmse == nmse(forward_batch(small_model, x), y)
    assert all(r.std_nmse >= 0 and r.n_trials == 3 for r in report.rows)
    records = report.records()
    assert records[0]["block"] == "baseline"
    assert len(records) == 6


def test_zero_sigma_reproduces_baseline(tiny_dataset, small_model) -> None:
    report = sensitivity_study(small_model, tiny_dataset, n_trials=2, sigma_scale=0.0)
    for row in report.rows:
        assert row.mean_nmse == report.baseline_nmse
        assert row.std_nmse == 0.0


def test_threads_do_not_change_study(tiny_dataset, small_model) -> None:
    a = sensitivity_study(small_model, tiny_dataset, n_trials=4, seed=2, threads=1)
    b = sensitivity_study(small_model, tiny_dataset, n_trials=4, seed=2, threads=3)
    assert a.rows == b.rows


def test_seeded(tiny_dataset, small_model) -> None:
    a = sensitivity_study(small_model, tiny_dataset, n_trials=2, seed=7)
    b = sensitivity_study(small_model, tiny_dataset, n_trials=2, seed=7)
    c = sensitivity_study(small_model, tiny_dataset, n_trials=2, seed=8)
    assert a.rows == b.rows
    assert a.rows != c.rows
    assert a.row("w_fc").n_trials == 2
    with pytest.raises(KeyError):
        a.row("b_fc")


def test_needs_two_trials(tiny_dataset, small_model) -> None:
    with pytest.raises(LengthError):
        sensitivity_study(small_model, tiny_dataset, n_trials=1)
