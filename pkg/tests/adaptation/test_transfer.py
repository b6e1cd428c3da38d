from __future__ import annotations

import numpy as np
import pytest

from vcselemu.adaptation import (
    RESERVOIR_MASK,
    adapt_chain,
    epochs_to_threshold,
    fine_tune,
    reservoir_fine_tune,
)
from vcselemu.network import TrainConfig, TrainReport, init_model, train


def _cfg(**kw) -> TrainConfig:
    base = dict(batch_words=4, max_epochs=4, learning_rate=1e-2, hidden_size=4)
    base.update(kw)
    return TrainConfig(**base)


@pytest.fixture
def base_model(make_dataset):
    model, _ = train(make_dataset(regime_voltage=1.4), _cfg(max_epochs=3))
    return model


def test_fine_tune_warm_starts(make_dataset, base_model) -> None:
    target = make_dataset(seed=1, regime_voltage=1.6, nonlinear=0.5)
    model, report = fine_tune(base_model, target, _cfg())
    assert model.provenance == "transfer"
    assert model.regime_voltage == 1.6
    cold = init_model(np.random.default_rng(0), 4)
    assert not np.array_equal(model.blocks["w_fc"], cold.blocks["w_fc"])
    assert report.loss_curve[0][1] < 10.0


def test_reservoir_keeps_recurrent_blocks(make_dataset, base_model) -> None:
    target = make_dataset(seed=1, regime_voltage=1.6)
    model, _ = reservoir_fine_tune(base_model, target, _cfg())
    assert model.provenance == "reservoir"
    for name in ("w_rec_fwd", "w_rec_bwd"):
        np.testing.assert_array_equal(model.blocks[name], base_model.blocks[name])
    assert not np.array_equal(model.blocks["w_in_fwd"], base_model.blocks["w_in_fwd"])
    assert not RESERVOIR_MASK["w_rec_fwd"] and RESERVOIR_MASK["b_bwd"]


def test_hidden_size_mismatch(make_dataset, base_model) -> None:
    with pytest.raises(ValueError):
        fine_tune(base_model, make_dataset(), _cfg(hidden_size=5))


def test_epochs_to_threshold() -> None:
    report = TrainReport(
        epochs_run=3,
        best_val_mse=0.1,
        best_epoch=3,
        stopped_early=False,
        wall_time_s=0.0,
        loss_curve=[(1.0, 0.9), (0.5, 0.4), (0.3, 0.2), (0.2, 0.1)],
    )
    assert epochs_to_threshold(report, 0.4) == 1
    assert epochs_to_threshold(report, 0.95) == 0
    assert epochs_to_threshold(report, 0.05) is None


def test_chain_walks_outward(make_dataset, base_model) -> None:
    datasets = {
        v: make_dataset(seed=k, regime_voltage=v)
        for k, v in enumerate((1.0, 1.2, 1.4, 1.6))
    }
    rs, reports = adapt_chain(base_model, datasets, _cfg(max_epochs=1))
    assert rs.voltages == [1.0, 1.2, 1.4, 1.6]
    assert set(reports) == {1.0, 1.2, 1.6}
    assert rs.get(1.4).model is base_model
    assert rs.get(1.0).provenance == "transfer"


def test_reservoir_chain(make_dataset, base_model) -> None:
    datasets = {1.6: make_dataset(regime_voltage=1.6)}
    rs, _ = adapt_chain(base_model, datasets, _cfg(max_epochs=1), reservoir=True)
    np.testing.assert_array_equal(
        rs.get(1.6).model.blocks["w_rec_fwd"], base_model.blocks["w_rec_fwd"]
    )
    assert rs.get(1.6).provenance == "reservoir"


def test_fine_tune_on_own_regime_stops_early(make_dataset) -> None:
    ds = make_dataset(regime_voltage=1.4)
    base, base_report = train(ds, _cfg(max_epochs=40, patience=5))
    model, report = fine_tune(
        base, ds, _cfg(max_epochs=40, patience=3, min_delta=0.1)
    )
    assert report.loss_curve[0][1] == pytest.approx(base_report.best_val_mse)
    assert report.stopped_early
    assert report.epochs_run <= 3 + 3
    assert report.best_val_mse <= base_report.best_val_mse


def test_fully_frozen_fine_tune_returns_base(make_dataset, base_model) -> None:
    target = make_dataset(seed=1, regime_voltage=1.6)
    frozen = {k: False for k in base_model.blocks}
    model, report = fine_tune(base_model, target, _cfg(trainable_mask=frozen))
    assert report.epochs_run == 0
    for name, block in base_model.blocks.items():
        np.testing.assert_array_equal(model.blocks[name], block)
    assert model.regime_voltage == 1.6
