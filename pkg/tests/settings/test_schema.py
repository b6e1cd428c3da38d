from __future__ import annotations

import pytest
from pydantic import ValidationError

from vcselemu.settings import (
    AnalysisConfig,
    DatasetConfig,
    PhysicsConfig,
    RunConfig,
    SignalConfig,
)


def test_defaults() -> None:
    cfg = RunConfig()
    assert cfg.signal.symbol_rate_hz == 53.125e9
    assert cfg.signal.sps == 19
    assert cfg.physics.bias_voltages_v == [1.0, 1.2, 1.4, 1.6, 1.8, 2.0]
    assert cfg.dataset.word_length == 80
    assert cfg.train.hidden_size == 28
    assert cfg.analysis.trials == 20


def test_unknown_key_rejected() -> None:
    with pytest.raises(ValidationError):
        SignalConfig.model_validate({"symbol_rate": 53e9})


def test_taps_need_four_entries() -> None:
    assert SignalConfig(ffe_taps=[0.0, 1.0, 0.0, 0.0]).ffe_taps == [0.0, 1.0, 0.0, 0.0]
    with pytest.raises(ValidationError):
        SignalConfig(ffe_taps=[0.0, 1.0])


@pytest.mark.parametrize(
    "grid", [[], [1.4, 1.2], [1.2, 1.2], [0.0, 1.0]]
)
def test_bias_grid_checked(grid: list[float]) -> None:
    with pytest.raises(ValidationError):
        PhysicsConfig(bias_voltages_v=grid)


def test_modulation_trough_must_lase() -> None:
    with pytest.raises(ValidationError, match="threshold"):
        PhysicsConfig(bias_voltages_v=[1.0], modulation_vpp_v=0.4)


def test_split_mode_literal() -> None:
    assert DatasetConfig(split_mode="shuffled").split_mode == "shuffled"
    with pytest.raises(ValidationError):
        DatasetConfig(split_mode="random")


@pytest.mark.parametrize("fraction", [0.0, 1.0])
def test_val_fraction_open_interval(fraction: float) -> None:
    with pytest.raises(ValidationError):
        DatasetConfig(val_fraction=fraction)


def test_trials_at_least_two() -> None:
    with pytest.raises(ValidationError):
        AnalysisConfig(trials=1)


def test_phase_must_fit_symbol() -> None:
    with pytest.raises(ValidationError, match="phase"):
        RunConfig.model_validate({"dataset": {"phase": 19}})


def test_seed_is_32_bit() -> None:
    with pytest.raises(ValidationError):
        RunConfig(seed=2**32)


def test_frozen() -> None:
    cfg = RunConfig()
    with pytest.raises(ValidationError):
        cfg.seed = 3  # type: ignore[misc]
