"""Run configuration schema.

Every section rejects unknown keys, and every physical quantity carries its
unit in the key name. Defaults mirror ``config/default.yml``.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from vcselemu.network.train import TrainConfig
from vcselemu.physics.params import (
    LASING_CHECK_VOLTAGE_V,
    ReceiverParams,
    VcselParams,
    bias_to_current,
    threshold_current,
)

__all__ = [
    "SignalConfig",
    "PhysicsConfig",
    "DatasetConfig",
    "AdaptConfig",
    "AnalysisConfig",
    "RunConfig",
]

_STRICT = ConfigDict(extra="forbid", frozen=True)


class SignalConfig(BaseModel):
    model_config = _STRICT

    symbol_rate_hz: float = Field(default=53.125e9, gt=0)
    gray: bool = True
    dac_bits: int = Field(default=6, ge=1, le=16)
    sps: int = Field(default=19, ge=1)
    # fixed taps skip LMS adaptation when given
    ffe_taps: list[float] | None = None
    ffe_reference_voltage_v: float = Field(default=1.4, gt=0)
    lms_step: float = Field(default=1e-2, ge=0)
    lms_iterations: int = Field(default=8000, ge=0)
    lms_symbols: int = Field(default=4096, ge=16)

    @field_validator("ffe_taps")
    @classmethod
    def _chk_taps(cls, v: list[float] | None) -> list[float] | None:
        if v is not None and len(v) != 4:
            raise ValueError("ffe_taps must have exactly 4 entries")
        return v


class PhysicsConfig(BaseModel):
    model_config = _STRICT

    vcsel: VcselParams = Field(default_factory=VcselParams)
    receiver: ReceiverParams = Field(default_factory=ReceiverParams)
    bias_voltages_v: list[float] = Field(
        default_factory=lambda: [1.0, 1.2, 1.4, 1.6, 1.8, 2.0]
    )
    modulation_vpp_v: float = Field(default=0.24, gt=0)
    noise_enabled: bool = True

    @field_validator("bias_voltages_v")
    @classmethod
    def _chk_grid(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("bias_voltages_v must not be empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("bias_voltages_v must be strictly increasing")
        if any(x <= 0 for x in v):
            raise ValueError("bias_voltages_v must be > 0")
        return v

    @model_validator(mode="after")
    def _chk_lasing(self) -> "PhysicsConfig":
        i_th = threshold_current(self.vcsel)
        for v in self.bias_voltages_v:
            if v < LASING_CHECK_VOLTAGE_V:
                continue
            # the trough of the modulation must stay above threshold too
            low = max(0.0, v - self.modulation_vpp_v / 2)
            if bias_to_current(low, self.vcsel) <= i_th:
                raise ValueError(
                    f"regime {v:.2f} V drops below threshold at the modulation trough"
                )
        return self


class DatasetConfig(BaseModel):
    model_config = _STRICT

    train_symbols: int = Field(default=100_000, ge=1)
    test_symbols: int = Field(default=20_000, ge=1)
    word_length: int = Field(default=80, ge=1)
    phase: int = Field(default=9, ge=0)
    val_fraction: float = Field(default=0.2, gt=0, lt=1)
    split_mode: Literal["contiguous", "shuffled"] = "contiguous"
    split_seed: int = Field(default=0, ge=0)


class AdaptConfig(BaseModel):
    model_config = _STRICT

    base_voltage_v: float = Field(default=1.4, gt=0)
    reservoir: bool = False
    interpolation_targets_v: list[float] = Field(default_factory=list)


class AnalysisConfig(BaseModel):
    model_config = _STRICT

    half_window: int = Field(default=7, ge=0)
    trials: int = Field(default=20, ge=2)
    sigma_scale: float = Field(default=1.0, ge=0)
    benchmark_symbols: int = Field(default=2000, ge=4)


class RunConfig(BaseModel):
    """Resolved configuration for one CLI invocation."""

    model_config = _STRICT

    seed: int = Field(default=0, ge=0, lt=2**32)
    output_dir: str = "runs/default"
    threads: int = Field(default=1, ge=1)
    signal: SignalConfig = Field(default_factory=SignalConfig)
    physics: PhysicsConfig = Field(default_factory=PhysicsConfig)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    adapt: AdaptConfig = Field(default_factory=AdaptConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)

    @model_validator(mode="after")
    def _chk_cross(self) -> "RunConfig":
        if self.dataset.phase >= self.signal.sps:
            raise ValueError(
                f"dataset.phase must be < signal.sps ({self.signal.sps})"
            )
        return self
