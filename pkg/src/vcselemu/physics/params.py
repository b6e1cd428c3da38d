"""Pydantic models for the VCSEL and receiver parameter sets."""

from __future__ import annotations

import math
from typing import overload

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.constants import elementary_charge

__all__ = [
    "VcselParams",
    "ReceiverParams",
    "LASING_CHECK_VOLTAGE_V",
    "bias_to_current",
    "threshold_current",
]

# every configured regime at or above this bias must lase
LASING_CHECK_VOLTAGE_V = 1.0


class VcselParams(BaseModel):
    """Single-mode rate-equation coefficients for one device.

    Parameters
    ----------
    tau_n_s: carrier lifetime.
    tau_p_s: photon lifetime.
    g0_per_s: differential gain per carrier above transparency.
    n0: transparency carrier number.
    eps: gain compression factor per photon.
    gamma: confinement factor.
    beta: spontaneous emission coupling fraction.
    eta_i: injection efficiency.
    power_per_photon_w: emitted power per photon in the cavity.
    v_on_v: diode turn-on voltage.
    r_series_ohm: series resistance above turn-on.
    rin_db_hz: relative intensity noise density; ``-inf`` disables RIN.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    tau_n_s: float = Field(default=1.0e-9, gt=0)
    tau_p_s: float = Field(default=2.0e-12, gt=0)
    g0_per_s: float = Field(default=1.0e6, ge=0)
    n0: float = Field(default=2.0e6, ge=0)
    eps: float = Field(default=2.0e-6, ge=0)
    gamma: float = Field(default=0.5, gt=0, le=1)
    beta: float = Field(default=1.0e-4, ge=0, le=1)
    eta_i: float = Field(default=0.8, gt=0, le=1)
    power_per_photon_w: float = Field(default=5.85e-8, gt=0)
    v_on_v: float = Field(default=0.8, ge=0)
    r_series_ohm: float = Field(default=50.0, gt=0)
    rin_db_hz: float = Field(default=-138.0)

    @field_validator("rin_db_hz")
    @classmethod
    def _chk_rin(cls, v: float) -> float:
        if math.isnan(v) or v == math.inf:
            raise ValueError("rin_db_hz must be finite or -inf (disabled)")
        return v

    @model_validator(mode="after")
    def _chk_lasing(self) -> "VcselParams":
        i_check = bias_to_current(LASING_CHECK_VOLTAGE_V, self)
        i_th = threshold_current(self)
        if i_check <= i_th:
            raise ValueError(
                f"parameters do not lase at {LASING_CHECK_VOLTAGE_V} V: "
                f"I={i_check * 1e3:.3g} mA <= threshold {i_th * 1e3:.3g} mA"
            )
        return self


class ReceiverParams(BaseModel):
    """Photodetector and capture chain."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    responsivity_a_per_w: float = Field(default=0.6, gt=0)
    bandwidth_hz: float = Field(default=30.0e9, gt=0)
    noise_density_w_per_rthz: float = Field(default=32.0e-12, ge=0)
    filter_order: int = Field(default=4, ge=1, le=8)
    # oscilloscope rate; the capture is folded into the filter + decimation
    adc_rate_hz: float = Field(default=100.0e9, gt=0)


@overload
def bias_to_current(voltage: float, params: VcselParams) -> float: ...


@overload
def bias_to_current(
    voltage: NDArray[np.float64], params: VcselParams
) -> NDArray[np.float64]: ...


def bias_to_current(
    voltage: float | NDArray[np.float64], params: VcselParams
) -> float | NDArray[np.float64]:
    """Drive current for a terminal voltage: ``max(0, (V - v_on) / R)``.

    Accepts a scalar or an array of voltages.
    """
    v = np.asarray(voltage, dtype=np.float64)
    if (v < 0).any():
        raise ValueError("voltage must be >= 0")
    i = np.maximum(0.0, (v - params.v_on_v) / params.r_series_ohm)
    if i.ndim == 0:
        return float(i)
    return i


def threshold_current(params: VcselParams) -> float:
    """Lasing threshold current (gain compression neglected at threshold)."""
    if params.g0_per_s == 0.0:
        return math.inf
    n_th = params.n0 + 1.0 / (params.gamma * params.g0_per_s * params.tau_p_s)
    return elementary_charge * n_th / (params.eta_i * params.tau_n_s)
