"""End-to-end transmit -> laser -> receiver simulation of one regime."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from vcselemu.signal import (
    FfeTaps,
    SymbolSequence,
    apply_ffe,
    quantize_dac,
    upsample_hold,
)
from vcselemu.signal.ffe import Channel

from .params import ReceiverParams, VcselParams, bias_to_current
from .rate_equations import integrate_rate_equations
from .receiver import apply_rin, detect

__all__ = [
    "DEFAULT_SPS",
    "DEFAULT_DAC_BITS",
    "DEFAULT_PHASE",
    "WaveformPair",
    "drive_voltage",
    "simulate_link",
    "make_lms_channel",
]

logger = logging.getLogger(__name__)

DEFAULT_SPS = 19
DEFAULT_DAC_BITS = 6
DEFAULT_PHASE = 9


@dataclass(frozen=True, slots=True)
class WaveformPair:
    """Aligned drive (V) and received photocurrent (A) samples.

    ``received`` is kept in physical units; the dataset layer z-scores it.
    """

    drive: NDArray[np.float64]
    received: NDArray[np.float64]
    dt: float
    sps: int
    regime_voltage: float
    symbol_rate_hz: float

    def __post_init__(self) -> None:
        if self.drive.shape != self.received.shape or self.drive.ndim != 1:
            raise ValueError("drive and received must be 1-D with equal length")
        if self.sps < 1 or self.drive.size % self.sps:
            raise ValueError(
                f"length {self.drive.size} is not a multiple of sps={self.sps}"
            )
        symbol_time = 1.0 / self.symbol_rate_hz
        if abs(self.dt * self.sps - symbol_time) > 1e-12 * symbol_time:
            raise ValueError("dt * sps must equal the symbol duration")

    @property
    def n_symbols(self) -> int:
        return self.drive.size // self.sps


def drive_voltage(
    drive_symbols: NDArray[np.float64],
    regime_voltage: float,
    modulation_vpp: float,
    full_scale: float,
    sps: int,
    dac_bits: int,
    *,
    dac_range: float | None = None,
) -> NDArray[np.float64]:
    """DAC-quantize, hold and scale a symbol-rate drive onto the bias point.

    ``full_scale`` is the drive amplitude mapped to ``modulation_vpp / 2``.
    The DAC spans the fixed range ``±dac_range`` (``±full_scale`` by default)
    and saturates outside it.
    """
    if modulation_vpp <= 0:
        raise ValueError(f"modulation_vpp must be > 0, got {modulation_vpp}")
    span = full_scale if dac_range is None else dac_range
    q = quantize_dac(drive_symbols, dac_bits, full_range=(-span, span))
    return regime_voltage + upsample_hold(q, sps) * (0.5 * modulation_vpp / full_scale)


def simulate_link(
    symbols: SymbolSequence,
    taps: FfeTaps,
    params: VcselParams,
    rx: ReceiverParams,
    regime_voltage: float,
    modulation_vpp: float,
    rng: np.random.Generator | None,
    *,
    sps: int = DEFAULT_SPS,
    dac_bits: int = DEFAULT_DAC_BITS,
) -> WaveformPair:
    """Run FFE -> DAC -> hold -> bias -> laser -> RIN -> detector.

    The DAC full scale is the FFE's peak output ``sum(|taps|)``, which spans
    exactly ``modulation_vpp`` around the bias. ``rng=None`` disables every
    noise source.
    """
    if sps < 1:
        raise ValueError("sps must be >= 1")
    dt = 1.0 / (symbols.symbol_rate_hz * sps)
    ffe_out = apply_ffe(symbols, taps)
    full_scale = float(np.abs(taps.taps).sum())
    v = drive_voltage(
        ffe_out, regime_voltage, modulation_vpp, full_scale, sps, dac_bits
    )
    power = integrate_rate_equations(bias_to_current(v, params), params, dt)
    power = apply_rin(power, params.rin_db_hz, dt, rng)
    received = detect(power, rx, dt, rng)
    logger.debug(
        "simulated %d symbols at %.2f V (noise %s)",
        len(symbols),
        regime_voltage,
        "on" if rng is not None else "off",
    )
    return WaveformPair(
        drive=v,
        received=received,
        dt=dt,
        sps=sps,
        regime_voltage=regime_voltage,
        symbol_rate_hz=symbols.symbol_rate_hz,
    )


def make_lms_channel(
    calibration: SymbolSequence,
    params: VcselParams,
    rx: ReceiverParams,
    regime_voltage: float,
    modulation_vpp: float,
    *,
    sps: int = DEFAULT_SPS,
    phase: int = DEFAULT_PHASE,
    dac_bits: int = DEFAULT_DAC_BITS,
    max_lag: int = 4,
    dac_range: float = 2.0,
) -> Channel:
    """Noise-free back-to-back channel on the PAM-4 scale, for FFE adaptation.

    The channel maps a symbol-rate drive to the received samples at
    ``phase``. A cursor-only run over ``calibration`` fixes the integer
    symbol delay (largest correlation for lags ``0..max_lag``) and an affine
    map of the photocurrent onto the ideal levels; both stay fixed while the
    taps adapt. A drive of 1 (the cursor-only peak) maps to
    ``modulation_vpp / 2``; the DAC spans the fixed range ``±dac_range`` so
    pre-emphasized drives keep headroom and every block shares one grid.
    """
    if not 0 <= phase < sps:
        raise ValueError(f"phase must be in [0, {sps}), got {phase}")
    dt = 1.0 / (calibration.symbol_rate_hz * sps)

    def raw(drive: NDArray[np.float64]) -> NDArray[np.float64]:
        v = drive_voltage(
            drive,
            regime_voltage,
            modulation_vpp,
            1.0,
            sps,
            dac_bits,
            dac_range=dac_range,
        )
        power = integrate_rate_equations(bias_to_current(v, params), params, dt)
        return detect(power, rx, dt, None)[phase::sps]

    x = calibration.levels
    ref = raw(x.copy())
    n = x.size
    lags = range(0, min(max_lag, n - 2) + 1)
    scores = [abs(np.corrcoef(x[: n - d], ref[d:])[0, 1]) for d in lags]
    lag = int(np.argmax(scores))
    gain, offset = np.polyfit(ref[lag:], x[: n - lag], 1)
    logger.info(
        "LMS channel at %.2f V: delay %d symbols, gain %.4g, offset %.4g",
        regime_voltage,
        lag,
        gain,
        offset,
    )

    def channel(drive: NDArray[np.float64]) -> NDArray[np.float64]:
        y = raw(np.asarray(drive, dtype=np.float64))
        if lag:
            y = np.concatenate([y[lag:], np.full(lag, y[-1])])
        return gain * y + offset

    return channel
