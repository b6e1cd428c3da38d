"""Error metrics and model evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from vcselemu.core.errors import DegenerateInputError, LengthError
from vcselemu.core.time import RealTimeSource, TimeSource
from vcselemu.dataset.store import Split, SymbolDataset
from vcselemu.network.lstm import forward_batch
from vcselemu.network.model import BiLstmModel, Provenance

__all__ = [
    "KP4_REQUIRED_SNR_DB",
    "KP4_BER_THRESHOLD",
    "NmseReport",
    "nmse",
    "nmse_to_snr_db",
    "kp4_margin_db",
    "evaluate",
]

# electrical SNR a 53 Gbaud PAM-4 lane needs to reach the KP4 FEC threshold
KP4_REQUIRED_SNR_DB = 16.5
KP4_BER_THRESHOLD = 2.4e-4


def nmse(pred: ArrayLike, truth: ArrayLike) -> float:
    """``sum((y - yhat)**2) / sum((y - mean(y))**2)``.

    Raises:
        LengthError: shapes differ or fewer than 2 samples.
        DegenerateInputError: *truth* is constant.
    """
    p = np.asarray(pred, dtype=np.float64).reshape(-1)
    y = np.asarray(truth, dtype=np.float64).reshape(-1)
    if p.shape != y.shape:
        raise LengthError(f"prediction length {p.size} != truth length {y.size}")
    if y.size < 2:
        raise LengthError("nmse needs at least 2 samples")
    dev = y - y.mean()
    denom = float(np.dot(dev, dev))
    if denom == 0.0:
        raise DegenerateInputError("truth has zero variance")
    err = y - p
    return float(np.dot(err, err)) / denom


def nmse_to_snr_db(value: float) -> float:
    """Effective SNR ``-10*log10(nmse)``."""
    if not value > 0:
        raise ValueError(f"nmse must be > 0, got {value}")
    return -10.0 * math.log10(value)


def kp4_margin_db(snr_db: float) -> float:
    """Distance of an effective SNR above the KP4 pre-FEC requirement."""
    return snr_db - KP4_REQUIRED_SNR_DB


@dataclass(frozen=True, slots=True)
class NmseReport:
    regime_voltage: float
    nmse: float
    snr_db: float
    provenance: Provenance
    n_symbols: int
    wall_time_s: float

    def __post_init__(self) -> None:
        if self.nmse < 0:
            raise ValueError("nmse must be >= 0")

    @classmethod
    def from_nmse(
        cls,
        value: float,
        *,
        regime_voltage: float,
        provenance: Provenance,
        n_symbols: int,
        wall_time_s: float,
    ) -> "NmseReport":
        snr = nmse_to_snr_db(value) if value > 0 else math.inf
        return cls(regime_voltage, value, snr, provenance, n_symbols, wall_time_s)

    @property
    def kp4_margin_db(self) -> float:
        return kp4_margin_db(self.snr_db)

    @property
    def meets_kp4(self) -> bool:
        return self.snr_db >= KP4_REQUIRED_SNR_DB

    def summary_line(self) -> str:
        return (
            f"regime={self.regime_voltage:.2f}V nmse={self.nmse:.5f} "
            f"snr={self.snr_db:.2f}dB time={self.wall_time_s:.2f}s"
        )


def evaluate(
    model: BiLstmModel,
    dataset: SymbolDataset,
    split: Split = "test",
    *,
    time_source: TimeSource | None = None,
) -> NmseReport:
    """NMSE of the model's predictions on one split (normalized units)."""
    ts = time_source or RealTimeSource()
    x, y = dataset.words(split)
    if x.shape[0] == 0:
        raise LengthError(f"split {split!r} is empty")
    t0 = ts.monotonic()
    pred = forward_batch(model, x)
    wall = ts.monotonic() - t0
    return NmseReport.from_nmse(
        nmse(pred, y),
        regime_voltage=dataset.regime_voltage,
        provenance=model.provenance,
        n_symbols=int(y.size),
        wall_time_s=wall,
    )
