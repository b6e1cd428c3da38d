"""Symbol-rate decimation, z-score normalization and word windowing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from vcselemu.core.errors import DegenerateInputError, LengthError
from vcselemu.physics.link import DEFAULT_PHASE, WaveformPair

__all__ = [
    "WORD_LENGTH",
    "NormStats",
    "Word",
    "decimate_to_symbol_rate",
    "normalize",
    "denormalize",
    "make_words",
]

WORD_LENGTH = 80


@dataclass(frozen=True, slots=True)
class NormStats:
    """Mean and population standard deviation of one sequence."""

    mean: float
    std: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.mean) and np.isfinite(self.std)) or self.std <= 0:
            raise ValueError(f"invalid normalization stats {self.mean}, {self.std}")

    @classmethod
    def of(cls, seq: ArrayLike) -> "NormStats":
        x = np.asarray(seq, dtype=np.float64)
        if x.size == 0:
            raise LengthError("cannot compute statistics of an empty sequence")
        std = float(x.std())
        if std == 0.0:
            raise DegenerateInputError("sequence has zero variance")
        return cls(mean=float(x.mean()), std=std)

    def as_list(self) -> list[float]:
        return [self.mean, self.std]


@dataclass(frozen=True, slots=True)
class Word:
    """One fixed-length training window; ``index`` is its first sample offset."""

    x: NDArray[np.float64]
    y: NDArray[np.float64]
    index: int


def decimate_to_symbol_rate(
    pair: WaveformPair, phase: int = DEFAULT_PHASE
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Take sample ``phase`` of every symbol period from drive and received."""
    if not 0 <= phase < pair.sps:
        raise ValueError(f"phase must be in [0, {pair.sps}), got {phase}")
    return pair.drive[phase :: pair.sps].copy(), pair.received[phase :: pair.sps].copy()


def normalize(
    seq: ArrayLike, stats: NormStats | None = None
) -> tuple[NDArray[np.float64], NormStats]:
    """Z-score *seq* with *stats*, or with its own statistics when omitted.

    Raises:
        DegenerateInputError: zero variance and no stats supplied.
    """
    x = np.asarray(seq, dtype=np.float64)
    st = stats if stats is not None else NormStats.of(x)
    return (x - st.mean) / st.std, st


def denormalize(seq: ArrayLike, stats: NormStats) -> NDArray[np.float64]:
    return np.asarray(seq, dtype=np.float64) * stats.std + stats.mean


def make_words(
    inputs: ArrayLike, targets: ArrayLike, word_length: int = WORD_LENGTH
) -> list[Word]:
    """Cut non-overlapping consecutive words; the trailing remainder is dropped."""
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthError(f"inputs {x.shape} and targets {y.shape} must match")
    if word_length < 1 or x.size < word_length:
        raise LengthError(f"need at least {word_length} samples, got {x.size}")
    n = x.size // word_length
    return [
        Word(
            x=x[k * word_length : (k + 1) * word_length].copy(),
            y=y[k * word_length : (k + 1) * word_length].copy(),
            index=k * word_length,
        )
        for k in range(n)
    ]
