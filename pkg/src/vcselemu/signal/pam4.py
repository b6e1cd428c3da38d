"""PAM-4 symbol mapping, slicing and upsampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from vcselemu.core.errors import LengthError

from .prbs import BitSequence

__all__ = [
    "PAM4_ALPHABET",
    "SymbolSequence",
    "bits_to_symbol_indices",
    "map_pam4",
    "demap_pam4",
    "pam4_levels",
    "slice_pam4",
    "upsample_hold",
]

PAM4_ALPHABET: NDArray[np.float64] = np.array([-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0])

# (b1, b0) pair value -> alphabet index
_GRAY_INDEX = np.array([0, 1, 3, 2])
_NATURAL_INDEX = np.array([0, 1, 2, 3])


def pam4_levels(gray: bool = True) -> NDArray[np.float64]:
    """Amplitude for each bit-pair value 0..3 under the chosen mapping."""
    return PAM4_ALPHABET[_GRAY_INDEX if gray else _NATURAL_INDEX].copy()


def bits_to_symbol_indices(
    bits: BitSequence, gray: bool = True
) -> NDArray[np.int64]:
    """Alphabet index (0 = lowest level) for each consecutive bit pair.

    Raises:
        LengthError: odd number of bits.
    """
    b = bits.bits
    if b.size % 2:
        raise LengthError(f"PAM-4 mapping needs an even bit count, got {b.size}")
    pair = 2 * b[0::2].astype(np.int64) + b[1::2].astype(np.int64)
    table = _GRAY_INDEX if gray else _NATURAL_INDEX
    return table[pair]


@dataclass(frozen=True, slots=True)
class SymbolSequence:
    """PAM-4 amplitudes in {-1, -1/3, +1/3, +1} at ``symbol_rate_hz``."""

    levels: NDArray[np.float64]
    symbol_rate_hz: float

    def __post_init__(self) -> None:
        if self.symbol_rate_hz <= 0:
            raise ValueError("symbol_rate_hz must be > 0")
        if not np.isin(self.levels, PAM4_ALPHABET).all():
            raise ValueError("levels must be PAM-4 alphabet amplitudes")

    def __len__(self) -> int:
        return int(self.levels.size)


def map_pam4(
    bits: BitSequence, gray: bool = True, symbol_rate_hz: float = 53.125e9
) -> SymbolSequence:
    """Map consecutive bit pairs (b1, b0) to PAM-4 amplitudes.

    Gray mapping: 00 -> -1, 01 -> -1/3, 11 -> +1/3, 10 -> +1.
    Natural mapping orders the levels by the binary value of the pair.

    Raises:
        LengthError: odd number of bits.
    """
    return SymbolSequence(
        levels=PAM4_ALPHABET[bits_to_symbol_indices(bits, gray)],
        symbol_rate_hz=symbol_rate_hz,
    )


def demap_pam4(symbols: SymbolSequence, gray: bool = True) -> NDArray[np.uint8]:
    """Invert :func:`map_pam4`, returning the bit stream."""
    idx = np.searchsorted(PAM4_ALPHABET, symbols.levels)
    table = _GRAY_INDEX if gray else _NATURAL_INDEX
    pair = np.argsort(table)[idx]
    out = np.empty(2 * pair.size, dtype=np.uint8)
    out[0::2] = pair >> 1
    out[1::2] = pair & 1
    return out


def slice_pam4(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Nearest-level decision onto the PAM-4 alphabet."""
    v = np.asarray(values, dtype=np.float64)
    idx = np.abs(v[..., None] - PAM4_ALPHABET).argmin(axis=-1)
    return PAM4_ALPHABET[idx]


def upsample_hold(values: NDArray[np.float64], sps: int) -> NDArray[np.float64]:
    """Rectangular hold: repeat each value *sps* times."""
    if sps < 1:
        raise ValueError("sps must be >= 1")
    return np.repeat(np.asarray(values, dtype=np.float64), sps)
