"""Pseudorandom bit source based on the 32-bit Mersenne Twister.

The generator follows the reference mt19937ar code: ``init_genrand``
seeding, the standard twist and tempering. Bits are taken MSB-first from
successive 32-bit outputs, so a given seed always produces the same pattern
regardless of platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from vcselemu.core.errors import EmptyRequestError

__all__ = ["Mt19937", "BitSequence", "generate_prbs", "GENERATOR_ID"]

GENERATOR_ID = "mt19937"


class Mt19937:
    """Reference 32-bit MT19937 generator."""

    # Constants for MT19937 (original 32-bit variant).
    w, n, m, r = 32, 624, 397, 31
    u, s, t, l = 11, 7, 15, 18

    a, b, c = 0x9908B0DF, 0x9D2C5680, 0xEFC60000
    f = 0x6C078965
    width_mask = (1 << w) - 1
    lower_mask = (1 << r) - 1
    upper_mask = lower_mask ^ width_mask

    def __init__(self, seed: int) -> None:
        self._mt = [0] * self.n
        self._index = self.n
        self.seed(seed)

    def seed(self, seed: int) -> None:
        """Seed the state with ``init_genrand`` (32-bit seed)."""
        mt = self._mt
        mt[0] = seed & self.width_mask
        for i in range(1, self.n):
            prev = mt[i - 1]
            mt[i] = (self.f * (prev ^ (prev >> (self.w - 2))) + i) & self.width_mask
        self._index = self.n

    def _twist(self) -> None:
        mt = self._mt
        n, m = self.n, self.m
        for i in range(n):
            x = (mt[i] & self.upper_mask) | (mt[(i + 1) % n] & self.lower_mask)
            xa = x >> 1
            if x & 1:
                xa ^= self.a
            mt[i] = mt[(i + m) % n] ^ xa
        self._index = 0

    def next_u32(self) -> int:
        """Return the next tempered 32-bit output."""
        if self._index >= self.n:
            self._twist()
        y = self._mt[self._index]
        self._index += 1
        y ^= y >> self.u
        y ^= (y << self.s) & self.b
        y ^= (y << self.t) & self.c
        y ^= y >> self.l
        return y & self.width_mask

    def words(self, count: int) -> NDArray[np.uint32]:
        """Return the next *count* outputs as a uint32 array."""
        return np.fromiter(
            (self.next_u32() for _ in range(count)), dtype=np.uint32, count=count
        )


@dataclass(frozen=True, slots=True)
class BitSequence:
    """Ordered binary values with the seed that produced them."""

    bits: NDArray[np.uint8]
    seed: int
    generator_id: str = GENERATOR_ID

    def __post_init__(self) -> None:
        if self.bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if self.bits.size and int(self.bits.max()) > 1:
            raise ValueError("bits must be 0 or 1")

    def __len__(self) -> int:
        return int(self.bits.size)


def generate_prbs(seed: int, n_bits: int) -> BitSequence:
    """Generate *n_bits* pseudorandom bits, MSB-first from MT19937 words.

    Args:
        seed: 32-bit generator seed.
        n_bits: Number of bits to return (>= 1).

    Raises:
        EmptyRequestError: ``n_bits`` is zero or negative.
    """
    if n_bits < 1:
        raise EmptyRequestError(f"n_bits must be >= 1, got {n_bits}")
    if not 0 <= seed <= 0xFFFFFFFF:
        raise ValueError(f"seed must be a 32-bit unsigned integer, got {seed}")
    n_words = -(-n_bits // 32)
    words = Mt19937(seed).words(n_words)
    # big-endian bytes + unpackbits yields each word MSB-first
    bits = np.unpackbits(words.astype(">u4").view(np.uint8))[:n_bits]
    return BitSequence(bits=bits.astype(np.uint8), seed=seed)
