"""Counter-based noise streams keyed by (seed, regime, capture)."""

from __future__ import annotations

import numpy as np

__all__ = ["noise_stream"]


def noise_stream(seed: int, regime_index: int, capture: int = 0) -> np.random.Generator:
    """Independent Philox generator for one regime capture.

    The stream depends only on its key, never on how many other streams were
    drawn before it, so regimes can be simulated in any order or in parallel.
    """
    if seed < 0 or regime_index < 0 or capture < 0:
        raise ValueError("seed, regime_index and capture must be >= 0")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(regime_index, capture))
    return np.random.Generator(np.random.Philox(seq))
