"""Received-level clusters at the symbol sampling instants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from vcselemu.core.errors import LengthError
from vcselemu.signal.pam4 import PAM4_ALPHABET

__all__ = ["LevelCluster", "estimate_delay", "level_clusters", "level_spacing_spread"]


@dataclass(frozen=True, slots=True)
class LevelCluster:
    level: float
    mean: float
    std: float
    count: int


def level_clusters(
    symbols: ArrayLike, received: ArrayLike, delay: int = 0
) -> list[LevelCluster]:
    """Group ``received[k + delay]`` by transmitted symbol ``symbols[k]``.

    Only levels that occur are reported, in ascending order.
    """
    s = np.asarray(symbols, dtype=np.float64)
    r = np.asarray(received, dtype=np.float64)
    if s.shape != r.shape or s.ndim != 1:
        raise LengthError("symbols and received must be equal-length 1-D sequences")
    if not 0 <= delay < s.size:
        raise ValueError(f"delay must be in [0, {s.size})")
    s = s[: s.size - delay]
    r = r[delay:]
    out = []
    for level in PAM4_ALPHABET:
        sel = r[np.isclose(s, level)]
        if sel.size:
            out.append(
                LevelCluster(
                    level=float(level),
                    mean=float(sel.mean()),
                    std=float(sel.std()),
                    count=int(sel.size),
                )
            )
    return out


def level_spacing_spread(clusters: list[LevelCluster]) -> float:
    """``(max gap - min gap) / mean gap`` between adjacent cluster means.

    Zero for equally spaced levels; grows as the eye compresses unevenly.
    """
    if len(clusters) < 3:
        raise LengthError("need at least 3 level clusters")
    gaps = np.diff([c.mean for c in clusters])
    return float((gaps.max() - gaps.min()) / abs(gaps.mean()))


def estimate_delay(symbols: ArrayLike, received: ArrayLike, max_lag: int = 8) -> int:
    """Symbol delay in ``0..max_lag`` maximizing ``|corr(symbols, received)|``."""
    s = np.asarray(symbols, dtype=np.float64)
    r = np.asarray(received, dtype=np.float64)
    if s.shape != r.shape or s.ndim != 1:
        raise LengthError("symbols and received must be equal-length 1-D sequences")
    n = s.size
    lags = range(0, max(0, min(max_lag, n - 3)) + 1)
    scores = [abs(np.corrcoef(s[: n - d], r[d:])[0, 1]) for d in lags]
    return int(np.nanargmax(scores))
