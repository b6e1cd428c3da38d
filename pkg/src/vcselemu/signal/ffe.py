"""Transmit-side 4-tap feed-forward equalizer and its LMS adaptation.

The FFE runs at one sample per symbol. Tap ``center_index`` multiplies the
current symbol; taps before it act on future symbols (precursor) and taps
after it on past symbols (postcursors).

Adaptation happens against a black-box ``channel`` that maps a symbol-rate
drive sequence to the received sequence on the PAM-4 scale. The error of
each received symbol against its ideal level drives a per-symbol LMS update.
The regressor is the transmitted-symbol window filtered by a linear estimate
of the channel (filtered-x LMS). Errors are gathered one short block at a
time so the channel is only evaluated once per block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from vcselemu.core.errors import FfeDivergenceError, LengthError

from .pam4 import SymbolSequence

__all__ = [
    "N_TAPS",
    "FfeTaps",
    "Channel",
    "apply_ffe",
    "symbol_mse",
    "estimate_channel_response",
    "lms_optimize_ffe",
]

logger = logging.getLogger(__name__)

N_TAPS = 4

Channel = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, slots=True)
class FfeTaps:
    taps: NDArray[np.float64]
    center_index: int = 1

    def __post_init__(self) -> None:
        t = np.asarray(self.taps, dtype=np.float64)
        if t.shape != (N_TAPS,):
            raise ValueError(f"FFE needs exactly {N_TAPS} taps, got shape {t.shape}")
        if not np.isfinite(t).all():
            raise ValueError("FFE taps must be finite")
        if not 0 <= self.center_index < N_TAPS:
            raise ValueError("center_index out of range")
        object.__setattr__(self, "taps", t)

    @classmethod
    def cursor_only(cls, center_index: int = 1) -> "FfeTaps":
        t = np.zeros(N_TAPS)
        t[center_index] = 1.0
        return cls(taps=t, center_index=center_index)


def _ffe(
    x: NDArray[np.float64], taps: NDArray[np.float64], c: int
) -> NDArray[np.float64]:
    return np.convolve(x, taps)[c : c + x.size]


def apply_ffe(
    symbols: SymbolSequence | ArrayLike, taps: FfeTaps
) -> NDArray[np.float64]:
    """Filter symbols with the FFE; output length equals input length.

    Samples outside the sequence are treated as zero.
    """
    x = np.asarray(
        symbols.levels if isinstance(symbols, SymbolSequence) else symbols,
        dtype=np.float64,
    )
    if x.size < N_TAPS:
        raise LengthError(f"FFE needs at least {N_TAPS} symbols, got {x.size}")
    return _ffe(x, taps.taps, taps.center_index)


def symbol_mse(
    levels: NDArray[np.float64], taps: FfeTaps, channel: Channel
) -> float:
    """MSE of the channel output against the ideal symbol levels."""
    rx = channel(apply_ffe(levels, taps))
    return float(np.mean((levels - rx) ** 2))


def estimate_channel_response(
    x: NDArray[np.float64],
    channel: Channel,
    *,
    precursors: int = 2,
    postcursors: int = 4,
) -> NDArray[np.float64]:
    """Least-squares linear response of *channel* around the cursor.

    Sends *x* through the channel undistorted and fits
    ``r[k] ~ sum_m h[m] x[k - m] + b`` for ``m = -precursors..postcursors``.
    Returns ``h`` with ``h[precursors]`` the main cursor.
    """
    n = x.size
    r = np.asarray(channel(x.copy()), dtype=np.float64)
    span = precursors + postcursors + 1
    if n <= 2 * span:
        raise LengthError(f"channel estimate needs more than {2 * span} symbols")
    padded = np.concatenate([np.zeros(postcursors), x, np.zeros(precursors)])
    cols = [
        padded[postcursors - m : postcursors - m + n]
        for m in range(-precursors, postcursors + 1)
    ]
    design = np.column_stack([*cols, np.ones(n)])
    # the sequence ends only see part of the response
    inner = slice(postcursors, n - precursors)
    coef, *_ = np.linalg.lstsq(design[inner], r[inner], rcond=None)
    return np.asarray(coef[:span], dtype=np.float64)


def lms_optimize_ffe(
    tx_symbols: SymbolSequence,
    channel: Channel,
    step: float,
    n_iterations: int,
    *,
    init: FfeTaps | None = None,
    block: int = 16,
    context: int = 8,
    window: int = 256,
) -> FfeTaps:
    """Adapt FFE taps by filtered-x LMS against the ideal PAM-4 levels.

    The FFE sits before the channel, so the gradient of each received sample
    with respect to the taps runs through the channel. The regressor is the
    transmitted-symbol window filtered by a linear channel estimate
    (:func:`estimate_channel_response`) taken once before adaptation.

    Args:
        tx_symbols: Training symbols (ideal levels).
        channel: Deterministic drive -> received map (noise disabled), on the
            PAM-4 amplitude scale.
        step: LMS step size (>= 0; 0 returns the initial taps).
        n_iterations: Number of per-symbol updates.
        init: Starting taps; defaults to cursor-only.
        block: Symbols whose errors are gathered per channel evaluation.
        context: Extra symbols simulated on each side of a block.
        window: Update count per divergence-check window.

    Raises:
        FfeDivergenceError: the windowed MSE grew more than 10x over the first
            window or became non-finite, or the adapted taps end with a higher
            full-sequence MSE than the initial ones.
    """
    if step < 0:
        raise ValueError(f"LMS step must be >= 0, got {step}")
    w0 = init if init is not None else FfeTaps.cursor_only()
    x = tx_symbols.levels
    n = x.size
    if n < N_TAPS:
        raise LengthError(f"LMS needs at least {N_TAPS} symbols, got {n}")
    if step == 0 or n_iterations <= 0:
        return w0

    pre_n = 2
    h = estimate_channel_response(x, channel, precursors=pre_n)
    logger.debug("LMS channel estimate: %s", np.round(h, 4))
    # filtered symbols v[k] = sum_m h[m] x[k - m]
    v = np.convolve(x, h)[pre_n : pre_n + n]

    c = w0.center_index
    w = w0.taps.copy()
    # regressor for symbol k is v[k + c - j] for tap j
    padded = np.concatenate([np.zeros(N_TAPS), v, np.zeros(N_TAPS)])
    offsets = c - np.arange(N_TAPS) + N_TAPS

    first_mse: float | None = None
    acc, count = 0.0, 0
    done = 0
    start = 0
    while done < n_iterations:
        if start >= n:
            start = 0
        stop = min(start + block, n, start + (n_iterations - done))
        lo, hi = max(0, start - context), min(n, stop + context)
        rx = channel(_ffe(x[lo:hi], w, c))
        err = x[start:stop] - rx[start - lo : stop - lo]
        for i, e in enumerate(err):
            k = start + i
            w += step * e * padded[k + offsets]
            acc += e * e
            count += 1
            if count == window:
                mse = acc / count
                if first_mse is None:
                    first_mse = mse
                elif not np.isfinite(mse) or mse > 10.0 * max(first_mse, 1e-300):
                    raise FfeDivergenceError(step, first_mse, mse)
                acc, count = 0.0, 0
        if not np.isfinite(w).all():
            raise FfeDivergenceError(step, first_mse or 0.0, float("inf"))
        done += stop - start
        start = stop

    adapted = FfeTaps(taps=w, center_index=c)
    pre = symbol_mse(x, w0, channel)
    post = symbol_mse(x, adapted, channel)
    logger.info("LMS FFE: mse %.4g -> %.4g, taps=%s", pre, post, np.round(w, 4))
    if post > pre:
        raise FfeDivergenceError(step, pre, post)
    return adapted
