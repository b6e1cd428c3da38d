"""DAC amplitude quantization."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = ["quantize_dac"]


def quantize_dac(
    waveform: ArrayLike,
    n_bits: int,
    *,
    full_range: tuple[float, float] | None = None,
) -> NDArray[np.float64]:
    """Uniform mid-rise quantization onto ``2**n_bits`` levels.

    Without ``full_range`` the levels span the waveform's own [min, max]:
    bin ``k`` is reproduced as ``min + k * range / (2**n_bits - 1)`` so the
    output spans exactly the input range, and a constant waveform is returned
    unchanged. With ``full_range=(lo, hi)`` the levels are fixed to that span
    and samples outside it saturate at the end levels, so short pieces of a
    longer drive land on the same grid as the whole.

    Args:
        waveform: Finite sample values.
        n_bits: Resolution in bits, 1..16.
        full_range: Fixed converter span ``(lo, hi)`` with ``hi > lo``.
    """
    if not 1 <= n_bits <= 16:
        raise ValueError(f"n_bits must be in [1, 16], got {n_bits}")
    x = np.asarray(waveform, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("waveform must be finite")
    if full_range is not None:
        lo, hi = float(full_range[0]), float(full_range[1])
        if not hi > lo:
            raise ValueError(f"full_range must have hi > lo, got {full_range}")
        span = hi - lo
    else:
        lo = float(x.min()) if x.size else 0.0
        span = float(x.max()) - lo if x.size else 0.0
        if span == 0.0:
            return x.copy()
    levels = 1 << n_bits
    code = np.clip(np.floor((x - lo) / span * levels), 0, levels - 1)
    return lo + code * (span / (levels - 1))
