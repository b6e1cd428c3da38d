"""Laser intensity noise and the photodetection chain."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import signal as sps

from .params import ReceiverParams

__all__ = ["apply_rin", "detect", "receiver_sos"]

logger = logging.getLogger(__name__)


def apply_rin(
    power: ArrayLike,
    rin_db_hz: float,
    dt: float,
    rng: np.random.Generator | None,
) -> NDArray[np.float64]:
    """Multiplicative white intensity noise ``P*(1 + n)``.

    ``n`` is Gaussian with variance ``10**(rin/10) / (2*dt)``: the configured
    RIN density integrated over the simulation Nyquist band. ``rin_db_hz =
    -inf`` or ``rng=None`` returns the input unchanged.
    """
    p = np.asarray(power, dtype=np.float64)
    if (p < 0).any():
        raise ValueError("power must be non-negative")
    if rng is None or rin_db_hz == -math.inf:
        return p.copy()
    sigma = math.sqrt(10.0 ** (rin_db_hz / 10.0) / (2.0 * dt))
    return p * (1.0 + sigma * rng.standard_normal(p.size))


@lru_cache(maxsize=16)
def receiver_sos(
    order: int, bandwidth_hz: float, dt: float
) -> NDArray[np.float64] | None:
    """Second-order sections of the receiver Bessel low-pass.

    ``norm="mag"`` places the -3 dB point at ``bandwidth_hz``. Returns
    ``None`` when the cutoff is at or above Nyquist (filter transparent).
    """
    fs = 1.0 / dt
    if bandwidth_hz >= 0.5 * fs:
        return None
    sos = sps.bessel(order, bandwidth_hz, btype="low", norm="mag", output="sos", fs=fs)
    sos.setflags(write=False)
    return sos


def detect(
    power: ArrayLike,
    rx: ReceiverParams,
    dt: float,
    rng: np.random.Generator | None,
) -> NDArray[np.float64]:
    """Photocurrent ``R*P`` plus detector noise, then the receiver low-pass.

    The noise is white with density ``noise_density * R`` (A/sqrt(Hz)) over
    the Nyquist band ``1/(2*dt)``; ``rng=None`` disables it. The filter
    starts in its steady state for the first sample so a DC input passes
    through unchanged.
    """
    p = np.asarray(power, dtype=np.float64)
    if not np.isfinite(p).all():
        raise ValueError("power must be finite")
    i = rx.responsivity_a_per_w * p
    if rng is not None and rx.noise_density_w_per_rthz > 0:
        sigma = (
            rx.noise_density_w_per_rthz
            * rx.responsivity_a_per_w
            * math.sqrt(1.0 / (2.0 * dt))
        )
        i = i + sigma * rng.standard_normal(i.size)
    sos = receiver_sos(rx.filter_order, rx.bandwidth_hz, dt)
    if sos is None or i.size == 0:
        logger.debug("receiver filter bypassed (bandwidth >= Nyquist)")
        return i
    # sosfilt needs a writable buffer; the cached sections are read-only
    sos = sos.copy()
    zi = sps.sosfilt_zi(sos) * i[0]
    out, _ = sps.sosfilt(sos, i, zi=zi)
    return np.asarray(out, dtype=np.float64)
