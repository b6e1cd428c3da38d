"""Single-mode carrier/photon rate equations and their RK4 integrator.

State is the carrier number ``N`` and the cavity photon number ``S``::

    dN/dt = eta_i*I/q - N/tau_n - g0*(N - n0)*S/(1 + eps*S)
    dS/dt = gamma*g0*(N - n0)*S/(1 + eps*S) - S/tau_p + gamma*beta*N/tau_n

Gain compression ``eps`` is the only saturating nonlinearity. The emitted
power is ``power_per_photon_w * S``.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.constants import elementary_charge
from scipy.optimize import brentq

from vcselemu.core.errors import IntegrationBlowupError

from .params import VcselParams

__all__ = [
    "rate_derivatives",
    "steady_state",
    "relaxation_frequency_hz",
    "integrate_rate_equations",
    "integrate_state",
]

logger = logging.getLogger(__name__)

_RESIDUAL_TOL = 1e-8


def rate_derivatives(
    n: float, s: float, current: float, p: VcselParams
) -> tuple[float, float]:
    """Right-hand side ``(dN/dt, dS/dt)`` at one state."""
    stim = p.g0_per_s * (n - p.n0) * s / (1.0 + p.eps * s)
    dn = p.eta_i * current / elementary_charge - n / p.tau_n_s - stim
    ds = p.gamma * stim - s / p.tau_p_s + p.gamma * p.beta * n / p.tau_n_s
    return dn, ds


def _photons_for(n: float, current: float, p: VcselParams) -> float:
    # eliminates S using gamma*dN/dt + dS/dt = 0 at equilibrium
    pump = p.eta_i * current / elementary_charge
    return p.gamma * p.tau_p_s * (pump - n * (1.0 - p.beta) / p.tau_n_s)


def steady_state(current: float, params: VcselParams) -> tuple[float, float]:
    """Equilibrium ``(N, S)`` for a constant drive current.

    Combining the two equations leaves a scalar equation in ``N`` that is
    bracketed on ``[0, N_max]`` (the carrier number at which ``S`` reaches
    zero) and solved with Brent's method.

    Raises:
        ValueError: negative or non-finite current.
    """
    if not math.isfinite(current) or current < 0:
        raise ValueError(f"current must be finite and >= 0, got {current}")
    p = params
    pump = p.eta_i * current / elementary_charge
    if pump == 0.0:
        return 0.0, 0.0

    def residual(n: float) -> float:
        s = _photons_for(n, current, p)
        return n / p.tau_n_s + p.g0_per_s * (n - p.n0) * s / (1.0 + p.eps * s) - pump

    if p.beta >= 1.0:
        # S no longer depends on N, leaving a linear equation in N
        s = _photons_for(0.0, current, p)
        c = p.g0_per_s * s / (1.0 + p.eps * s)
        return (pump + c * p.n0) / (1.0 / p.tau_n_s + c), s
    n_max = pump * p.tau_n_s / (1.0 - p.beta)
    hi = n_max
    if p.beta == 0.0:
        # residual(n_max) is exactly 0 here (the S=0 branch); step inside it
        hi = n_max * (1.0 - 1e-12)
        if residual(hi) <= 0.0:
            return n_max, 0.0
    n = brentq(residual, 0.0, hi, xtol=1e-9, rtol=1e-14, maxiter=200)
    s = max(_photons_for(n, current, p), 0.0)

    dn, ds = rate_derivatives(n, s, current, p)
    scale = max(pump, s / p.tau_p_s)
    if abs(dn) > _RESIDUAL_TOL * scale or abs(ds) > _RESIDUAL_TOL * scale:
        logger.warning(
            "steady state residual above tolerance: dN=%.3g dS=%.3g (scale %.3g)",
            dn,
            ds,
            scale,
        )
    return float(n), float(s)


def relaxation_frequency_hz(current: float, params: VcselParams) -> float:
    """Small-signal relaxation-oscillation frequency ``sqrt(g0*S/tau_p)/(2*pi)``."""
    _, s = steady_state(current, params)
    g = params.g0_per_s / (1.0 + params.eps * s)
    return math.sqrt(g * s / params.tau_p_s) / (2.0 * math.pi)


def integrate_rate_equations(
    current: ArrayLike,
    params: VcselParams,
    dt: float,
    *,
    initial_state: tuple[float, float] | None = None,
) -> NDArray[np.float64]:
    """Integrate the rate equations with classical RK4 on a uniform grid.

    ``current[k]`` is the drive at ``t = k*dt``; the half-step value is the
    linear interpolation between neighbouring samples. Output sample ``k`` is
    the emitted power at ``t = k*dt``, so the output has the input's length.

    Args:
        current: Drive current samples (A), finite and non-negative.
        params: Device coefficients.
        dt: Step (s); must not exceed ``tau_p/2``.
        initial_state: ``(N, S)`` at ``t=0``; defaults to the steady state at
            ``current[0]``.

    Raises:
        ValueError: step too large, or bad drive samples.
        IntegrationBlowupError: the state left the physical region (negative
            or non-finite) at the reported sample index.
    """
    _, s = integrate_state(current, params, dt, initial_state=initial_state)
    return params.power_per_photon_w * s


def integrate_state(
    current: ArrayLike,
    params: VcselParams,
    dt: float,
    *,
    initial_state: tuple[float, float] | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """RK4 trajectories ``(N, S)``; see :func:`integrate_rate_equations`."""
    i_arr = np.asarray(current, dtype=np.float64)
    if i_arr.ndim != 1 or i_arr.size == 0:
        raise ValueError("current must be a non-empty 1-D sequence")
    if not dt > 0 or dt > params.tau_p_s / 2.0:
        raise ValueError(
            f"dt={dt:g} s violates the stability guard dt <= tau_p/2 "
            f"({params.tau_p_s / 2.0:g} s)"
        )
    if not np.isfinite(i_arr).all() or (i_arr < 0).any():
        raise ValueError("current must be finite and non-negative")

    p = params
    pump_k = p.eta_i / elementary_charge
    inv_tn = 1.0 / p.tau_n_s
    inv_tp = 1.0 / p.tau_p_s
    g0, n0, eps, gam = p.g0_per_s, p.n0, p.eps, p.gamma
    spont = p.gamma * p.beta * inv_tn
    h = dt
    h2 = 0.5 * dt

    n, s = initial_state if initial_state is not None else steady_state(
        float(i_arr[0]), p
    )
    size = i_arr.size
    n_out = np.empty(size)
    s_out = np.empty(size)
    n_out[0] = n
    s_out[0] = s
    drive = i_arr.tolist()
    # tight scalar loop: numpy call overhead dominates at this state size
    for k in range(size - 1):
        ia = drive[k]
        ib = drive[k + 1]
        im = 0.5 * (ia + ib)

        gn = g0 * (n - n0) * s / (1.0 + eps * s)
        k1n = pump_k * ia - n * inv_tn - gn
        k1s = gam * gn - s * inv_tp + spont * n

        n2 = n + h2 * k1n
        s2 = s + h2 * k1s
        gn = g0 * (n2 - n0) * s2 / (1.0 + eps * s2)
        k2n = pump_k * im - n2 * inv_tn - gn
        k2s = gam * gn - s2 * inv_tp + spont * n2

        n3 = n + h2 * k2n
        s3 = s + h2 * k2s
        gn = g0 * (n3 - n0) * s3 / (1.0 + eps * s3)
        k3n = pump_k * im - n3 * inv_tn - gn
        k3s = gam * gn - s3 * inv_tp + spont * n3

        n4 = n + h * k3n
        s4 = s + h * k3s
        gn = g0 * (n4 - n0) * s4 / (1.0 + eps * s4)
        k4n = pump_k * ib - n4 * inv_tn - gn
        k4s = gam * gn - s4 * inv_tp + spont * n4

        n += h / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
        s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        # comparison is False for NaN, so this also catches overflow
        if not (n >= 0.0 and s >= 0.0 and math.isfinite(n) and math.isfinite(s)):
            raise IntegrationBlowupError(k + 1, f"N={n!r}, S={s!r}")
        n_out[k + 1] = n
        s_out[k + 1] = s
    return n_out, s_out
