from __future__ import annotations

import math

import numpy as np
import pytest

from vcselemu.physics import ReceiverParams, apply_rin, detect
from vcselemu.physics.receiver import receiver_sos

DT = 1.0 / (53.125e9 * 19)


def test_rin_disabled_returns_copy() -> None:
    p = np.full(10, 1e-3)
    out = apply_rin(p, -math.inf, DT, np.random.default_rng(0))
    np.testing.assert_array_equal(out, p)
    assert out is not p
    np.testing.assert_array_equal(apply_rin(p, -138.0, DT, None), p)


def test_rin_variance_matches_density() -> None:
    p = np.full(200_000, 2e-3)
    out = apply_rin(p, -130.0, DT, np.random.default_rng(1))
    expected = math.sqrt(10 ** (-13.0) / (2 * DT))
    assert np.std(out / p - 1.0) == pytest.approx(expected, rel=0.02)


def test_rin_rejects_negative_power() -> None:
    with pytest.raises(ValueError):
        apply_rin(np.array([-1e-3]), -138.0, DT, None)


def test_dc_passes_detector_unchanged() -> None:
    rx = ReceiverParams()
    out = detect(np.full(500, 1e-3), rx, DT, None)
    np.testing.assert_allclose(out, 0.6e-3, rtol=1e-9)


def test_detector_lowpass_attenuates_fast_tone() -> None:
    rx = ReceiverParams(bandwidth_hz=10e9)
    t = np.arange(20_000) * DT
    tone = 1e-3 + 0.5e-3 * np.sin(2 * np.pi * 200e9 * t)
    out = detect(tone, rx, DT, None)[2000:]
    assert np.ptp(out) < 0.01 * np.ptp(0.6 * tone)


def test_detector_noise_seeded() -> None:
    rx = ReceiverParams()
    p = np.full(256, 1e-3)
    a = detect(p, rx, DT, np.random.default_rng(3))
    b = detect(p, rx, DT, np.random.default_rng(3))
    np.testing.assert_array_equal(a, b)
    assert np.std(a) > 0


def test_filter_bypassed_above_nyquist() -> None:
    assert receiver_sos(4, 1e12, DT) is None
    rx = ReceiverParams(bandwidth_hz=1e13)
    x = np.linspace(0, 1e-3, 32)
    np.testing.assert_allclose(detect(x, rx, DT, None), 0.6 * x)


def test_detect_rejects_non_finite() -> None:
    with pytest.raises(ValueError):
        detect(np.array([1e-3, np.nan]), ReceiverParams(), DT, None)


def test_cached_filter_reused() -> None:
    rx = ReceiverParams()
    p = 1e-3 + 0.2e-3 * np.sin(np.arange(400) / 7.0)
    first = detect(p, rx, DT, None)
    second = detect(p, rx, DT, None)
    np.testing.assert_array_equal(first, second)
    assert receiver_sos(rx.filter_order, rx.bandwidth_hz, DT) is not None


def test_gain_at_cutoff_is_half_power() -> None:
    rx = ReceiverParams(bandwidth_hz=30e9)
    t = np.arange(40_000) * DT
    tone = 1e-3 + 0.5e-3 * np.sin(2 * np.pi * rx.bandwidth_hz * t)
    out = detect(tone, rx, DT, None)[10_000:]
    gain = np.ptp(out) / np.ptp(0.6 * tone[10_000:])
    assert gain == pytest.approx(1 / math.sqrt(2), rel=0.05)
