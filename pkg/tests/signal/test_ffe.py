from __future__ import annotations

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from vcselemu.core.errors import FfeDivergenceError, LengthError
from vcselemu.signal import (
    FfeTaps,
    apply_ffe,
    estimate_channel_response,
    generate_prbs,
    lms_optimize_ffe,
    map_pam4,
    symbol_mse,
)


def _identity(drive: np.ndarray) -> np.ndarray:
    return drive


def _lowpass(drive: np.ndarray) -> np.ndarray:
    return np.convolve(drive, [0.25, 0.5, 0.25], mode="same")


def _symbols(n: int, seed: int = 3):
    return map_pam4(generate_prbs(seed, 2 * n))


def test_identity_taps() -> None:
    x = np.array([-1.0, 1 / 3, 1.0, -1 / 3, 1.0])
    np.testing.assert_array_equal(apply_ffe(x, FfeTaps.cursor_only()), x)


def test_scaling_taps() -> None:
    x = np.array([-1.0, 1 / 3, 1.0, -1 / 3])
    taps = FfeTaps(taps=np.array([0.0, 0.5, 0.0, 0.0]))
    np.testing.assert_allclose(apply_ffe(x, taps), 0.5 * x)


def test_impulse_response_is_tap_vector_around_cursor() -> None:
    taps = FfeTaps(taps=np.array([0.1, 0.8, -0.2, 0.05]))
    out = apply_ffe(np.array([0.0, 0.0, 1.0, 0.0, 0.0]), taps)
    np.testing.assert_allclose(out, [0.0, 0.1, 0.8, -0.2, 0.05])


def test_short_input() -> None:
    with pytest.raises(LengthError):
        apply_ffe(np.array([1.0, -1.0, 1.0]), FfeTaps.cursor_only())


def test_tap_validation() -> None:
    with pytest.raises(ValueError):
        FfeTaps(taps=np.ones(3))
    with pytest.raises(ValueError):
        FfeTaps(taps=np.array([0.0, np.inf, 0.0, 0.0]))


@settings(deadline=None, max_examples=40)
@given(
    a=st.floats(-3, 3, allow_nan=False),
    b=st.floats(-3, 3, allow_nan=False),
    seed=st.integers(0, 1000),
)
def test_linearity(a: float, b: float, seed: int) -> None:
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal(20), rng.standard_normal(20)
    taps = FfeTaps(taps=rng.standard_normal(4))
    lhs = apply_ffe(a * x + b * y, taps)
    rhs = a * apply_ffe(x, taps) + b * apply_ffe(y, taps)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_lms_identity_already_optimal() -> None:
    out = lms_optimize_ffe(_symbols(512), _identity, 0.01, 2000)
    np.testing.assert_array_equal(out.taps, FfeTaps.cursor_only().taps)


def test_lms_zero_step_returns_init() -> None:
    init = FfeTaps(taps=np.array([0.1, 0.7, 0.1, 0.0]))
    out = lms_optimize_ffe(_symbols(256), _lowpass, 0.0, 1000, init=init)
    np.testing.assert_array_equal(out.taps, init.taps)


def test_lms_converges_on_identity_channel() -> None:
    x = _symbols(4000)
    init = FfeTaps(taps=np.array([0.2, 0.6, 0.2, -0.1]))
    out = lms_optimize_ffe(x, _identity, 1e-2, 10_000, init=init)
    before = symbol_mse(x.levels, init, _identity)
    after = symbol_mse(x.levels, out, _identity)
    assert after < 1e-3 * before


def test_lms_improves_lowpass_channel() -> None:
    x = _symbols(2000)
    out = lms_optimize_ffe(x, _lowpass, 1e-2, 6000)
    cursor = FfeTaps.cursor_only()
    assert symbol_mse(x.levels, out, _lowpass) < symbol_mse(x.levels, cursor, _lowpass)
    # precursor and first postcursor pre-emphasize against the smearing
    assert out.taps[0] < 0 and out.taps[2] < 0


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_lms_divergence_names_step() -> None:
    init = FfeTaps(taps=np.array([0.2, 0.6, 0.2, -0.1]))
    with pytest.raises(FfeDivergenceError, match="step=5"):
        lms_optimize_ffe(_symbols(2000), _identity, 5.0, 20_000, init=init)


def test_lms_negative_step() -> None:
    with pytest.raises(ValueError):
        lms_optimize_ffe(_symbols(16), _identity, -0.1, 10)


def test_channel_estimate_recovers_lowpass() -> None:
    h = estimate_channel_response(_symbols(1000).levels, _lowpass, precursors=2)
    np.testing.assert_allclose(h, [0.0, 0.25, 0.5, 0.25, 0.0, 0.0, 0.0], atol=1e-9)


def test_lms_lowpass_moves_toward_wiener_taps() -> None:
    x = _symbols(2000)
    out = lms_optimize_ffe(x, _lowpass, 1e-2, 6000)
    # 4-tap least-squares inverse of [0.25, 0.5, 0.25] is about
    # [-0.95, 2.74, -1.26, 0.38]; LMS heads there from the cursor
    assert out.taps[1] > 1.5
    assert out.taps[3] > -0.2
    after = symbol_mse(x.levels, out, _lowpass)
    assert after < 0.8 * symbol_mse(x.levels, FfeTaps.cursor_only(), _lowpass)


def test_lms_failure_is_raised_not_reverted() -> None:
    calls = {"n": 0}

    def flips_after_estimate(drive: np.ndarray) -> np.ndarray:
        calls["n"] += 1
        return drive if calls["n"] == 1 else -drive

    with pytest.raises(FfeDivergenceError):
        lms_optimize_ffe(_symbols(512), flips_after_estimate, 1e-3, 300)
