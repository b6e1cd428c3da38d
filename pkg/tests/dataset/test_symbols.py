from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vcselemu.core.errors import DegenerateInputError, LengthError
from vcselemu.dataset import (
    NormStats,
    decimate_to_symbol_rate,
    denormalize,
    make_words,
    normalize,
)
from vcselemu.physics import WaveformPair

RATE = 53.125e9


def _pair(n_symbols: int, sps: int = 4) -> WaveformPair:
    drive = np.repeat(np.arange(n_symbols, dtype=np.float64), sps)
    received = np.arange(n_symbols * sps, dtype=np.float64)
    return WaveformPair(drive, received, 1 / (RATE * sps), sps, 1.4, RATE)


def test_decimate_picks_phase() -> None:
    x, y = decimate_to_symbol_rate(_pair(5), phase=2)
    np.testing.assert_array_equal(x, np.arange(5))
    np.testing.assert_array_equal(y, [2, 6, 10, 14, 18])


@pytest.mark.parametrize("phase", [-1, 4])
def test_decimate_phase_range(phase: int) -> None:
    with pytest.raises(ValueError):
        decimate_to_symbol_rate(_pair(3), phase)


@given(
    arrays(
        np.float64,
        st.integers(2, 200),
        elements=st.floats(-1e3, 1e3, allow_nan=False),
    )
)
@settings(max_examples=50, deadline=None)
def test_normalize_roundtrips(x: np.ndarray) -> None:
    if np.ptp(x) < 1e-6:
        return
    z, stats = normalize(x)
    assert abs(z.mean()) < 1e-9
    assert z.std() == pytest.approx(1.0, rel=1e-9)
    np.testing.assert_allclose(denormalize(z, stats), x, atol=1e-9)


def test_normalize_with_given_stats() -> None:
    z, stats = normalize([1.0, 3.0], NormStats(1.0, 2.0))
    np.testing.assert_array_equal(z, [0.0, 1.0])
    assert stats == NormStats(1.0, 2.0)


def test_zero_variance_rejected() -> None:
    with pytest.raises(DegenerateInputError):
        normalize(np.ones(10))
    with pytest.raises(LengthError):
        NormStats.of([])
    with pytest.raises(ValueError):
        NormStats(0.0, 0.0)


def test_make_words_drops_remainder() -> None:
    x = np.arange(170, dtype=np.float64)
    words = make_words(x, -x, 80)
    assert len(words) == 2
    assert words[1].index == 80
    np.testing.assert_array_equal(words[1].x, np.arange(80, 160))
    np.testing.assert_array_equal(words[0].y, -np.arange(80))


def test_make_words_too_short() -> None:
    with pytest.raises(LengthError):
        make_words(np.zeros(10), np.zeros(10), 80)
    with pytest.raises(LengthError):
        make_words(np.zeros(10), np.zeros(9), 5)
