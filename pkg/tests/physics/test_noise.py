from __future__ import annotations

import numpy as np
import pytest

from vcselemu.physics import noise_stream


def test_same_key_same_stream() -> None:
    a = noise_stream(5, 2, 1).standard_normal(16)
    b = noise_stream(5, 2, 1).standard_normal(16)
    np.testing.assert_array_equal(a, b)


def test_stream_independent_of_draw_order() -> None:
    first = noise_stream(5, 0).standard_normal(8)
    noise_stream(5, 1).standard_normal(1000)
    again = noise_stream(5, 0).standard_normal(8)
    np.testing.assert_array_equal(first, again)


@pytest.mark.parametrize("key", [(6, 2, 1), (5, 3, 1), (5, 2, 0)])
def test_distinct_keys_differ(key: tuple[int, int, int]) -> None:
    base = noise_stream(5, 2, 1).standard_normal(16)
    other = noise_stream(*key).standard_normal(16)
    assert not np.array_equal(base, other)


def test_negative_key_rejected() -> None:
    with pytest.raises(ValueError):
        noise_stream(-1, 0)
