from __future__ import annotations

import numpy as np
import pytest

from vcselemu.analysis import fit_linear_baseline, window_features
from vcselemu.core.errors import EmptyRequestError


def _words(n_words: int = 30, length: int = 20, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.choice([-1.0, -1 / 3, 1 / 3, 1.0], size=(n_words, length))


def test_window_features_zero_pad() -> None:
    x = np.array([[1.0, 2.0, 3.0]])
    feats = window_features(x, 1)
    np.testing.assert_array_equal(feats, [[0, 1, 2], [1, 2, 3], [2, 3, 0]])
    with pytest.raises(ValueError):
        window_features(x, -1)


def test_identity_data(identity_dataset) -> None:
    x = _words()
    base = fit_linear_baseline(identity_dataset(x, x, n_train=20), half_window=0)
    assert base.coefficients[0] == pytest.approx(1.0, abs=1e-9)
    assert base.intercept == pytest.approx(0.0, abs=1e-9)
    assert base.nmse_on(identity_dataset(x, x, n_train=20)) < 1e-12


def test_recovers_known_fir(identity_dataset) -> None:
    x = _words()
    taps = np.array([0.1, -0.2, 0.9, 0.3, -0.05])
    y = (window_features(x, 2) @ taps + 0.25).reshape(x.shape)
    base = fit_linear_baseline(identity_dataset(x, y, n_train=20), half_window=2)
    np.testing.assert_allclose(base.coefficients, taps, atol=1e-6)
    assert base.intercept == pytest.approx(0.25, abs=1e-6)
    assert not base.ridge_used


def test_wider_window_never_worse_on_train(tiny_dataset) -> None:
    x, y = tiny_dataset.words("train")
    errors = []
    for hw in (0, 1, 3):
        base = fit_linear_baseline(tiny_dataset, half_window=hw)
        errors.append(float(np.mean((base.predict(x) - y) ** 2)))
    assert errors[0] >= errors[1] - 1e-12
    assert errors[1] >= errors[2] - 1e-12


def test_singular_system_falls_back_to_ridge(identity_dataset) -> None:
    x = np.ones((10, 8))
    y = _words(10, 8)
    base = fit_linear_baseline(identity_dataset(x, y, n_train=8), half_window=0)
    assert base.ridge_used
    assert np.isfinite(base.coefficients).all()


def test_empty_train_split(identity_dataset) -> None:
    x = _words(4, 8)
    with pytest.raises(EmptyRequestError):
        fit_linear_baseline(identity_dataset(x, x, n_train=0), half_window=1)
