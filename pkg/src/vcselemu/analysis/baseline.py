"""Linear-regression reference model over a symmetric symbol window."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from vcselemu.core.errors import EmptyRequestError
from vcselemu.dataset.store import Split, SymbolDataset

from .metrics import nmse

__all__ = [
    "DEFAULT_HALF_WINDOW",
    "RIDGE_LAMBDA",
    "LinearBaseline",
    "window_features",
    "fit_linear_baseline",
]

logger = logging.getLogger(__name__)

DEFAULT_HALF_WINDOW = 7
RIDGE_LAMBDA = 1e-8


def window_features(x: NDArray[np.float64], half_window: int) -> NDArray[np.float64]:
    """Per-sample input windows ``x[t-hw .. t+hw]``, zero-padded inside each word.

    *x* is ``(B, T)``; the result is ``(B*T, 2*hw + 1)``.
    """
    if half_window < 0:
        raise ValueError("half_window must be >= 0")
    n_words, steps = x.shape
    padded = np.pad(x, ((0, 0), (half_window, half_window)))
    cols = [padded[:, k : k + steps] for k in range(2 * half_window + 1)]
    return np.stack(cols, axis=-1).reshape(n_words * steps, -1)


@dataclass(frozen=True, slots=True, eq=False)
class LinearBaseline:
    """Fitted FIR taps (oldest offset first) and intercept."""

    coefficients: NDArray[np.float64]
    intercept: float
    half_window: int
    ridge_used: bool = False

    def predict(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Predictions ``(B, T)`` for input words ``(B, T)``."""
        feats = window_features(x, self.half_window)
        return (feats @ self.coefficients + self.intercept).reshape(x.shape)

    def nmse_on(self, dataset: SymbolDataset, split: Split = "test") -> float:
        x, y = dataset.words(split)
        return nmse(self.predict(x), y)


def fit_linear_baseline(
    dataset: SymbolDataset, half_window: int = DEFAULT_HALF_WINDOW
) -> LinearBaseline:
    """Least-squares FIR from the input window to the target, on the train split.

    Solved through the normal equations; a singular system falls back to a
    ridge solve with ``RIDGE_LAMBDA`` and sets ``ridge_used``.
    """
    x, y = dataset.words("train")
    if x.shape[0] == 0:
        raise EmptyRequestError("train split is empty")
    feats = window_features(x, half_window)
    design = np.column_stack([feats, np.ones(feats.shape[0])])
    gram = design.T @ design
    rhs = design.T @ y.reshape(-1)
    ridge = False
    try:
        sol = linalg.solve(gram, rhs, assume_a="pos")
        if not np.isfinite(sol).all():
            raise linalg.LinAlgError("non-finite solution")
    except (linalg.LinAlgError, ValueError):
        ridge = True
    else:
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(gram)
        ridge = not np.isfinite(cond) or cond > 1e14
    if ridge:
        logger.warning(
            "normal equations are singular; using ridge lambda=%g", RIDGE_LAMBDA
        )
        sol = linalg.solve(gram + RIDGE_LAMBDA * np.eye(gram.shape[0]), rhs)
    return LinearBaseline(
        coefficients=sol[:-1].copy(),
        intercept=float(sol[-1]),
        half_window=half_window,
        ridge_used=ridge,
    )
