"""Bi-LSTM forward pass and exact backpropagation through time.

Everything is batched over words: inputs have shape ``(B, T)``, hidden and
cell states ``(B, H)``. Each direction starts every word from zero state.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import expit

from vcselemu.core.errors import LengthError

from .model import BLOCK_NAMES, BiLstmModel, Blocks

__all__ = [
    "lstm_cell_step",
    "forward",
    "forward_batch",
    "mse_loss",
    "backward",
    "backward_batch",
]

Array = NDArray[np.float64]


def lstm_cell_step(
    x_t: ArrayLike,
    h_prev: Array,
    c_prev: Array,
    w_in: Array,
    w_rec: Array,
    b: Array,
) -> tuple[Array, Array]:
    """One LSTM step; ``x_t`` is a scalar or a ``(B,)`` batch."""
    h, c, _ = _step(np.asarray(x_t, dtype=np.float64), h_prev, c_prev, w_in, w_rec, b)
    return h, c


def _step(
    x_t: Array, h_prev: Array, c_prev: Array, w_in: Array, w_rec: Array, b: Array
) -> tuple[Array, Array, tuple[Array, Array, Array, Array]]:
    hs = w_rec.shape[0]
    a = np.multiply.outer(x_t, w_in[0]) + h_prev @ w_rec + b
    i = expit(a[..., :hs])
    f = expit(a[..., hs : 2 * hs])
    g = np.tanh(a[..., 2 * hs : 3 * hs])
    o = expit(a[..., 3 * hs :])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c, (i, f, g, o)


@dataclass(slots=True)
class _DirectionCache:
    """Per-time-step states in time order (not processing order)."""

    h: Array  # (T, B, H)
    c: Array
    i: Array
    f: Array
    g: Array
    o: Array
    order: range


def _run_direction(
    x: Array, w_in: Array, w_rec: Array, b: Array, reverse: bool
) -> _DirectionCache:
    n_words, steps = x.shape
    hs = w_rec.shape[0]
    shape = (steps, n_words, hs)
    cache = _DirectionCache(
        h=np.empty(shape),
        c=np.empty(shape),
        i=np.empty(shape),
        f=np.empty(shape),
        g=np.empty(shape),
        o=np.empty(shape),
        order=range(steps - 1, -1, -1) if reverse else range(steps),
    )
    h = np.zeros((n_words, hs))
    c = np.zeros((n_words, hs))
    for t in cache.order:
        h, c, (i, f, g, o) = _step(x[:, t], h, c, w_in, w_rec, b)
        cache.h[t], cache.c[t] = h, c
        cache.i[t], cache.f[t], cache.g[t], cache.o[t] = i, f, g, o
    return cache


def _as_batch(x: ArrayLike) -> Array:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise LengthError(f"expected a (words, steps) array, got shape {arr.shape}")
    return arr


def _readout(model: BiLstmModel, fwd: _DirectionCache, bwd: _DirectionCache) -> Array:
    hs = model.hidden_size
    w_fc = model.blocks["w_fc"][:, 0]
    y = fwd.h @ w_fc[:hs] + bwd.h @ w_fc[hs:] + model.blocks["b_fc"][0]
    return np.ascontiguousarray(y.T)  # (B, T)


def forward_batch(model: BiLstmModel, x: ArrayLike) -> Array:
    """Predictions ``(B, T)`` for a batch of normalized input words."""
    xb = _as_batch(x)
    bl = model.blocks
    fwd = _run_direction(
        xb, bl["w_in_fwd"], bl["w_rec_fwd"], bl["b_fwd"], reverse=False
    )
    bwd = _run_direction(xb, bl["w_in_bwd"], bl["w_rec_bwd"], bl["b_bwd"], reverse=True)
    return _readout(model, fwd, bwd)


def forward(word: ArrayLike, model: BiLstmModel) -> Array:
    """Many-to-many prediction for a single word."""
    x = np.asarray(word, dtype=np.float64)
    if x.ndim != 1:
        raise LengthError("a word must be one-dimensional")
    return forward_batch(model, x[None, :])[0]


def mse_loss(pred: ArrayLike, target: ArrayLike) -> float:
    p = np.asarray(pred, dtype=np.float64)
    y = np.asarray(target, dtype=np.float64)
    if p.shape != y.shape:
        raise LengthError(f"prediction {p.shape} and target {y.shape} differ")
    if p.size == 0:
        raise LengthError("empty sequences")
    return float(np.mean((p - y) ** 2))


def _direction_grads(
    x: Array,
    cache: _DirectionCache,
    dh_out: Array,
    w_rec: Array,
) -> tuple[Array, Array, Array]:
    n_words = x.shape[0]
    hs = w_rec.shape[0]
    dw_in = np.zeros((1, 4 * hs))
    dw_rec = np.zeros_like(w_rec)
    db = np.zeros(4 * hs)
    dh_next = np.zeros((n_words, hs))
    dc_next = np.zeros((n_words, hs))
    zeros = np.zeros((n_words, hs))
    order = list(cache.order)
    for pos in range(len(order) - 1, -1, -1):
        t = order[pos]
        if pos > 0:
            h_prev, c_prev = cache.h[order[pos - 1]], cache.c[order[pos - 1]]
        else:
            h_prev, c_prev = zeros, zeros
        i, f, g, o = cache.i[t], cache.f[t], cache.g[t], cache.o[t]
        tanh_c = np.tanh(cache.c[t])

        dh = dh_out[t] + dh_next
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        da = np.concatenate(
            [
                dc * g * i * (1.0 - i),
                dc * c_prev * f * (1.0 - f),
                dc * i * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dw_in[0] += x[:, t] @ da
        dw_rec += h_prev.T @ da
        db += da.sum(axis=0)
        dh_next = da @ w_rec.T
        dc_next = dc * f
    return dw_in, dw_rec, db


def _shard_grads(
    model: BiLstmModel, x: Array, y: Array, scale: float
) -> tuple[float, Blocks]:
    """Summed loss and gradients of ``scale * sum_words mse(word)``."""
    bl = model.blocks
    hs = model.hidden_size
    steps = x.shape[1]
    fwd = _run_direction(x, bl["w_in_fwd"], bl["w_rec_fwd"], bl["b_fwd"], reverse=False)
    bwd = _run_direction(x, bl["w_in_bwd"], bl["w_rec_bwd"], bl["b_bwd"], reverse=True)
    pred = _readout(model, fwd, bwd)
    err = pred - y
    loss_sum = float(np.sum(err * err)) / steps

    dy = (2.0 * scale / steps) * err.T  # (T, B)
    w_fc = bl["w_fc"][:, 0]
    grads: Blocks = {
        "w_fc": np.concatenate(
            [np.einsum("tb,tbh->h", dy, fwd.h), np.einsum("tb,tbh->h", dy, bwd.h)]
        )[:, None],
        "b_fc": np.array([dy.sum()]),
    }
    dh_f = dy[:, :, None] * w_fc[:hs]
    dh_b = dy[:, :, None] * w_fc[hs:]
    grads["w_in_fwd"], grads["w_rec_fwd"], grads["b_fwd"] = _direction_grads(
        x, fwd, dh_f, bl["w_rec_fwd"]
    )
    grads["w_in_bwd"], grads["w_rec_bwd"], grads["b_bwd"] = _direction_grads(
        x, bwd, dh_b, bl["w_rec_bwd"]
    )
    return loss_sum, grads


def backward_batch(
    model: BiLstmModel,
    x: ArrayLike,
    y: ArrayLike,
    *,
    shard_words: int = 250,
    threads: int = 1,
) -> tuple[float, Blocks]:
    """Mean per-word MSE over the batch and its exact gradients.

    The batch is cut into fixed shards of ``shard_words`` words whose partial
    sums are added in shard order, so the result does not depend on
    ``threads``.
    """
    xb = _as_batch(x)
    yb = _as_batch(y)
    if xb.shape != yb.shape:
        raise LengthError(f"inputs {xb.shape} and targets {yb.shape} differ")
    if shard_words < 1:
        raise ValueError("shard_words must be >= 1")
    n_words = xb.shape[0]
    scale = 1.0 / n_words
    bounds = [
        (s, min(s + shard_words, n_words)) for s in range(0, n_words, shard_words)
    ]

    def run(span: tuple[int, int]) -> tuple[float, Blocks]:
        lo, hi = span
        return _shard_grads(model, xb[lo:hi], yb[lo:hi], scale)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(bounds))) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]

    loss_sum, grads = parts[0]
    grads = {k: v.copy() for k, v in grads.items()}
    for part_loss, part in parts[1:]:
        loss_sum += part_loss
        for k in BLOCK_NAMES:
            grads[k] += part[k]
    return loss_sum * scale, grads


def backward(word_x: ArrayLike, word_y: ArrayLike, model: BiLstmModel) -> Blocks:
    """Gradients of ``mse_loss(forward(word_x), word_y)`` for one word."""
    x = np.asarray(word_x, dtype=np.float64)
    y = np.asarray(word_y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthError("word input and target must be equal-length 1-D sequences")
    _, grads = backward_batch(model, x[None, :], y[None, :])
    return grads
