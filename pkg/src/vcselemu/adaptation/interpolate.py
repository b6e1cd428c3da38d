"""Voltage-linear weight interpolation and weight-trajectory linearity."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from vcselemu.core.errors import ExtrapolationError, LengthError, ShapeError
from vcselemu.dataset.symbols import NormStats
from vcselemu.network.model import BiLstmModel, check_block_names

from .regime_set import RegimeModelSet

__all__ = [
    "interpolate_weights",
    "LinearityReport",
    "weight_trajectory_linearity",
]


def _blend(a: float, b: float, wa: float, wb: float) -> float:
    return wa * a + wb * b


def interpolate_weights(
    a: BiLstmModel,
    b: BiLstmModel,
    v_target: float,
    *,
    include_endpoints: bool = False,
) -> BiLstmModel:
    """Blend every block and the normalization stats linearly in voltage.

    ``block = ((v_b - v)*block_a + (v - v_a)*block_b) / (v_b - v_a)``.

    Raises:
        ExtrapolationError: *v_target* is outside ``(v_a, v_b)`` (or outside
            ``[v_a, v_b]`` with ``include_endpoints``).
        ShapeError: the models do not share a layout.
    """
    va, vb = a.regime_voltage, b.regime_voltage
    if not va < vb:
        raise ExtrapolationError(f"need v_a < v_b, got {va:.3f} V and {vb:.3f} V")
    inside = va <= v_target <= vb if include_endpoints else va < v_target < vb
    if not inside:
        raise ExtrapolationError(
            f"refusing to extrapolate: {v_target:.3f} V is outside "
            f"({va:.3f} V, {vb:.3f} V)"
        )
    if not a.same_layout(b):
        raise ShapeError("cannot interpolate models with different layouts")
    if v_target == va:
        return replace(a.copy(), provenance="interpolated")
    if v_target == vb:
        return replace(b.copy(), provenance="interpolated")
    span = vb - va
    wa, wb = (vb - v_target) / span, (v_target - va) / span
    blocks = {k: (wa * a.blocks[k] + wb * b.blocks[k]) for k in a.blocks}
    return BiLstmModel(
        blocks=blocks,
        hidden_size=a.hidden_size,
        input_stats=NormStats(
            _blend(a.input_stats.mean, b.input_stats.mean, wa, wb),
            _blend(a.input_stats.std, b.input_stats.std, wa, wb),
        ),
        target_stats=NormStats(
            _blend(a.target_stats.mean, b.target_stats.mean, wa, wb),
            _blend(a.target_stats.std, b.target_stats.std, wa, wb),
        ),
        regime_voltage=float(v_target),
        provenance="interpolated",
        gate_order=a.gate_order,
    )


@dataclass(frozen=True, slots=True, eq=False)
class LinearityReport:
    """Distribution of per-element R^2 of straight-line fits over voltage."""

    block_name: str
    voltages: tuple[float, ...]
    r2: NDArray[np.float64]

    @property
    def mean(self) -> float:
        return float(self.r2.mean())

    @property
    def minimum(self) -> float:
        return float(self.r2.min())

    @property
    def quartiles(self) -> tuple[float, float, float]:
        q1, q2, q3 = np.quantile(self.r2, [0.25, 0.5, 0.75])
        return float(q1), float(q2), float(q3)

    def summary(self) -> dict[str, float]:
        q1, q2, q3 = self.quartiles
        return {
            "mean": self.mean,
            "min": self.minimum,
            "q1": q1,
            "median": q2,
            "q3": q3,
            "n_elements": float(self.r2.size),
        }


def weight_trajectory_linearity(
    rs: RegimeModelSet,
    block_name: str,
    v_range: tuple[float, float] | None = None,
) -> LinearityReport:
    """Fit every element of *block_name* against voltage by least squares.

    Elements that do not change with voltage get R^2 = 1.

    Raises:
        LengthError: fewer than 3 models in the selected range.
    """
    check_block_names([block_name])
    entries = [
        e
        for e in rs
        if v_range is None or v_range[0] <= e.voltage <= v_range[1]
    ]
    if len(entries) < 3:
        raise LengthError(
            f"linearity needs at least 3 regimes in range, got {len(entries)}"
        )
    v = np.array([e.voltage for e in entries])
    ys = np.stack([e.model.blocks[block_name].reshape(-1) for e in entries])
    coef = np.polyfit(v, ys, 1)
    fitted = np.outer(v, coef[0]) + coef[1]
    ss_res = np.sum((ys - fitted) ** 2, axis=0)
    ss_tot = np.sum((ys - ys.mean(axis=0)) ** 2, axis=0)
    flat = ss_tot <= 1e-30 * np.maximum(1.0, np.sum(ys * ys, axis=0))
    r2 = np.ones(ys.shape[1])
    r2[~flat] = 1.0 - ss_res[~flat] / ss_tot[~flat]
    return LinearityReport(block_name=block_name, voltages=tuple(v.tolist()), r2=r2)
