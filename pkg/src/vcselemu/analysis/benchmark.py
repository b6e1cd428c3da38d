"""Wall-clock comparison of the rate-equation oracle and the emulator."""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from vcselemu.core.time import RealTimeSource, TimeSource
from vcselemu.dataset.symbols import decimate_to_symbol_rate
from vcselemu.network.model import BiLstmModel, init_model
from vcselemu.network.train import emulate
from vcselemu.physics.link import (
    DEFAULT_PHASE,
    DEFAULT_SPS,
    WaveformPair,
    simulate_link,
)
from vcselemu.physics.noise import noise_stream
from vcselemu.physics.params import ReceiverParams, VcselParams
from vcselemu.signal import FfeTaps, generate_prbs, map_pam4

__all__ = [
    "TIMED_RUNS",
    "BenchmarkRow",
    "BenchmarkReport",
    "time_median",
    "rate_equation_benchmark",
]

logger = logging.getLogger(__name__)

TIMED_RUNS = 3


@dataclass(frozen=True, slots=True)
class BenchmarkRow:
    regime_voltage: float
    oracle_samples: int
    oracle_time_s: float
    emulator_samples: int
    emulator_time_s: float

    @property
    def speedup(self) -> float:
        if self.emulator_time_s <= 0:
            return float("inf")
        return self.oracle_time_s / self.emulator_time_s

    def record(self, label: str | None = None) -> dict[str, object]:
        return {
            "regime": label if label is not None else f"{self.regime_voltage:.2f}V",
            "oracle_samples": self.oracle_samples,
            "oracle_time_s": self.oracle_time_s,
            "emulator_samples": self.emulator_samples,
            "emulator_time_s": self.emulator_time_s,
            "speedup": self.speedup,
        }


@dataclass(slots=True)
class BenchmarkReport:
    n_symbols: int
    rows: list[BenchmarkRow] = field(default_factory=list)

    @property
    def totals(self) -> BenchmarkRow:
        return BenchmarkRow(
            regime_voltage=float("nan"),
            oracle_samples=sum(r.oracle_samples for r in self.rows),
            oracle_time_s=sum(r.oracle_time_s for r in self.rows),
            emulator_samples=sum(r.emulator_samples for r in self.rows),
            emulator_time_s=sum(r.emulator_time_s for r in self.rows),
        )

    def records(self) -> list[dict[str, object]]:
        return [r.record() for r in self.rows] + [self.totals.record("total")]


def time_median(
    fn: Callable[[], object],
    ts: TimeSource,
    runs: int = TIMED_RUNS,
    *,
    warmup: bool = True,
) -> float:
    """Median duration of *runs* calls, after one discarded warm-up call."""
    if warmup:
        fn()
    durations = []
    for _ in range(runs):
        t0 = ts.monotonic()
        fn()
        durations.append(ts.monotonic() - t0)
    return float(statistics.median(durations))


def rate_equation_benchmark(
    n_symbols: int,
    regimes: Sequence[float],
    params: VcselParams,
    rx: ReceiverParams,
    *,
    models: Mapping[float, BiLstmModel] | BiLstmModel | None = None,
    taps: FfeTaps | None = None,
    modulation_vpp: float = 0.24,
    symbol_rate_hz: float = 53.125e9,
    seed: int = 0,
    sps: int = DEFAULT_SPS,
    time_source: TimeSource | None = None,
) -> BenchmarkReport:
    """Time oracle simulation against emulator inference for each regime.

    The oracle integrates ``sps`` samples per symbol with noise on; the
    emulator runs at one sample per symbol. Without trained *models* a
    randomly initialized network of the default size is timed.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    ts = time_source or RealTimeSource()
    ffe = taps or FfeTaps.cursor_only()
    bits = generate_prbs(seed & 0xFFFFFFFF, 2 * n_symbols)
    symbols = map_pam4(bits, symbol_rate_hz=symbol_rate_hz)
    fallback = init_model(np.random.default_rng(seed))
    report = BenchmarkReport(n_symbols=n_symbols)
    for idx, v in enumerate(regimes):
        if isinstance(models, BiLstmModel):
            model = models
        elif models is not None and v in models:
            model = models[v]
        else:
            model = fallback

        def oracle() -> WaveformPair:
            rng = noise_stream(seed, idx)
            return simulate_link(
                symbols, ffe, params, rx, v, modulation_vpp, rng, sps=sps
            )

        # this first run doubles as the warm-up
        pair = oracle()
        drive, _ = decimate_to_symbol_rate(pair, min(DEFAULT_PHASE, sps - 1))

        def emulator() -> object:
            return emulate(model, drive)

        row = BenchmarkRow(
            regime_voltage=float(v),
            oracle_samples=pair.drive.size,
            oracle_time_s=time_median(oracle, ts, warmup=False),
            emulator_samples=drive.size,
            emulator_time_s=time_median(emulator, ts),
        )
        logger.info(
            "benchmark %.2f V: oracle %.3fs, emulator %.3fs (x%.1f)",
            v,
            row.oracle_time_s,
            row.emulator_time_s,
            row.speedup,
        )
        report.rows.append(row)
    return report
