"""Time abstraction for deterministic and real-time clock sources.

Training reports and the benchmark harness read durations through a
TimeSource so tests can substitute a simulated clock.

Usage examples:

Real-time usage:
    ts = RealTimeSource()
    start = ts.monotonic()
    run_something()
    elapsed = ts.monotonic() - start

Simulated time usage:
    ts = SimTimeSource(start=0.0)
    ts.advance(5.0)
    assert ts.monotonic() == 5.0
"""

from __future__ import annotations

import time
from typing import Protocol

__all__ = [
    "TimeSource",
    "RealTimeSource",
    "SimTimeSource",
]


class TimeSource(Protocol):
    """Protocol for time sources supporting monotonic time."""

    def monotonic(self) -> float:
        """Return monotonic time in seconds (suitable for measuring durations)."""
        ...


class RealTimeSource:
    """Real-time implementation backed by the high-resolution counter."""

    def monotonic(self) -> float:
        """Return monotonic time from time.perf_counter()."""
        return time.perf_counter()


class SimTimeSource:
    """Deterministic simulated clock.

    Features:
    - Starts at configurable time (default t0=0.0)
    - advance(dt) steps time forward
    - set_time(t) sets absolute sim time (forward only)
    - an optional ``tick`` is added on every read, so code that measures
      ``end - start`` sees a fixed, known duration per measurement
    """

    def __init__(self, *, start: float = 0.0, tick: float = 0.0) -> None:
        """Initialize simulated time source.

        Args:
            start: Starting monotonic time value
            tick: Seconds added after every monotonic() read
        """
        self._monotonic_time: float = float(start)
        self._tick = float(tick)

    def monotonic(self) -> float:
        """Return current simulated monotonic time."""
        now = self._monotonic_time
        self._monotonic_time += self._tick
        return now

    def advance(self, dt: float) -> None:
        """Advance simulated time by *dt* seconds.

        Raises:
            ValueError: If dt is negative
        """
        if dt < 0:
            raise ValueError(f"Cannot advance time by negative amount: {dt}")
        self._monotonic_time += dt

    def set_time(self, t: float) -> None:
        """Set absolute simulated time (forward only).

        Raises:
            ValueError: If t < current monotonic time
        """
        if t < self._monotonic_time:
            raise ValueError(f"Cannot set time backwards: {t} < {self._monotonic_time}")
        self._monotonic_time = float(t)
