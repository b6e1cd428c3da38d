"""Tests for the time source abstraction."""

import pytest

from vcselemu.core.time import RealTimeSource, SimTimeSource, TimeSource


class TestTimeSource:
    """TimeSource protocol compliance."""

    def test_real_time_source_implements_protocol(self) -> None:
        ts: TimeSource = RealTimeSource()
        assert hasattr(ts, "monotonic")

    def test_sim_time_source_implements_protocol(self) -> None:
        ts: TimeSource = SimTimeSource()
        assert hasattr(ts, "monotonic")


class TestRealTimeSource:
    def test_monotonic_returns_float(self) -> None:
        assert isinstance(RealTimeSource().monotonic(), float)

    def test_monotonic_never_goes_backwards(self) -> None:
        ts = RealTimeSource()
        a = ts.monotonic()
        b = ts.monotonic()
        assert b >= a


class TestSimTimeSource:
    """Deterministic simulated clock."""

    def test_default_start(self) -> None:
        assert SimTimeSource().monotonic() == 0.0

    def test_custom_start(self) -> None:
        assert SimTimeSource(start=5.0).monotonic() == 5.0

    def test_advance(self) -> None:
        ts = SimTimeSource()
        ts.advance(1.5)
        assert ts.monotonic() == 1.5
        ts.advance(0.25)
        assert ts.monotonic() == 1.75

    def test_advance_negative_raises(self) -> None:
        ts = SimTimeSource()
        with pytest.raises(ValueError, match="negative"):
            ts.advance(-1.0)

    def test_set_time_forward_only(self) -> None:
        ts = SimTimeSource(start=2.0)
        ts.set_time(3.0)
        assert ts.monotonic() == 3.0
        with pytest.raises(ValueError, match="backwards"):
            ts.set_time(1.0)

    def test_tick_gives_fixed_duration_per_measurement(self) -> None:
        ts = SimTimeSource(tick=0.5)
        t0 = ts.monotonic()
        t1 = ts.monotonic()
        assert t1 - t0 == 0.5
