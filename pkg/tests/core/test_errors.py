from __future__ import annotations

import pytest

from vcselemu.core.errors import (
    ChecksumError,
    ConfigError,
    ContainerError,
    DataError,
    DegenerateInputError,
    EmulatorError,
    ExtrapolationError,
    FfeDivergenceError,
    FormatError,
    IntegrationBlowupError,
    LengthError,
    NumericError,
    TrainingDivergedError,
    TruncatedFileError,
    UnknownBlockError,
    VersionError,
)


@pytest.mark.parametrize(
    ("exc", "code"),
    [
        (ConfigError("x"), 2),
        (ExtrapolationError("x"), 2),
        (DataError("x"), 3),
        (LengthError("x"), 3),
        (ChecksumError("x"), 3),
        (IntegrationBlowupError(5), 4),
        (FfeDivergenceError(0.5, 1.0, 20.0), 4),
        (TrainingDivergedError(3, 1, float("nan")), 4),
    ],
)
def test_exit_codes(exc: EmulatorError, code: int) -> None:
    assert exc.exit_code == code


def test_container_codes_are_distinct() -> None:
    codes = {
        cls.code
        for cls in (FormatError, VersionError, TruncatedFileError, ChecksumError)
    }
    assert len(codes) == 4
    assert all(issubclass(c, ContainerError) for c in (FormatError, ChecksumError))


def test_api_errors_are_catchable_as_builtins() -> None:
    with pytest.raises(ValueError):
        raise DegenerateInputError("flat")
    with pytest.raises(KeyError):
        raise UnknownBlockError("w_nope")
    with pytest.raises(ValueError):
        raise ExtrapolationError("outside")


def test_numeric_errors_carry_context() -> None:
    blow = IntegrationBlowupError(42, "S < 0")
    assert blow.index == 42
    assert "42" in str(blow) and "S < 0" in str(blow)

    div = FfeDivergenceError(0.3, 0.1, 5.0)
    assert div.step == 0.3
    assert "step=0.3" in str(div)

    tr = TrainingDivergedError(7, 2, float("inf"))
    assert (tr.epoch, tr.batch) == (7, 2)
    assert isinstance(tr, NumericError)
