"""Exception hierarchy shared by every vcselemu subpackage.

Each class carries an ``exit_code`` used by the CLI and, for the binary
container errors, a short ``code`` string so callers can tell corruption
modes apart without parsing messages.
"""

from __future__ import annotations

__all__ = [
    "EmulatorError",
    "ConfigError",
    "ExtrapolationError",
    "DataError",
    "EmptyRequestError",
    "LengthError",
    "DegenerateInputError",
    "ShapeError",
    "UnknownBlockError",
    "ContainerError",
    "FormatError",
    "VersionError",
    "TruncatedFileError",
    "ChecksumError",
    "NumericError",
    "IntegrationBlowupError",
    "FfeDivergenceError",
    "TrainingDivergedError",
]


class EmulatorError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class ConfigError(EmulatorError):
    """Invalid, unknown or inconsistent configuration."""

    exit_code = 2


class ExtrapolationError(ConfigError, ValueError):
    """Interpolation requested outside the bracketing voltage pair."""


class DataError(EmulatorError):
    """Bad input data or unreadable artifact."""

    exit_code = 3


class EmptyRequestError(DataError, ValueError):
    pass


class LengthError(DataError, ValueError):
    pass


class DegenerateInputError(DataError, ValueError):
    """Zero-variance input where a spread is required."""


class ShapeError(DataError, ValueError):
    pass


class UnknownBlockError(DataError, KeyError):
    pass


class ContainerError(DataError):
    """Base class for binary container problems."""

    code: str = "container"


class FormatError(ContainerError):
    code = "bad-magic"


class VersionError(ContainerError):
    code = "version"


class TruncatedFileError(ContainerError):
    code = "truncated"


class ChecksumError(ContainerError):
    code = "checksum"


class NumericError(EmulatorError):
    """Numerical failure: blow-up, divergence, non-finite loss."""

    exit_code = 4


class IntegrationBlowupError(NumericError):
    def __init__(self, index: int, detail: str = "") -> None:
        self.index = index
        msg = f"rate-equation state became non-finite at sample {index}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class FfeDivergenceError(NumericError):
    def __init__(self, step: float, mse_start: float, mse_now: float) -> None:
        self.step = step
        super().__init__(
            f"LMS diverged with step={step:g}: window MSE grew from "
            f"{mse_start:.3g} to {mse_now:.3g}"
        )


class TrainingDivergedError(NumericError):
    def __init__(self, epoch: int, batch: int, loss: float) -> None:
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        super().__init__(
            f"non-finite training loss {loss!r} at epoch {epoch}, batch {batch}"
        )
