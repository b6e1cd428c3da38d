"""Run configuration schema and YAML store."""

from .schema import (
    AdaptConfig,
    AnalysisConfig,
    DatasetConfig,
    PhysicsConfig,
    RunConfig,
    SignalConfig,
)
from .store import ConfigStore

__all__ = [
    "AdaptConfig",
    "AnalysisConfig",
    "ConfigStore",
    "DatasetConfig",
    "PhysicsConfig",
    "RunConfig",
    "SignalConfig",
]
