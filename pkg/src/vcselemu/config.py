"""Runtime configuration helpers.

Resolves the configuration for one run from three layers: the packaged
``config/default.yml``, an optional user YAML file merged over it section by
section, and CLI overrides given as dotted keys (``"analysis.trials"``).
"""

from __future__ import annotations

import copy
import hashlib
import json
import logging
import os
from importlib import resources
from typing import Any, Mapping

import yaml

from .core.errors import ConfigError
from .settings.schema import RunConfig
from .settings.store import ConfigStore

__all__ = ["default_config_data", "make_run_config", "config_hash", "merge_sections"]

logger = logging.getLogger(__name__)


def default_config_data() -> dict[str, Any]:
    """Parsed contents of the packaged default config."""
    text = (
        resources.files("vcselemu")
        .joinpath("config", "default.yml")
        .read_text(encoding="utf-8")
    )
    data = yaml.safe_load(text)
    assert isinstance(data, dict)
    return data


def merge_sections(base: Mapping[str, Any], over: Mapping[str, Any]) -> dict[str, Any]:
    """Merge *over* into a copy of *base*; mappings merge, leaves replace."""
    out = copy.deepcopy(dict(base))
    for key, value in over.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), Mapping):
            out[key] = merge_sections(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _set_dotted(data: dict[str, Any], dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node = data
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"{dotted}: {part} is not a section")
        node = child
    node[parts[-1]] = value


def make_run_config(
    path: str | os.PathLike[str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Build the resolved :class:`RunConfig`.

    *overrides* map dotted keys to values; ``None`` values are skipped so an
    argparse namespace can be passed through unfiltered.
    """
    data = default_config_data()
    if path is not None:
        data = merge_sections(data, ConfigStore.read_yaml(path))
        logger.info("loaded config %s", path)
    for key, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, key, value)
    return ConfigStore.validate(data, source=path)


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON dump of *config*."""
    canonical = json.dumps(config.model_dump(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
