"""YAML persistence for :class:`RunConfig`."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Mapping

import yaml
from pydantic import ValidationError

from vcselemu.core.errors import ConfigError

from .schema import RunConfig

__all__ = ["ConfigStore"]


def _key_line(node: yaml.Node | None, loc: tuple[Any, ...]) -> int | None:
    """1-based YAML line of the deepest key along *loc* that exists."""
    line: int | None = None
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                if k.value == str(part):
                    line = k.start_mark.line + 1
                    node = v
                    break
            else:
                return line
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if part >= len(node.value):
                return line
            node = node.value[part]
            line = node.start_mark.line + 1
        else:
            return line
    return line


class ConfigStore:
    """Load and save run configurations as YAML files."""

    @staticmethod
    def read_yaml(path: str | os.PathLike[str]) -> dict[str, Any]:
        """Parse *path* into a mapping; an empty file is an empty mapping."""
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"{p}: cannot read config ({exc.strerror})") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{p}: invalid YAML: {exc}") from exc
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: top level must be a mapping")
        return data

    @staticmethod
    def validate(
        data: Mapping[str, Any], source: str | os.PathLike[str] | None = None
    ) -> RunConfig:
        """Build a :class:`RunConfig`, reporting the first bad key by dotted path.

        When *source* names a YAML file the message carries the line of the
        offending key in that file.
        """
        try:
            return RunConfig.model_validate(dict(data))
        except ValidationError as exc:
            err = exc.errors()[0]
            loc = tuple(err["loc"])
            key = ".".join(str(p) for p in loc) or "<root>"
            if err["type"] == "extra_forbidden":
                detail = "unknown key"
            else:
                detail = err["msg"]
            where = ""
            if source is not None:
                where = f"{source}: "
                try:
                    root = yaml.compose(Path(source).read_text(encoding="utf-8"))
                except (OSError, yaml.YAMLError):
                    root = None
                line = _key_line(root, loc)
                if line is not None:
                    where = f"{source}:{line}: "
            raise ConfigError(f"{where}{key}: {detail}") from exc

    @classmethod
    def load(cls, path: str | os.PathLike[str]) -> RunConfig:
        return cls.validate(cls.read_yaml(path), source=path)

    @staticmethod
    def save(config: RunConfig, path: str | os.PathLike[str]) -> Path:
        """Atomically write the resolved *config* as YAML."""
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(p.suffix + ".tmp")
        tmp.write_text(
            yaml.safe_dump(config.model_dump(), sort_keys=False),
            encoding="utf-8",
        )
        os.replace(tmp, p)
        return p
