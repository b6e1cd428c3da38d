"""Output directory layout and the run manifest.

::

    <out>/config.yml              resolved configuration of the last run
    <out>/datasets/regime_1.40V.vemu
    <out>/models/<kind>/regime_1.40V.vemw
    <out>/models/chain/           regime set (own manifest)
    <out>/reports/<name>.txt|.tsv
    <out>/manifest.txt            kind, path, regime_v, seed, config_sha256, crc32
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .core.codec import file_crc32
from .core.errors import DataError

__all__ = ["MANIFEST_NAME", "ManifestEntry", "Workspace"]

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    kind: str
    path: str
    regime_v: float | None
    seed: int
    config_sha256: str
    crc32: int

    def line(self) -> str:
        volt = "-" if self.regime_v is None else f"{self.regime_v:.6f}"
        return "\t".join(
            [
                self.kind,
                self.path,
                volt,
                str(self.seed),
                self.config_sha256,
                f"{self.crc32:08x}",
            ]
        )

    @classmethod
    def parse(cls, line: str) -> "ManifestEntry":
        parts = line.split("\t")
        if len(parts) != 6:
            raise ValueError("expected 6 tab-separated fields")
        kind, path, volt, seed, sha, crc = parts
        return cls(
            kind=kind,
            path=path,
            regime_v=None if volt == "-" else float(volt),
            seed=int(seed),
            config_sha256=sha,
            crc32=int(crc, 16),
        )


@dataclass(slots=True)
class Workspace:
    """Paths under one output directory plus its manifest entries.

    Entries are keyed by relative path; recording a path again replaces the
    previous line in place so reruns give the same manifest.
    """

    root: Path
    entries: dict[str, ManifestEntry] = field(default_factory=dict)

    @classmethod
    def open(cls, root: str | os.PathLike[str]) -> "Workspace":
        ws = cls(Path(root))
        manifest = ws.root / MANIFEST_NAME
        if manifest.is_file():
            text = manifest.read_text(encoding="utf-8")
            for lineno, line in enumerate(text.splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    entry = ManifestEntry.parse(line)
                except ValueError as exc:
                    raise DataError(f"{manifest}:{lineno}: {exc}") from exc
                ws.entries[entry.path] = entry
        return ws

    def dataset_path(self, voltage: float) -> Path:
        return self.root / "datasets" / f"regime_{voltage:.2f}V.vemu"

    def model_dir(self, kind: str) -> Path:
        return self.root / "models" / kind

    def model_path(self, kind: str, voltage: float) -> Path:
        return self.model_dir(kind) / f"regime_{voltage:.2f}V.vemw"

    def report_path(self, name: str) -> Path:
        return self.root / "reports" / name

    def prepare(self) -> None:
        try:
            for sub in ("datasets", "models", "reports"):
                (self.root / sub).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DataError(
                f"{self.root}: cannot create output directory ({exc})"
            ) from exc

    def record(
        self,
        kind: str,
        path: Path,
        *,
        regime_v: float | None,
        seed: int,
        config_sha256: str,
    ) -> ManifestEntry:
        rel = path.relative_to(self.root).as_posix()
        crc = file_crc32(path)
        entry = ManifestEntry(kind, rel, regime_v, seed, config_sha256, crc)
        self.entries[rel] = entry
        logger.debug("manifest: %s", entry.line())
        return entry

    def save(self) -> Path:
        manifest = self.root / MANIFEST_NAME
        tmp = manifest.with_suffix(".tmp")
        body = "".join(e.line() + "\n" for e in self.entries.values())
        tmp.write_text(body, encoding="utf-8")
        os.replace(tmp, manifest)
        return manifest
