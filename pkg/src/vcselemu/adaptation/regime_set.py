"""Ordered collection of per-regime models and its on-disk directory form."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, cast, get_args

from vcselemu.core.codec import file_crc32
from vcselemu.core.errors import ChecksumError, DataError, ShapeError
from vcselemu.network.checkpoint import load_model, save_model
from vcselemu.network.model import BiLstmModel, Provenance

__all__ = [
    "MANIFEST_NAME",
    "RegimeEntry",
    "RegimeModelSet",
    "model_filename",
    "save_regime_set",
    "load_regime_set",
]

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"


def model_filename(voltage: float) -> str:
    return f"regime_{voltage:.2f}V.vemw"


@dataclass(frozen=True, slots=True, eq=False)
class RegimeEntry:
    voltage: float
    model: BiLstmModel
    provenance: Provenance


@dataclass(slots=True)
class RegimeModelSet:
    """Models keyed by bias voltage, kept in strictly increasing order."""

    entries: list[RegimeEntry] = field(default_factory=list)

    def __post_init__(self) -> None:
        entries, self.entries = self.entries, []
        for e in entries:
            self.add(e.model, e.provenance, voltage=e.voltage)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RegimeEntry]:
        return iter(self.entries)

    @property
    def voltages(self) -> list[float]:
        return [e.voltage for e in self.entries]

    def add(
        self,
        model: BiLstmModel,
        provenance: Provenance | None = None,
        *,
        voltage: float | None = None,
    ) -> None:
        """Insert a model, keeping voltages strictly increasing.

        Raises:
            ShapeError: layout differs from the models already in the set.
            ValueError: a model for this voltage is already present.
        """
        v = float(model.regime_voltage if voltage is None else voltage)
        if self.entries and not self.entries[0].model.same_layout(model):
            raise ShapeError("all models in a regime set must share one layout")
        if v in self.voltages:
            raise ValueError(f"regime {v:.2f} V is already in the set")
        entry = RegimeEntry(
            voltage=v, model=model, provenance=provenance or model.provenance
        )
        self.entries.append(entry)
        self.entries.sort(key=lambda e: e.voltage)

    def get(self, voltage: float, tol: float = 1e-9) -> RegimeEntry:
        for e in self.entries:
            if abs(e.voltage - voltage) <= tol:
                return e
        raise KeyError(f"no model for {voltage:.2f} V")

    def nearest(self, voltage: float) -> RegimeEntry:
        """Closest entry; ties go to the lower voltage."""
        if not self.entries:
            raise KeyError("empty regime set")
        return min(self.entries, key=lambda e: (abs(e.voltage - voltage), e.voltage))

    def bracket(self, voltage: float) -> tuple[RegimeEntry, RegimeEntry]:
        """Adjacent entries with ``lo.voltage < voltage < hi.voltage``.

        Raises:
            KeyError: no entry on one side of *voltage*.
        """
        below = [e for e in self.entries if e.voltage < voltage]
        above = [e for e in self.entries if e.voltage > voltage]
        if not below or not above:
            raise KeyError(
                f"{voltage:.3f} V is not bracketed by the set {self.voltages}"
            )
        return below[-1], above[0]


def save_regime_set(rs: RegimeModelSet, directory: str | os.PathLike[str]) -> Path:
    """Write one checkpoint per entry and a manifest; return the manifest path.

    Manifest lines are ``voltage<TAB>provenance<TAB>file<TAB>crc32``.
    """
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    lines = []
    for e in rs:
        name = model_filename(e.voltage)
        save_model(e.model, d / name)
        crc = file_crc32(d / name)
        lines.append(f"{e.voltage:.6f}\t{e.provenance}\t{name}\t{crc:08x}")
    manifest = d / MANIFEST_NAME
    tmp = manifest.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, manifest)
    logger.info("wrote regime set of %d models to %s", len(rs), d)
    return manifest


def load_regime_set(directory: str | os.PathLike[str]) -> RegimeModelSet:
    """Load a directory written by :func:`save_regime_set`.

    Raises:
        DataError: manifest missing or malformed.
        ChecksumError: a checkpoint's CRC-32 differs from the manifest.
    """
    d = Path(directory)
    manifest = d / MANIFEST_NAME
    if not manifest.is_file():
        raise DataError(f"{manifest}: regime set manifest not found")
    rs = RegimeModelSet()
    for lineno, line in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise DataError(f"{manifest}:{lineno}: expected 4 tab-separated fields")
        volt, prov, name, crc = parts
        path = d / name
        if not path.is_file():
            raise DataError(f"{manifest}:{lineno}: checkpoint {name} not found")
        actual = file_crc32(path)
        if actual != int(crc, 16):
            raise ChecksumError(
                f"{path}: CRC-32 {actual:08x} does not match manifest {crc}"
            )
        if prov not in get_args(Provenance):
            raise DataError(f"{manifest}:{lineno}: unknown provenance {prov!r}")
        model = load_model(path, hidden_size=None)
        rs.add(model, cast(Provenance, prov), voltage=float(volt))
    return rs
