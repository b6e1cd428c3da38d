"""Model checkpoints in the VEMW container format."""

from __future__ import annotations

import logging
import os

from vcselemu.core.codec import read_container, write_container
from vcselemu.core.errors import ShapeError
from vcselemu.dataset.symbols import NormStats

from .model import GATE_ORDER, HIDDEN_SIZE, BiLstmModel, block_shapes

__all__ = ["MODEL_MAGIC", "MODEL_VERSION", "save_model", "load_model"]

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"VEMW"
MODEL_VERSION = (1, 0)


def save_model(model: BiLstmModel, path: str | os.PathLike[str]) -> int:
    """Write every block plus metadata; return the content CRC-32."""
    meta = {
        "hidden_size": model.hidden_size,
        "gate_order": list(model.gate_order),
        "regime_voltage": model.regime_voltage,
        "input_stats": model.input_stats.as_list(),
        "target_stats": model.target_stats.as_list(),
        "provenance": model.provenance,
    }
    crc = write_container(
        path, MODEL_MAGIC, MODEL_VERSION, dict(model.blocks), {"meta": meta}
    )
    logger.info(
        "wrote checkpoint %s (%s, %.2f V)", path, model.provenance, model.regime_voltage
    )
    return crc


def load_model(
    path: str | os.PathLike[str], hidden_size: int | None = HIDDEN_SIZE
) -> BiLstmModel:
    """Read a checkpoint, checking its layout against *hidden_size*.

    ``hidden_size=None`` accepts whatever size the file declares.

    Raises:
        ShapeError: hidden size, gate order or a block shape differs.
        FormatError, VersionError, TruncatedFileError, ChecksumError: container
            problems.
    """
    c = read_container(path, MODEL_MAGIC, MODEL_VERSION[0])
    meta = c.records.get("meta")
    if meta is None:
        raise ShapeError(f"{path}: checkpoint has no metadata record")
    size = int(meta["hidden_size"])
    if hidden_size is not None and size != hidden_size:
        raise ShapeError(
            f"{path}: checkpoint hidden size {size} does not match "
            f"expected {hidden_size}"
        )
    if tuple(meta["gate_order"]) != GATE_ORDER:
        raise ShapeError(f"{path}: unsupported gate order {meta['gate_order']}")
    for name, shape in block_shapes(size).items():
        got = c.arrays.get(name)
        if got is None:
            raise ShapeError(f"{path}: block {name!r} missing")
        if got.shape != shape:
            raise ShapeError(
                f"{path}: block {name!r} has shape {got.shape}, expected {shape}"
            )
    return BiLstmModel(
        blocks=dict(c.arrays),
        hidden_size=size,
        input_stats=NormStats(*meta["input_stats"]),
        target_stats=NormStats(*meta["target_stats"]),
        regime_voltage=float(meta["regime_voltage"]),
        provenance=meta["provenance"],
        gate_order=tuple(meta["gate_order"]),
    )
