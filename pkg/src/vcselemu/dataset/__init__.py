"""Symbol-rate datasets built from simulated captures."""

from .store import (
    DATASET_MAGIC,
    DATASET_VERSION,
    SPLITS,
    Split,
    SplitMode,
    SymbolDataset,
    build_dataset,
    export_text,
    load_dataset,
    save_dataset,
)
from .symbols import (
    WORD_LENGTH,
    NormStats,
    Word,
    decimate_to_symbol_rate,
    denormalize,
    make_words,
    normalize,
)

__all__ = [
    "DATASET_MAGIC",
    "DATASET_VERSION",
    "SPLITS",
    "WORD_LENGTH",
    "NormStats",
    "Split",
    "SplitMode",
    "SymbolDataset",
    "Word",
    "build_dataset",
    "decimate_to_symbol_rate",
    "denormalize",
    "export_text",
    "load_dataset",
    "make_words",
    "normalize",
    "save_dataset",
]
