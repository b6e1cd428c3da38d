"""Gaussian weight-block perturbation study."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from vcselemu.core.errors import LengthError, UnknownBlockError
from vcselemu.dataset.store import Split, SymbolDataset
from vcselemu.network.lstm import forward_batch
from vcselemu.network.model import WEIGHT_BLOCKS, BiLstmModel

from .metrics import nmse

__all__ = [
    "SIGMA_FRACTION",
    "DEFAULT_TRIALS",
    "PerturbationRow",
    "PerturbationReport",
    "perturb_block",
    "sensitivity_study",
]

logger = logging.getLogger(__name__)

SIGMA_FRACTION = 0.5
DEFAULT_TRIALS = 20


def perturb_block(
    model: BiLstmModel,
    block_name: str,
    rng: np.random.Generator,
    *,
    sigma_scale: float = 1.0,
) -> BiLstmModel:
    """Add ``N(0, sigma^2)`` noise to one weight block.

    ``sigma = 0.5 * mean(|block|) * sigma_scale``; every other block is
    shared with *model* unchanged.

    Raises:
        UnknownBlockError: *block_name* is not one of the five weight matrices.
    """
    if block_name not in WEIGHT_BLOCKS:
        raise UnknownBlockError(
            f"cannot perturb {block_name!r}; choose from {', '.join(WEIGHT_BLOCKS)}"
        )
    block = model.blocks[block_name]
    sigma = SIGMA_FRACTION * float(np.mean(np.abs(block))) * sigma_scale
    if sigma == 0.0:
        return model
    noise = rng.normal(0.0, sigma, size=block.shape)
    return model.with_blocks({block_name: block + noise})


@dataclass(frozen=True, slots=True)
class PerturbationRow:
    block_name: str
    mean_nmse: float
    std_nmse: float
    n_trials: int


@dataclass(slots=True)
class PerturbationReport:
    baseline_nmse: float
    rows: list[PerturbationRow] = field(default_factory=list)

    def records(self) -> list[dict[str, object]]:
        head: dict[str, object] = {
            "block": "baseline",
            "mean_nmse": self.baseline_nmse,
            "std_nmse": 0.0,
            "n_trials": 0,
        }
        return [head] + [
            {
                "block": r.block_name,
                "mean_nmse": r.mean_nmse,
                "std_nmse": r.std_nmse,
                "n_trials": r.n_trials,
            }
            for r in self.rows
        ]

    def row(self, block_name: str) -> PerturbationRow:
        for r in self.rows:
            if r.block_name == block_name:
                return r
        raise KeyError(block_name)


def sensitivity_study(
    model: BiLstmModel,
    dataset: SymbolDataset,
    n_trials: int = DEFAULT_TRIALS,
    seed: int | np.random.SeedSequence = 0,
    *,
    split: Split = "test",
    sigma_scale: float = 1.0,
    threads: int = 1,
) -> PerturbationReport:
    """Perturb each weight block *n_trials* times and score NMSE on *split*.

    Every (block, trial) pair draws from its own spawned seed, so results
    do not depend on ``threads``. ``std_nmse`` is the sample std (ddof=1).
    """
    if n_trials < 2:
        raise LengthError(f"n_trials must be >= 2, got {n_trials}")
    x, y = dataset.words(split)
    baseline = nmse(forward_batch(model, x), y)
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    block_seeds = root.spawn(len(WEIGHT_BLOCKS))

    report = PerturbationReport(baseline_nmse=baseline)
    for name, bseed in zip(WEIGHT_BLOCKS, block_seeds):
        trial_seeds = bseed.spawn(n_trials)

        def trial(ss: np.random.SeedSequence, name: str = name) -> float:
            noisy = perturb_block(
                model, name, np.random.default_rng(ss), sigma_scale=sigma_scale
            )
            return nmse(forward_batch(noisy, x), y)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                scores = np.array(list(pool.map(trial, trial_seeds)))
        else:
            scores = np.array([trial(ss) for ss in trial_seeds])
        row = PerturbationRow(
            block_name=name,
            mean_nmse=float(scores.mean()),
            std_nmse=float(scores.std(ddof=1)),
            n_trials=n_trials,
        )
        logger.info(
            "perturbed %s: nmse %.4g +/- %.4g", name, row.mean_nmse, row.std_nmse
        )
        report.rows.append(row)
    return report
