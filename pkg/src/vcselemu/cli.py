"""Command-line interface for vcselemu.

Every subcommand resolves the run configuration (packaged defaults, then
``--config``, then flags), works inside the output directory laid out by
:class:`vcselemu.workspace.Workspace`, records what it wrote in the run
manifest and prints a one-line summary per regime to stdout.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from vcselemu import __version__
from vcselemu.adaptation import (
    adapt_chain,
    fine_tune,
    interpolate_weights,
    load_regime_set,
    model_filename,
    reservoir_fine_tune,
    save_regime_set,
    weight_trajectory_linearity,
)
from vcselemu.analysis import (
    NmseReport,
    estimate_delay,
    evaluate,
    fit_linear_baseline,
    format_records,
    format_table,
    level_clusters,
    nmse_to_snr_db,
    rate_equation_benchmark,
    sensitivity_study,
)
from vcselemu.config import config_hash, make_run_config
from vcselemu.core.errors import (
    ConfigError,
    DataError,
    EmulatorError,
    ExtrapolationError,
)
from vcselemu.dataset import (
    SymbolDataset,
    build_dataset,
    decimate_to_symbol_rate,
    load_dataset,
    save_dataset,
)
from vcselemu.network import (
    BiLstmModel,
    TrainReport,
    load_model,
    save_model,
    train,
)
from vcselemu.physics import make_lms_channel, noise_stream, simulate_link
from vcselemu.settings import ConfigStore, RunConfig
from vcselemu.signal import FfeTaps, generate_prbs, lms_optimize_ffe, map_pam4
from vcselemu.workspace import Workspace

__all__ = ["build_parser", "parse_args", "main"]

logger = logging.getLogger(__name__)

# model kinds searched, in order, when a command needs "the" model of a regime
MODEL_KINDS = ("scratch", "transfer", "reservoir", "chain", "interpolated")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass(slots=True)
class Context:
    args: argparse.Namespace
    cfg: RunConfig
    ws: Workspace
    sha: str

    def record(self, kind: str, path: Path, regime_v: float | None = None) -> None:
        self.ws.record(
            kind, path, regime_v=regime_v, seed=self.cfg.seed, config_sha256=self.sha
        )


# --- helpers ----------------------------------------------------------------


def _grid_index(cfg: RunConfig, voltage: float) -> int:
    for i, v in enumerate(cfg.physics.bias_voltages_v):
        if abs(v - voltage) < 1e-9:
            return i
    raise ConfigError(
        f"regime {voltage:.2f} V is not in physics.bias_voltages_v "
        f"{cfg.physics.bias_voltages_v}"
    )


def _regimes(ctx: Context) -> list[float]:
    if ctx.args.regime is not None:
        return [float(ctx.args.regime)]
    return list(ctx.cfg.physics.bias_voltages_v)


def _require(ctx: Context, value: float | None, flag: str) -> float:
    if value is None:
        raise ConfigError(f"{ctx.args.command} needs {flag}")
    return float(value)


def _dataset(ctx: Context, voltage: float) -> SymbolDataset:
    path = ctx.ws.dataset_path(voltage)
    if not path.is_file():
        raise DataError(f"{path}: dataset not found; run 'vcselemu simulate' first")
    return load_dataset(path)


def _model(ctx: Context, voltage: float) -> BiLstmModel:
    explicit = getattr(ctx.args, "model", None)
    if explicit is not None:
        if not Path(explicit).is_file():
            raise DataError(f"{explicit}: checkpoint not found")
        return load_model(explicit, hidden_size=None)
    for kind in MODEL_KINDS:
        path = ctx.ws.model_path(kind, voltage)
        if path.is_file():
            logger.info("using %s model %s", kind, path)
            return load_model(path, hidden_size=None)
    raise DataError(
        f"no model for {voltage:.2f} V under {ctx.ws.root / 'models'}; "
        "run 'vcselemu train' first"
    )


def _write_report(
    ctx: Context,
    name: str,
    rows: Sequence[Mapping[str, object]],
    regime_v: float | None = None,
    *,
    table: bool = True,
) -> None:
    tsv = ctx.ws.report_path(f"{name}.tsv")
    tsv.parent.mkdir(parents=True, exist_ok=True)
    tsv.write_text(format_records(rows), encoding="utf-8")
    ctx.record("report", tsv, regime_v)
    if table:
        txt = ctx.ws.report_path(f"{name}.txt")
        txt.write_text(format_table(rows), encoding="utf-8")
        ctx.record("report", txt, regime_v)


def _loss_rows(report: TrainReport) -> list[dict[str, object]]:
    return [
        {"epoch": e, "train_mse": tr, "val_mse": va}
        for e, (tr, va) in enumerate(report.loss_curve)
    ]


def _finish_model(
    ctx: Context, kind: str, model: BiLstmModel, ds: SymbolDataset, rep: TrainReport
) -> NmseReport:
    path = ctx.ws.model_path(kind, ds.regime_voltage)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, path)
    ctx.record("model", path, ds.regime_voltage)
    _write_report(
        ctx,
        f"train_{kind}_{ds.regime_voltage:.2f}V",
        _loss_rows(rep),
        ds.regime_voltage,
        table=False,
    )
    result = evaluate(model, ds)
    print(
        f"{kind} {result.summary_line()} epochs={rep.epochs_run} "
        f"best_epoch={rep.best_epoch} train_time={rep.wall_time_s:.2f}s"
    )
    return result


def _resolve_taps(ctx: Context) -> FfeTaps:
    sig, phy = ctx.cfg.signal, ctx.cfg.physics
    if sig.ffe_taps is not None:
        return FfeTaps(taps=np.asarray(sig.ffe_taps, dtype=np.float64))
    bits = generate_prbs((ctx.cfg.seed + 2) & 0xFFFFFFFF, 2 * sig.lms_symbols)
    cal = map_pam4(bits, sig.gray, sig.symbol_rate_hz)
    channel = make_lms_channel(
        cal,
        phy.vcsel,
        phy.receiver,
        sig.ffe_reference_voltage_v,
        phy.modulation_vpp_v,
        sps=sig.sps,
        phase=ctx.cfg.dataset.phase,
        dac_bits=sig.dac_bits,
    )
    return lms_optimize_ffe(cal, channel, sig.lms_step, sig.lms_iterations)


# --- commands ---------------------------------------------------------------


def cmd_simulate(ctx: Context) -> None:
    cfg = ctx.cfg
    sig, phy, dcfg = cfg.signal, cfg.physics, cfg.dataset
    if not phy.noise_enabled:
        logger.warning("noise sources disabled for this run")
    taps = _resolve_taps(ctx)
    _write_report(
        ctx,
        "ffe_taps",
        [{"tap": i, "value": float(t)} for i, t in enumerate(taps.taps)],
    )
    train_syms = map_pam4(
        generate_prbs(cfg.seed, 2 * dcfg.train_symbols), sig.gray, sig.symbol_rate_hz
    )
    test_syms = map_pam4(
        generate_prbs((cfg.seed + 1) & 0xFFFFFFFF, 2 * dcfg.test_symbols),
        sig.gray,
        sig.symbol_rate_hz,
    )
    for v in _regimes(ctx):
        idx = _grid_index(cfg, v)
        pairs = []
        for capture, syms in enumerate((train_syms, test_syms)):
            rng = noise_stream(cfg.seed, idx, capture) if phy.noise_enabled else None
            pairs.append(
                simulate_link(
                    syms,
                    taps,
                    phy.vcsel,
                    phy.receiver,
                    v,
                    phy.modulation_vpp_v,
                    rng,
                    sps=sig.sps,
                    dac_bits=sig.dac_bits,
                )
            )
        ds = build_dataset(
            pairs[0],
            pairs[1],
            word_length=dcfg.word_length,
            phase=dcfg.phase,
            train_symbols=dcfg.train_symbols,
            test_symbols=dcfg.test_symbols,
            val_fraction=dcfg.val_fraction,
            split_mode=dcfg.split_mode,
            split_seed=dcfg.split_seed,
        )
        ds = dataclasses.replace(
            ds,
            extra={
                "seed": cfg.seed,
                "ffe_taps": [float(t) for t in taps.taps],
                "noise_enabled": phy.noise_enabled,
            },
        )
        path = ctx.ws.dataset_path(v)
        save_dataset(ds, path)
        ctx.record("dataset", path, v)

        _, received = decimate_to_symbol_rate(pairs[1], dcfg.phase)
        delay = estimate_delay(test_syms.levels, received)
        clusters = level_clusters(test_syms.levels, received, delay)
        _write_report(
            ctx,
            f"clusters_{v:.2f}V",
            [dataclasses.asdict(c) for c in clusters],
            v,
            table=False,
        )
        print(
            f"simulate regime={v:.2f}V words={ds.n_words} "
            f"train={ds.split_size('train')} val={ds.split_size('val')} "
            f"test={ds.split_size('test')} file={path}"
        )


def cmd_train(ctx: Context) -> None:
    for v in _regimes(ctx):
        ds = _dataset(ctx, v)
        model, rep = train(ds, ctx.cfg.train)
        _finish_model(ctx, "scratch", model, ds, rep)


def _adapt(ctx: Context, reservoir: bool) -> None:
    src = _require(ctx, ctx.args.from_v, "--from")
    dst = _require(ctx, ctx.args.to_v, "--to")
    base = _model(ctx, src)
    ds = _dataset(ctx, dst)
    step = reservoir_fine_tune if reservoir else fine_tune
    model, rep = step(base, ds, ctx.cfg.train)
    _finish_model(ctx, "reservoir" if reservoir else "transfer", model, ds, rep)


def cmd_finetune(ctx: Context) -> None:
    _adapt(ctx, reservoir=False)


def cmd_reservoir(ctx: Context) -> None:
    _adapt(ctx, reservoir=True)


def cmd_interpolate(ctx: Context) -> None:
    va = _require(ctx, ctx.args.from_v, "--from")
    vb = _require(ctx, ctx.args.to_v, "--to")
    vt = _require(ctx, ctx.args.v_target, "--v-target")
    model = interpolate_weights(_model(ctx, va), _model(ctx, vb), vt)
    path = ctx.ws.model_path("interpolated", vt)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, path)
    ctx.record("model", path, vt)
    if ctx.ws.dataset_path(vt).is_file():
        print(f"interpolated {evaluate(model, _dataset(ctx, vt)).summary_line()}")
    else:
        print(f"interpolated regime={vt:.2f}V file={path} (no dataset to evaluate)")


def cmd_evaluate(ctx: Context) -> None:
    for v in _regimes(ctx):
        ds = _dataset(ctx, v)
        model = _model(ctx, v)
        result = evaluate(model, ds)
        baseline = fit_linear_baseline(ds, ctx.cfg.analysis.half_window)
        lin = baseline.nmse_on(ds)
        rows: list[dict[str, object]] = [
            {
                "model": result.provenance,
                "regime_v": v,
                "nmse": result.nmse,
                "snr_db": result.snr_db,
                "kp4_margin_db": result.kp4_margin_db,
            },
            {
                "model": "linear",
                "regime_v": v,
                "nmse": lin,
                "snr_db": nmse_to_snr_db(lin) if lin > 0 else float("inf"),
                "kp4_margin_db": float("nan"),
            },
        ]
        _write_report(ctx, f"evaluate_{v:.2f}V", rows, v)
        print(f"evaluate {result.summary_line()} linear_nmse={lin:.5f}")


def cmd_perturb(ctx: Context) -> None:
    v = ctx.cfg.adapt.base_voltage_v
    if ctx.args.regime is not None:
        v = float(ctx.args.regime)
    an = ctx.cfg.analysis
    report = sensitivity_study(
        _model(ctx, v),
        _dataset(ctx, v),
        n_trials=an.trials,
        seed=ctx.cfg.seed,
        sigma_scale=an.sigma_scale,
        threads=ctx.cfg.threads,
    )
    rows = report.records()
    _write_report(ctx, f"perturb_{v:.2f}V", rows, v)
    print(format_table(rows), end="")
    print(
        f"perturb regime={v:.2f}V baseline_nmse={report.baseline_nmse:.5f} "
        f"trials={an.trials}"
    )


def cmd_benchmark(ctx: Context) -> None:
    cfg = ctx.cfg
    regimes = _regimes(ctx)
    models: dict[float, BiLstmModel] = {}
    for v in regimes:
        try:
            models[v] = _model(ctx, v)
        except DataError:
            logger.info("no trained model for %.2f V; timing a fresh network", v)
    taps = (
        FfeTaps(taps=np.asarray(cfg.signal.ffe_taps, dtype=np.float64))
        if cfg.signal.ffe_taps is not None
        else None
    )
    report = rate_equation_benchmark(
        cfg.analysis.benchmark_symbols,
        regimes,
        cfg.physics.vcsel,
        cfg.physics.receiver,
        models=models,
        taps=taps,
        modulation_vpp=cfg.physics.modulation_vpp_v,
        symbol_rate_hz=cfg.signal.symbol_rate_hz,
        seed=cfg.seed,
        sps=cfg.signal.sps,
    )
    rows = report.records()
    _write_report(ctx, "benchmark", rows)
    print(format_table(rows), end="")
    total = report.totals
    print(
        f"benchmark symbols={report.n_symbols} regimes={len(regimes)} "
        f"oracle={total.oracle_time_s:.3f}s emulator={total.emulator_time_s:.3f}s "
        f"speedup={total.speedup:.1f}x"
    )


def cmd_chain(ctx: Context) -> None:
    cfg = ctx.cfg
    base_v = cfg.adapt.base_voltage_v
    if ctx.args.from_v is not None:
        base_v = float(ctx.args.from_v)
    base = _model(ctx, base_v)
    datasets = {
        v: _dataset(ctx, v)
        for v in cfg.physics.bias_voltages_v
        if ctx.ws.dataset_path(v).is_file()
    }
    rs, reports = adapt_chain(base, datasets, cfg.train, reservoir=cfg.adapt.reservoir)
    for vt in cfg.adapt.interpolation_targets_v:
        if vt in rs.voltages:
            logger.warning("interpolation target %.2f V already has a model", vt)
            continue
        try:
            lo, hi = rs.bracket(vt)
        except KeyError as exc:
            raise ExtrapolationError(str(exc.args[0])) from exc
        rs.add(interpolate_weights(lo.model, hi.model, vt))
    chain_dir = ctx.ws.model_dir("chain")
    manifest = save_regime_set(rs, chain_dir)
    for e in rs:
        ctx.record("model", chain_dir / model_filename(e.voltage), e.voltage)
    ctx.record("regime-set", manifest)

    rows: list[dict[str, object]] = []
    for e in rs:
        rep = reports.get(e.voltage)
        row: dict[str, object] = {
            "regime_v": e.voltage,
            "provenance": e.provenance,
            "epochs": rep.epochs_run if rep is not None else 0,
            "nmse": float("nan"),
            "snr_db": float("nan"),
        }
        ds = datasets.get(e.voltage)
        if ds is None and ctx.ws.dataset_path(e.voltage).is_file():
            ds = _dataset(ctx, e.voltage)
        if ds is not None:
            result = evaluate(e.model, ds)
            row["nmse"], row["snr_db"] = result.nmse, result.snr_db
            print(f"chain {result.summary_line()} provenance={e.provenance}")
        rows.append(row)
    _write_report(ctx, "chain", rows)


def cmd_linearity(ctx: Context) -> None:
    rs = load_regime_set(ctx.ws.model_dir("chain"))
    v_range = None
    if ctx.args.from_v is not None and ctx.args.to_v is not None:
        v_range = (float(ctx.args.from_v), float(ctx.args.to_v))
    report = weight_trajectory_linearity(rs, ctx.args.block, v_range)
    row: dict[str, object] = {"block": report.block_name, **report.summary()}
    _write_report(ctx, f"linearity_{report.block_name}", [row])
    print(
        f"linearity block={report.block_name} regimes={len(report.voltages)} "
        f"mean_r2={report.mean:.4f} min_r2={report.minimum:.4f}"
    )


COMMANDS: dict[str, Callable[[Context], None]] = {
    "simulate": cmd_simulate,
    "train": cmd_train,
    "finetune": cmd_finetune,
    "reservoir": cmd_reservoir,
    "interpolate": cmd_interpolate,
    "evaluate": cmd_evaluate,
    "perturb": cmd_perturb,
    "benchmark": cmd_benchmark,
    "chain": cmd_chain,
    "linearity": cmd_linearity,
}


# --- parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="YAML run config")
    common.add_argument("--seed", type=int, default=None, help="Global seed")
    common.add_argument("--out", type=str, default=None, help="Output directory")
    common.add_argument("--threads", type=int, default=None, help="Worker cap")
    common.add_argument("--regime", type=float, default=None, help="Bias voltage (V)")
    common.add_argument("--from", dest="from_v", type=float, default=None)
    common.add_argument("--to", dest="to_v", type=float, default=None)
    common.add_argument("--v-target", dest="v_target", type=float, default=None)
    common.add_argument("--trials", type=int, default=None, help="Perturbation trials")
    common.add_argument(
        "--no-noise",
        action="store_true",
        default=False,
        help="Disable RIN and photodetector noise",
    )
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, default="WARNING", help="Logging level"
    )

    p = argparse.ArgumentParser(
        prog="vcselemu", description="VCSEL PAM-4 link emulator toolkit"
    )
    p.add_argument("--version", action="version", version=f"vcselemu {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "Generate datasets from the rate-equation link",
        "train": "Train a Bi-LSTM from scratch per regime",
        "finetune": "Transfer a model from --from to --to",
        "reservoir": "Fine-tune only input and readout blocks",
        "interpolate": "Blend two regime models at --v-target",
        "evaluate": "Score a model and the linear baseline",
        "perturb": "Weight-block noise sensitivity study",
        "benchmark": "Time the oracle against the emulator",
        "chain": "Incremental transfer across the voltage grid",
        "linearity": "Per-element linearity of a block across the chain",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, parents=[common], help=text)
        if name == "evaluate":
            sp.add_argument("--model", type=Path, default=None, help="Checkpoint")
        if name == "linearity":
            sp.add_argument("--block", default="w_in_fwd", help="Weight block name")
    return p


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _overrides(args: argparse.Namespace) -> dict[str, object]:
    return {
        "seed": args.seed,
        "output_dir": args.out,
        "threads": args.threads,
        "train.threads": args.threads,
        "physics.noise_enabled": False if args.no_noise else None,
        "analysis.trials": args.trials,
    }


def _context(args: argparse.Namespace) -> Context:
    cfg = make_run_config(args.config, _overrides(args))
    ws = Workspace.open(cfg.output_dir)
    ws.prepare()
    ctx = Context(args=args, cfg=cfg, ws=ws, sha=config_hash(cfg))
    ctx.record("config", ConfigStore.save(cfg, ws.root / "config.yml"))
    return ctx


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand; return the process exit code."""
    args = parse_args(argv)
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(args.log_level)
    try:
        ctx = _context(args)
        try:
            COMMANDS[args.command](ctx)
        finally:
            ctx.ws.save()
    except EmulatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130
    except Exception:
        logger.exception("unexpected failure in %s", args.command)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
