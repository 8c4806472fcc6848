"""Command-line entry point.

Exit codes: 0 success, 2 configuration/schema error, 3 data error.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import storage
from .classifier import dataset_from_frames, evaluate
from .config import Config, load_config
from .errors import ConfigError, SchemaError, SensorError
from .features import FeatureSet
from .frames import Mode, POSE_ORDER
from .power import power_report
from .recipes import SWEEP_KINDS, roc_analysis, run_sweep, train_from_frames
from .roc import confusion_metrics
from .simulate import gen_dataset, render

EXIT_CONFIG = 2
EXIT_DATA = 3


def _mode(name: str) -> Mode:
    try:
        return Mode(name)
    except ValueError:
        raise ConfigError(f"mode must be 'active' or 'passive', got {name!r}") from None


def cmd_gen_dataset(args) -> int:
    config = load_config(args.config)
    mode = _mode(args.mode)
    levels = config.lux_levels if mode is Mode.PASSIVE else config.active_lux_levels
    count = args.count if args.count is not None else config.count_per_class
    frames = gen_dataset(
        count, mode, levels, args.seed,
        geometry=config.geometry(),
        direct_fraction=config.direct_fraction,
        noise_sd=config.noise_sd_v,
        widths_mm=config.widths_mm(),
        gate_t_sd=config.t_sd,
        retry_limit=config.gate_retry_limit,
        reflect_amplitude_v=config.led_amplitude_v,
        reflect_falloff_cm=config.led_falloff_cm,
    )
    storage.write_dataset_csv(frames, args.out)
    print(f"wrote {len(frames)} rows to {args.out}")
    by_class: dict[str, int] = {}
    by_level: dict[float, int] = {}
    for frame in frames:
        by_class[frame.meta.true_pose.value] = by_class.get(frame.meta.true_pose.value, 0) + 1
        nearest = min(levels, key=lambda lvl: abs(lvl - frame.meta.lux))
        by_level[nearest] = by_level.get(nearest, 0) + 1
    for pose in POSE_ORDER:
        print(f"  class {pose.value}: {by_class.get(pose.value, 0)} rows")
    for level in levels:
        print(f"  ~{level:.0f} lux: {by_level.get(level, 0)} rows")
    return 0


def cmd_train(args) -> int:
    config = load_config(args.config)
    geometry = config.geometry()
    frames = storage.read_dataset_csv(args.dataset, geometry)
    mode = _mode(args.mode) if args.mode else frames[0].mode
    frames = [f for f in frames if f.mode is mode]
    if not frames:
        raise SchemaError(f"dataset holds no {mode.value} frames")
    model, report, sizes = train_from_frames(
        frames, geometry, seed=args.seed, hidden_dim=args.hidden,
    )
    if args.out:
        storage.save_model(model, args.out)
        print(f"model written to {args.out}")
    print(f"split sizes train/validation/test: {sizes[0]}/{sizes[1]}/{sizes[2]}")
    print(f"hidden neurons: {model.hidden_dim}, best epoch {model.best_epoch} "
          f"of {model.epochs_run}")
    print(f"test accuracy: {report.accuracy:.4f}")
    _print_confusion(report)
    return 0


def _print_confusion(report) -> None:
    labels = [c.value for c in report.class_order]
    print("confusion (rows true, columns predicted):")
    print("        " + "  ".join(f"{l:>5}" for l in labels))
    for label, row in zip(labels, report.confusion):
        print(f"  {label:>5} " + "  ".join(f"{int(n):>5}" for n in row))


def cmd_eval(args) -> int:
    config = load_config(args.config)
    geometry = config.geometry()
    model = storage.load_model(args.model)
    frames = storage.read_dataset_csv(args.dataset, geometry)
    frames = [f for f in frames if f.mode is model.mode]
    if not frames:
        raise SchemaError(f"dataset holds no {model.mode.value} frames")
    dataset = dataset_from_frames(frames, geometry, FeatureSet.ALL)
    report = evaluate(model, dataset)
    print(f"rows evaluated: {len(dataset)}")
    print(f"accuracy: {report.accuracy:.4f}")
    _print_confusion(report)
    return 0


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    model = storage.load_model(args.model)
    rows = run_sweep(args.kind, config.scene(), model, config.thresholds())
    storage.write_sweep_csv(rows, args.out)
    print(f"wrote {len(rows)} {args.kind} positions to {args.out}")
    recognized = sum(1 for r in rows if r["pose"])
    print(f"gate passed at {recognized}/{len(rows)} positions")
    return 0


def cmd_roc(args) -> int:
    if args.counts:
        try:
            tp, fn, fp, tn = (int(x) for x in args.counts.split(","))
        except ValueError:
            raise ConfigError("--counts needs four integers: TP,FN,FP,TN") from None
        sensitivity, specificity, accuracy = confusion_metrics(tp, fn, fp, tn)
        print(f"sensitivity: {100 * sensitivity:.2f}%")
        print(f"specificity: {100 * specificity:.2f}%")
        print(f"accuracy:    {100 * accuracy:.2f}%")
        return 0
    if not args.scores:
        raise ConfigError("roc needs a scores CSV (or --counts)")
    scores, is_dark = storage.read_scores_csv(args.scores)
    curve, best = roc_analysis(scores, is_dark)
    if args.out:
        storage.write_roc_csv(curve, args.out)
        print(f"wrote {len(curve)} ROC points to {args.out}")
    print(f"optimal threshold: {best.threshold:.2f} V")
    print(f"sensitivity: {100 * best.sensitivity:.2f}%")
    print(f"specificity: {100 * best.specificity:.2f}%")
    print(f"distance to perfect corner: {best.distance_to_perfect:.4f}")
    return 0


def cmd_power(args) -> int:
    config = load_config(args.config)
    rows, savings = power_report(config.power_params())
    if args.out:
        storage.write_power_csv(rows, savings, args.out)
        print(f"wrote power table to {args.out}")
    print(f"{'condition':>10} {'lux':>8} {'mA/PD':>7} {'uA total':>9} {'uW total':>9}")
    for row in rows:
        lux = "" if np.isnan(row.lux) else f"{row.lux:.0f}"
        print(f"{row.condition:>10} {lux:>8} {row.single_pd_ma:>7.3f} "
              f"{row.total_current_ua:>9.2f} {row.total_power_uw:>9.2f}")
    print(f"passive-mode savings: {savings:.2f}%")
    return 0


def cmd_render(args) -> int:
    config = load_config(args.config)
    mode = _mode(args.mode)
    scene = config.scene()
    rng = np.random.default_rng(args.seed)
    frame = render(scene, mode, rng)
    thresholds = config.thresholds()
    from .controller import gate, select_mode

    print("voltages: " + " ".join(f"{v:.4f}" for v in frame.voltages))
    v = frame.voltages
    print(f"sd {v.std():.4f}  max {v.max():.4f}  min {v.min():.4f}  "
          f"diff {v.max() - v.min():.4f}")
    decision, alarm = select_mode(frame.rawmax, thresholds)
    print(f"gate: {gate(frame, thresholds).value}")
    print(f"mode decision: {decision.value}" + ("  [saturation alarm]" if alarm else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optigest",
        description="Linear photodiode-array gesture sensing toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="simulate a labeled frame dataset")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="passive")
    p.add_argument("--count", type=int, default=None, help="rows per class")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("train", help="train a pose classifier on a dataset CSV")
    p.add_argument("dataset")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default=None)
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--out", default=None, help="model JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a dataset CSV")
    p.add_argument("dataset")
    p.add_argument("--config", default=None)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="angular or distance sweep report")
    p.add_argument("--kind", choices=SWEEP_KINDS, required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("roc", help="threshold sweep over labeled rawmax scores")
    p.add_argument("scores", nargs="?", default=None)
    p.add_argument("--counts", default=None, help="TP,FN,FP,TN for direct metrics")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("power", help="duty-cycled power budget table")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("render", help="render one frame for scene debugging")
    p.add_argument("--config", default=None)
    p.add_argument("--mode", default="passive")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SensorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
