#!/usr/bin/env python3
"""
Command-line entrypoint for the planner.
Subcommands: train, eval, sweep, baseline, export and verify.
"""

import argparse
import os
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from ris_uav_planner.core.config import ScenarioBundle, bundle_from_dict, load_scenario_file
from ris_uav_planner.core.errors import TrainingAbortedError
from ris_uav_planner.reporting import export
from ris_uav_planner.services import harness
from ris_uav_planner.utils.logging import format_metrics, log_status

DEFAULT_CONFIG = os.path.join("configs", "default_scenario.json")
DEFAULT_DURATIONS = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]
_LABEL_SUFFIXES = ("-training", "-eval", "-sweep")


def load_bundle(args: argparse.Namespace) -> ScenarioBundle:
    """Scenario file plus command-line overrides."""
    if args.config == DEFAULT_CONFIG and not os.path.exists(args.config):
        bundle = bundle_from_dict({})
    else:
        bundle = load_scenario_file(args.config)
    if getattr(args, "ris_rows", None):
        bundle = replace(bundle, scenario=replace(bundle.scenario, ris_rows=args.ris_rows))
    if getattr(args, "train_episodes", None):
        bundle = replace(bundle, hyper=replace(bundle.hyper, episodes=args.train_episodes))
    if getattr(args, "seed", None) is not None:
        bundle = replace(bundle, seed=args.seed)
    return bundle


def _label(path: str) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    for suffix in _LABEL_SUFFIXES:
        if stem.endswith(suffix):
            return stem[: -len(suffix)]
    return stem


def _write_report(report: harness.EvalReport, bundle: ScenarioBundle, output_dir: str, quiet: bool) -> None:
    origin = harness.provenance(bundle, bundle.seed)
    stem = os.path.join(output_dir, report.label)
    export.write_csv(f"{stem}-eval.csv", harness.EVAL_HEADER, report.rows(), origin)
    export.write_json(f"{stem}-eval.json", report.to_dict(), origin)
    export.plot_cdf({report.label: harness.cdf(report.finishing_distances)}, f"{stem}-cdf.svg")
    if report.trace:
        export.write_csv(f"{stem}-trace.csv", harness.TraceRow.header(), [row.as_row() for row in report.trace], origin)
        export.plot_trajectory([row.position for row in report.trace], bundle.scenario, f"{stem}-trajectory.svg")
    if report.snapshot is not None:
        export.write_snapshot_csv(report.snapshot, f"{stem}-snapshot.csv", origin)
    log_status("ok", f"{report.label}: " + format_metrics({
        "episodes": report.n_episodes,
        "mean_rate": report.mean_rate,
        "std_rate": report.std_rate,
        "mean_d_F": report.mean_distance,
        "std_d_F": report.std_distance,
    }), quiet)


def cmd_train(args: argparse.Namespace) -> int:
    bundle = load_bundle(args)
    curves: Dict[str, List[float]] = {}
    for algorithm in args.algorithm:
        result = harness.train(bundle, algorithm, bundle.seed, args.output, args.quiet, args.objective)
        curves[algorithm] = result.running_average
        export.write_json(os.path.join(args.output, f"{algorithm}-summary.json"), harness.summary_dict(result),
                          harness.provenance(bundle, bundle.seed))
    export.plot_reward_curves(curves, os.path.join(args.output, "reward-curves.svg"), "Average reward")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    bundle = load_bundle(args)
    report = harness.evaluate(args.checkpoint, bundle, args.episodes, bundle.seed, trace_episode=0, oracle_objective=args.objective,
                               snapshot_slot=args.snapshot_slot)
    _write_report(report, bundle, args.output, args.quiet)
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    bundle = load_bundle(args)
    for mode in args.mode:
        report = harness.evaluate_baseline(bundle, mode, args.episodes, bundle.seed, args.objective, trace_episode=0,
                                            snapshot_slot=args.snapshot_slot)
        _write_report(report, bundle, args.output, args.quiet)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    bundle = load_bundle(args)
    rows = harness.sweep_mission_duration(bundle, args.durations, args.algorithm, args.episodes, bundle.seed, args.output, args.quiet)
    path = os.path.join(args.output, f"{args.algorithm}-sweep.csv")
    export.write_csv(path, harness.SWEEP_HEADER, [row.as_row() for row in rows], harness.provenance(bundle, bundle.seed))
    series = {args.algorithm: [(r.mission_time, r.mean_rate, r.std_rate) for r in rows]}
    export.plot_duration_sweep(series, os.path.join(args.output, f"{args.algorithm}-rate-vs-duration.svg"), "Cumulative rate (bits/s/Hz)")
    distance = {args.algorithm: [(r.mission_time, r.mean_distance, r.std_distance) for r in rows]}
    export.plot_duration_sweep(distance, os.path.join(args.output, f"{args.algorithm}-distance-vs-duration.svg"), "Finishing distance (m)")
    log_status("ok", f"Sweep written to {path}", args.quiet)
    return 0


def _column(header: List[str], rows: List[List[object]], name: str, path: str) -> List[float]:
    if name not in header:
        raise ValueError(f"{path} has no '{name}' column (columns: {', '.join(header)})")
    index = header.index(name)
    return [float(row[index]) for row in rows]


def cmd_export(args: argparse.Namespace) -> int:
    tables = {_label(path): export.read_csv(path) for path in args.inputs}
    if args.format == "json":
        payload = {label: {name: [row[i] for row in rows] for i, name in enumerate(header)}
                   for label, (header, rows, _) in tables.items()}
        export.write_json(args.output, payload)
    elif args.kind == "reward":
        column = "reward" if args.raw else "running_average"
        export.plot_reward_curves({label: _column(h, rows, column, label) for label, (h, rows, _) in tables.items()}, args.output)
    elif args.kind == "cdf":
        export.plot_cdf({label: harness.cdf(_column(h, rows, "finishing_distance", label)) for label, (h, rows, _) in tables.items()},
                        args.output)
    elif args.kind == "sweep":
        mean, spread, ylabel = (("mean_distance", "std_distance", "Finishing distance (m)") if args.metric == "distance"
                                else ("mean_rate", "std_rate", "Cumulative rate (bits/s/Hz)"))
        series = {
            label: list(zip(_column(h, rows, "mission_time", label), _column(h, rows, mean, label), _column(h, rows, spread, label)))
            for label, (h, rows, _) in tables.items()
        }
        export.plot_duration_sweep(series, args.output, ylabel)
    else:
        points = {label: list(zip(_column(h, rows, "mean_distance", label), _column(h, rows, "mean_rate", label)))
                  for label, (h, rows, _) in tables.items()}
        export.plot_rate_distance_scatter(points, args.output)
    log_status("ok", f"Exported {len(tables)} table(s) to {args.output}", args.quiet)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    bundle = load_bundle(args)
    results = harness.run_oracle_suite(bundle, bundle.seed, quick=args.quick)
    for result in results:
        kind = "ok" if result.passed else "error"
        log_status(kind, f"{result.name}: " + format_metrics({"value": result.value, "threshold": result.threshold,
                                                                 "seconds": result.seconds}) + f" ({result.detail})", args.quiet)
    if args.output:
        export.write_csv(args.output, harness.VERIFY_HEADER, harness.verification_rows(results),
                         harness.provenance(bundle, bundle.seed))
    return 0 if all(result.passed for result in results) else 1


def _add_common(parser: argparse.ArgumentParser, output_default: Optional[str] = "runs") -> None:
    parser.add_argument("--config", default=DEFAULT_CONFIG, help=f"scenario JSON (default: {DEFAULT_CONFIG})")
    parser.add_argument("--seed", type=int, default=None, help="master seed; overrides the file and RIS_UAV_SEED")
    parser.add_argument("--ris-rows", type=int, default=None, help="RIS rows n_y (4 for the 5x4 array, 8 for 5x8)")
    parser.add_argument("--quiet", action="store_true", help="suppress status lines")
    if output_default is not None:
        parser.add_argument("--output", default=output_default, help=f"output directory (default: {output_default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-uav", description="RIS-assisted anti-jamming UAV trajectory planner")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train DDPG/TD3 agents and write checkpoints and metrics")
    _add_common(train)
    train.add_argument("--algorithm", nargs="+", choices=sorted(harness.ALGORITHMS), default=["td3"])
    train.add_argument("--episodes", dest="train_episodes", type=int, default=None, help="training episodes (default: 3000)")
    train.add_argument("--objective", choices=["sinr", "snr"], default="sinr", help="Dinkelbach objective for td3-csi-baseline")
    train.set_defaults(handler=cmd_train)

    evaluate = sub.add_parser("eval", help="zero-noise evaluation of a checkpoint")
    _add_common(evaluate)
    evaluate.add_argument("--checkpoint", required=True)
    evaluate.add_argument("--episodes", type=int, default=500, help="test episodes (default: 500)")
    evaluate.add_argument("--objective", choices=["sinr", "snr"], default="sinr")
    evaluate.add_argument("--snapshot-slot", type=int, default=None, help="also write the channel of this slot of the traced episode")
    evaluate.set_defaults(handler=cmd_eval)

    sweep = sub.add_parser("sweep", help="train and evaluate across mission durations")
    _add_common(sweep)
    sweep.add_argument("--durations", type=float, nargs="+", default=DEFAULT_DURATIONS, help="mission durations T in seconds")
    sweep.add_argument("--algorithm", choices=sorted(harness.ALGORITHMS), default="td3")
    sweep.add_argument("--episodes", type=int, default=500, help="test episodes per duration (default: 500)")
    sweep.add_argument("--train-episodes", dest="train_episodes", type=int, default=None)
    sweep.set_defaults(handler=cmd_sweep)

    baseline = sub.add_parser("baseline", help="pursuit-guided flights without RIS or with CSI-optimised phases")
    _add_common(baseline)
    baseline.add_argument("--mode", nargs="+", choices=["none", "ris", "oracle"], default=["none", "oracle"])
    baseline.add_argument("--episodes", type=int, default=500)
    baseline.add_argument("--objective", choices=["sinr", "snr"], default="sinr")
    baseline.add_argument("--snapshot-slot", type=int, default=None, help="also write the channel of this slot of the traced episode")
    baseline.set_defaults(handler=cmd_baseline)

    exporter = sub.add_parser("export", help="turn metrics CSVs into SVG figures or JSON")
    exporter.add_argument("inputs", nargs="+", help="CSV files written by train/eval/sweep")
    exporter.add_argument("--format", choices=["svg", "json"], default="svg")
    exporter.add_argument("--kind", choices=["reward", "cdf", "sweep", "scatter"], default="reward")
    exporter.add_argument("--metric", choices=["rate", "distance"], default="rate", help="sweep figure quantity")
    exporter.add_argument("--raw", action="store_true", help="plot per-episode rewards instead of running averages")
    exporter.add_argument("--output", required=True)
    exporter.add_argument("--quiet", action="store_true")
    exporter.set_defaults(handler=cmd_export)

    verify = sub.add_parser("verify", help="run the oracle verification suite")
    _add_common(verify, output_default=None)
    verify.add_argument("--quick", action="store_true", help="reduced sample counts")
    verify.add_argument("--output", default=None, help="optional CSV of check results")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, FileNotFoundError) as exc:
        log_status("error", str(exc))
        return 2
    except TrainingAbortedError as exc:
        hint = f"; last good checkpoint: {exc.last_checkpoint}" if exc.last_checkpoint else ""
        log_status("error", f"{exc}{hint}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
