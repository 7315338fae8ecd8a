"""Command-line pipeline: cluster -> assign -> schedule/simulate, plus metrics.

Each stage is a separate subcommand with JSON file handoffs so every step
can be audited and rerun in isolation. All diagnostics go to stderr, data
to stdout or the --output file. Exit codes: 0 success, 2 usage error,
3 data error (any typed pipeline error), 4 unexpected runtime failure.
Identical flags and inputs always reproduce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import difficulty, embedding_io, kmeans, metrics, protocol, simulate
from .errors import CurlearnError
from .scheduler import Direction, SchedulerConfig

log = logging.getLogger("curlearn")


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _add_scheduler_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=float, default=0.7,
                        help="saturation threshold coefficient in (0,1)")
    parser.add_argument("--window", type=int, default=5, help="sliding window size")
    parser.add_argument("--patience", type=int, default=5,
                        help="final-stage epochs without improvement before stopping")
    parser.add_argument("--epochs", type=int, default=50, help="total epoch budget")
    parser.add_argument("--direction", choices=[d.value for d in Direction],
                        default="forward")
    parser.add_argument("--reset-window", action=argparse.BooleanOptionalAction,
                        default=False, help="clear the window on stage transitions")
    parser.add_argument("--stagnation-saturates", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="treat non-positive average growth as saturation")


def _scheduler_config(args: argparse.Namespace) -> SchedulerConfig:
    config = SchedulerConfig(
        total_epochs=args.epochs,
        window_n=args.window,
        beta=args.beta,
        patience=args.patience,
        direction=Direction(args.direction),
        reset_window_on_transition=args.reset_window,
        stagnation_as_saturation=args.stagnation_saturates,
    )
    config.validate()
    return config


def _load_manifest(path: str) -> difficulty.CurriculumManifest:
    with open(path, "r", encoding="utf-8") as fh:
        return difficulty.CurriculumManifest.from_json(fh.read())


def cmd_cluster(args: argparse.Namespace) -> int:
    matrix = embedding_io.load_embeddings(args.input, args.format)
    config = kmeans.KmeansConfig(
        k=args.k, seed=args.seed, max_iters=args.max_iters,
        tol=args.tol, normalize=args.normalize,
    )
    model = kmeans.fit_kmeans(matrix, config)
    if model.degenerate:
        log.warning("all input rows are identical; centroids are duplicated")
    _write_output(_json_text(model.to_json_dict()), args.output)
    return 0


def cmd_assign(args: argparse.Namespace) -> int:
    matrix = embedding_io.load_embeddings(args.input, args.format)
    with open(args.clusters, "r", encoding="utf-8") as fh:
        model = kmeans.ClusterModel.from_json_dict(json.load(fh))
    stats = difficulty.compute_cluster_stats(matrix, model)
    levels = difficulty.assign_levels(stats)
    manifest = difficulty.build_manifest(matrix, model, levels, stats=stats)
    if args.seed is not None:
        manifest.provenance["seed"] = args.seed
    for warning in manifest.warnings:
        log.warning(warning)
    _write_output(manifest.to_json() + "\n", args.output)
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    manifest = _load_manifest(args.manifest)
    config = _scheduler_config(args)
    log_fh = open(args.transition_log, "w", encoding="utf-8") if args.transition_log else None
    try:
        protocol.run_session(
            manifest.level_counts, config, sys.stdin, sys.stdout, transition_log=log_fh
        )
    finally:
        if log_fh:
            log_fh.close()
    return 0


def _parse_sweep(expression: str) -> list[float]:
    try:
        name, _, rng = expression.partition("=")
        start, stop, step = (float(v) for v in rng.split(":"))
    except ValueError:
        raise ValueError(f"sweep {expression!r} is not name=start:stop:step") from None
    if name != "beta":
        raise ValueError(f"only beta sweeps are supported, got {name!r}")
    if step <= 0 or stop < start:
        raise ValueError(f"bad sweep range {rng!r}")
    count = int(round((stop - start) / step))
    values = [round(start + i * step, 12) for i in range(count + 1)]
    return [v for v in values if v <= stop + 1e-12]


def cmd_simulate(args: argparse.Namespace) -> int:
    manifest = _load_manifest(args.manifest)
    scheduler_config = _scheduler_config(args)
    caps = [float(v) for v in args.caps.split(",")]
    if len(caps) != 3:
        raise ValueError("--caps needs three comma-separated values")
    learner_config = simulate.SyntheticLearnerConfig(
        cap_easy=caps[0], cap_medium=caps[1], cap_full=caps[2],
        rate=args.rate, noise_sigma=args.noise, seed=args.learner_seed,
    )
    learner_config.validate()
    if args.sweep:
        rows = simulate.sweep_beta(
            manifest, scheduler_config, learner_config, _parse_sweep(args.sweep)
        )
        if args.output:
            simulate.write_sweep_csv(rows, args.output)
        else:
            sys.stdout.write(",".join(simulate.SWEEP_COLUMNS) + "\n")
            for row in rows:
                sys.stdout.write(
                    ",".join(
                        "" if row[c] is None else str(row[c])
                        for c in simulate.SWEEP_COLUMNS
                    )
                    + "\n"
                )
    else:
        report = simulate.run_simulation(manifest, scheduler_config, learner_config)
        _write_output(_json_text(report.to_json_dict()), args.output)
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    preds = metrics.load_predictions(args.pred, args.task)
    report = metrics.build_report(preds, args.k)
    _write_output(_json_text(report), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curlearn",
        description="Curriculum staging for embedding datasets: cluster, grade, schedule.",
    )
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="k-means over an embedding file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["binary", "jsonl"], default="binary")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("assign", help="grade clusters into difficulty levels")
    p.add_argument("--input", required=True, help="embedding file the clusters came from")
    p.add_argument("--format", choices=["binary", "jsonl"], default="binary")
    p.add_argument("--clusters", required=True, help="cluster model JSON")
    p.add_argument("--seed", type=int, default=None,
                   help="stamp the clustering seed into manifest provenance")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("schedule", help="drive a trainer over the stdio protocol")
    p.add_argument("--manifest", required=True)
    _add_scheduler_flags(p)
    p.add_argument("--transition-log", default=None, help="append-only JSONL audit log")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("simulate", help="run the synthetic learner against the scheduler")
    p.add_argument("--manifest", required=True)
    _add_scheduler_flags(p)
    p.add_argument("--caps", default="0.5,0.65,0.8",
                   help="stage ceilings as easy,medium,full")
    p.add_argument("--rate", type=float, default=0.7)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--learner-seed", type=int, default=0)
    p.add_argument("--sweep", default=None, help="e.g. beta=0.5:0.9:0.1 (emits CSV)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("metrics", help="score a predictions JSONL file")
    p.add_argument("--pred", required=True)
    p.add_argument("--task", choices=list(metrics.TASK_KINDS), required=True)
    p.add_argument("--k", type=int, default=1, help="K for precision@K")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CurlearnError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
