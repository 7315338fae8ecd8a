"""End-to-end curriculum demo: toy data -> clustering -> staged training.

Builds the toy corpus, embeds it, runs the scheduler pipeline's cluster and
assign stages as subprocesses, then trains the bag-of-words classifier with
the training pool filtered to whatever difficulty levels the scheduler
currently allows. The trainer only ever sees scheduler decisions over the
stdio protocol and the manifest JSON on disk.
"""

from __future__ import annotations

import argparse
import csv
import json
import pathlib
import subprocess
import sys

from .embed import write_embedding_jsonl
from .session import connect, default_scheduler_command
from .toy import BagOfWordsClassifier, macro_f1, make_toy_dataset


def run_pipeline_cli(args: list[str]) -> None:
    proc = subprocess.run(
        default_scheduler_command() + args, capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise RuntimeError(f"pipeline step {args[0]} failed: {proc.stderr.strip()}")


def demo_run(
    out_dir,
    n_per_class: int = 40,
    seed: int = 11,
    epochs: int = 40,
    beta: float = 0.7,
    window: int = 4,
    patience: int = 5,
    reset_window: bool = True,
    embedding_dim: int = 16,
    cluster_seed: int = 7,
) -> dict:
    """Full curriculum run; returns the report and writes trajectory.csv."""
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    samples = make_toy_dataset(n_per_class=n_per_class, seed=seed)
    dev = [s for i, s in enumerate(samples) if i % 5 == 0]
    train = [s for i, s in enumerate(samples) if i % 5 != 0]
    by_id = {s.id: s for s in train}

    emb_path = out / "toy_embeddings.jsonl"
    clusters_path = out / "toy_clusters.json"
    manifest_path = out / "toy_manifest.json"
    write_embedding_jsonl(train, emb_path, dim=embedding_dim)
    run_pipeline_cli(
        ["cluster", "--input", str(emb_path), "--format", "jsonl",
         "--k", "3", "--seed", str(cluster_seed), "--output", str(clusters_path)]
    )
    run_pipeline_cli(
        ["assign", "--input", str(emb_path), "--format", "jsonl",
         "--clusters", str(clusters_path), "--seed", str(cluster_seed),
         "--output", str(manifest_path)]
    )

    model = BagOfWordsClassifier([s.text for s in train])
    dev_texts = [s.text for s in dev]
    dev_labels = [s.label for s in dev]

    session = connect(
        None,
        manifest_path,
        {
            "beta": beta,
            "window": window,
            "patience": patience,
            "epochs": epochs,
            # give each stage a fresh window so the model gets a real
            # training phase on the expanded pool before the next judgment
            "reset_window": reset_window,
        },
    )
    stages_visited = [tuple(session.active_levels)]
    pool_sizes: list[int] = []
    stop_reason = None
    try:
        while True:
            pool_ids = session.training_pool()
            pool = [by_id[sid] for sid in pool_ids]
            pool_sizes.append(len(pool))
            model.train_epoch([s.text for s in pool], [s.label for s in pool])
            score = macro_f1(dev_labels, model.predict(dev_texts))
            decision = session.epoch_step(score)
            if decision["action"] == "advance":
                stages_visited.append(tuple(session.active_levels))
            elif decision["action"] == "stop":
                stop_reason = decision["stop_reason"]
                break
    finally:
        session.close()

    trajectory_path = out / "trajectory.csv"
    with open(trajectory_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["epoch", "macro_f1", "action", "stage", "active_levels", "pool_size"],
        )
        writer.writeheader()
        writer.writerows(session.trajectory)

    report = {
        "stages_visited": [list(s) for s in stages_visited],
        "transition_epochs": [
            t["epoch"] for t in session.trajectory if t["action"] == "advance"
        ],
        "stop_epoch": session.epoch,
        "stop_reason": stop_reason,
        "final_macro_f1": session.trajectory[-1]["macro_f1"],
        "level_counts": session.manifest.level_counts,
        "pool_sizes": pool_sizes,
        "trajectory_csv": str(trajectory_path),
    }
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="curlearn-demo",
        description="Train the toy classifier under a staged curriculum.",
    )
    parser.add_argument("--output-dir", default="demo_run")
    parser.add_argument("--epochs", type=int, default=40)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--n-per-class", type=int, default=40)
    parser.add_argument("--beta", type=float, default=0.7)
    parser.add_argument("--window", type=int, default=4)
    parser.add_argument("--patience", type=int, default=5)
    args = parser.parse_args(argv)
    report = demo_run(
        args.output_dir,
        n_per_class=args.n_per_class,
        seed=args.seed,
        epochs=args.epochs,
        beta=args.beta,
        window=args.window,
        patience=args.patience,
    )
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
