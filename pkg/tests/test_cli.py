import json
import pathlib
import struct
import subprocess
import sys

import numpy as np
import pytest

from curlearn.embedding_io import EmbeddingMatrix, write_embeddings
from curlearn.kmeans import KmeansConfig
from curlearn.scheduler import SchedulerConfig
from curlearn.simulate import SyntheticLearnerConfig, run_simulation

DATA = pathlib.Path(__file__).parent / "data"


def run_cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "curlearn.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )


@pytest.fixture
def four_point_file(tmp_path):
    matrix = EmbeddingMatrix(
        np.array([[0.0], [1.0], [10.0], [11.0]], dtype=np.float32),
        ["p0", "p1", "p2", "p3"],
    )
    path = tmp_path / "four.emb"
    write_embeddings(matrix, path, "binary")
    return path


def test_cluster_four_point_fixture(four_point_file, tmp_path):
    out = tmp_path / "model.json"
    proc = run_cli(
        "cluster", "--input", str(four_point_file), "--k", "2", "--seed", "1",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    model = json.loads(out.read_text())
    assert model["wcss"] == pytest.approx(1.0, abs=1e-9)
    assert sorted(c[0] for c in model["centroids"]) == pytest.approx([0.5, 10.5])
    assert model["ids"] == ["p0", "p1", "p2", "p3"]


def test_cluster_k_too_large_exit_code(four_point_file, tmp_path):
    proc = run_cli(
        "cluster", "--input", str(four_point_file), "--k", "9",
        "--output", str(tmp_path / "x.json"),
    )
    assert proc.returncode == 3
    assert "KTooLarge" in proc.stderr
    assert proc.stdout == ""


def test_cluster_reruns_byte_identical(four_point_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        proc = run_cli(
            "cluster", "--input", str(four_point_file), "--k", "2", "--seed", "42",
            "--output", str(out),
        )
        assert proc.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_assign_produces_graded_manifest(tmp_path):
    out = tmp_path / "manifest.json"
    proc = run_cli(
        "assign", "--input", str(DATA / "blobs.emb"),
        "--clusters", str(DATA / "blobs_clusters.json"),
        "--seed", "7", "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    manifest = json.loads(out.read_text())
    assert manifest["level_counts"] == {"easy": 5, "medium": 4, "hard": 3}
    assert manifest["provenance"]["k"] == 3
    assert manifest["provenance"]["seed"] == 7
    ranks = [c["composite_rank"] for c in manifest["clusters"]]
    assert ranks == sorted(ranks)


def test_usage_error_exit_code(tmp_path):
    proc = run_cli(
        "simulate", "--manifest", str(DATA / "manifest_blobs.json"), "--beta", "1.5"
    )
    assert proc.returncode == 2
    assert "beta" in proc.stderr


def test_unknown_flag_rejected():
    proc = run_cli("cluster", "--input", "x", "--frobnicate")
    assert proc.returncode == 2


@pytest.mark.parametrize("name", ["growth", "plateau", "regression"])
def test_schedule_golden_transcripts(name):
    golden = json.loads((DATA / f"golden_{name}.json").read_text())
    stdin = "".join(line + "\n" for line in golden["requests"])
    proc = run_cli(
        "schedule", "--manifest", str(DATA / golden["manifest"]),
        *golden["schedule_args"], stdin=stdin,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.splitlines() == golden["transcript"]
    final = json.loads(proc.stdout.splitlines()[-1])
    assert final["action"] == "stop"


def test_schedule_recovers_from_malformed_line():
    golden = json.loads((DATA / "golden_plateau.json").read_text())
    requests = list(golden["requests"])
    requests.insert(2, "this is not json")
    requests.insert(4, json.dumps({"type": "epoch_result", "epoch": 99, "macro_f1": 0.5}))
    stdin = "".join(line + "\n" for line in requests)
    proc = run_cli(
        "schedule", "--manifest", str(DATA / golden["manifest"]),
        *golden["schedule_args"], stdin=stdin,
    )
    assert proc.returncode == 0
    lines = [json.loads(line) for line in proc.stdout.splitlines()]
    errors = [l for l in lines if l["type"] == "error"]
    assert len(errors) == 2
    decisions = [json.dumps(l) for l in lines if l["type"] in ("hello", "decision")]
    assert decisions == golden["transcript"]
    assert lines[-1]["action"] == "stop"


def test_schedule_transition_log(tmp_path):
    golden = json.loads((DATA / "golden_growth.json").read_text())
    log_path = tmp_path / "transitions.jsonl"
    stdin = "".join(line + "\n" for line in golden["requests"])
    proc = run_cli(
        "schedule", "--manifest", str(DATA / golden["manifest"]),
        *golden["schedule_args"], "--transition-log", str(log_path),
        stdin=stdin,
    )
    assert proc.returncode == 0
    entries = [json.loads(l) for l in log_path.read_text().splitlines()]
    kinds = [e["event"] for e in entries]
    assert kinds == ["transition", "transition", "stop"]
    assert entries[0]["from_stage"] == "easy"
    assert entries[0]["to_stage"] == "easy_medium"
    assert entries[-1]["reason"] == "saturated"


def test_simulate_matches_library(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli(
        "simulate", "--manifest", str(DATA / "manifest_blobs.json"),
        "--beta", "0.7", "--window", "3", "--epochs", "80",
        "--caps", "0.5,0.65,0.8", "--rate", "0.7", "--noise", "0",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    got = json.loads(out.read_text())

    manifest_obj = json.loads((DATA / "manifest_blobs.json").read_text())
    from curlearn.difficulty import CurriculumManifest

    report = run_simulation(
        CurriculumManifest.from_json_dict(manifest_obj),
        SchedulerConfig(total_epochs=80, window_n=3, beta=0.7, patience=5),
        SyntheticLearnerConfig(
            cap_easy=0.5, cap_medium=0.65, cap_full=0.8, rate=0.7, noise_sigma=0.0
        ),
    )
    assert got == report.to_json_dict()


def test_simulate_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    proc = run_cli(
        "simulate", "--manifest", str(DATA / "manifest_blobs.json"),
        "--epochs", "120", "--window", "5", "--rate", "0.3", "--noise", "0",
        "--sweep", "beta=0.5:0.9:0.1", "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "beta,k,direction,transition1,transition2,stop_epoch,final_f1"
    assert len(lines) == 6
    assert [l.split(",")[0] for l in lines[1:]] == ["0.5", "0.6", "0.7", "0.8", "0.9"]


def test_metrics_command(tmp_path):
    pred = tmp_path / "preds.jsonl"
    rows = [
        {"id": "a", "true": 1, "scores": [0.2, 0.8]},
        {"id": "b", "true": 0, "scores": [0.9, 0.1]},
        {"id": "c", "true": 1, "scores": [0.4, 0.6]},
        {"id": "d", "true": 0, "scores": [0.3, 0.7]},
    ]
    pred.write_text("".join(json.dumps(r) + "\n" for r in rows))
    proc = run_cli("metrics", "--pred", str(pred), "--task", "binary", "--k", "1")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert list(report) == ["macro_f1", "micro_f1", "macro_auc", "micro_auc", "p_at_k"]
    # hand check: predictions argmax -> [1, 0, 1, 1]; class1 f1 = 4/5, class0 f1 = 2/3
    assert report["macro_f1"] == pytest.approx((0.8 + 2 / 3) / 2)
    assert report["micro_f1"] == pytest.approx(0.75)


def test_pipeline_end_to_end_byte_identical(tmp_path):
    rng = np.random.RandomState(31)
    matrix = EmbeddingMatrix(
        np.vstack(
            [
                rng.randn(8, 3) * 0.1,
                rng.randn(6, 3) * 0.5 + 4,
                rng.randn(5, 3) * 2.0 + 9,
            ]
        ).astype(np.float32),
        [f"s{i}" for i in range(19)],
    )
    emb = tmp_path / "pipe.emb"
    write_embeddings(matrix, emb, "binary")

    def pipeline(tag):
        clusters = tmp_path / f"clusters_{tag}.json"
        manifest = tmp_path / f"manifest_{tag}.json"
        report = tmp_path / f"report_{tag}.json"
        assert run_cli(
            "cluster", "--input", str(emb), "--k", "3", "--seed", "5",
            "--output", str(clusters),
        ).returncode == 0
        assert run_cli(
            "assign", "--input", str(emb), "--clusters", str(clusters),
            "--seed", "5", "--output", str(manifest),
        ).returncode == 0
        assert run_cli(
            "simulate", "--manifest", str(manifest), "--epochs", "60",
            "--noise", "0.02", "--learner-seed", "11", "--output", str(report),
        ).returncode == 0
        return clusters.read_bytes(), manifest.read_bytes(), report.read_bytes()

    assert pipeline("one") == pipeline("two")
