import csv
import json

from curlearn_adapter.embed import embed_text, write_embedding_jsonl
from curlearn_adapter.toy import (
    BagOfWordsClassifier,
    macro_f1,
    make_toy_dataset,
)


def test_toy_dataset_deterministic():
    a = make_toy_dataset(n_per_class=10, seed=3)
    b = make_toy_dataset(n_per_class=10, seed=3)
    assert [(s.id, s.text, s.label) for s in a] == [(s.id, s.text, s.label) for s in b]
    assert len(a) == 30
    assert len({s.id for s in a}) == 30


def test_embeddings_deterministic_and_jsonl_shaped(tmp_path):
    samples = make_toy_dataset(n_per_class=5, seed=1)
    assert embed_text(samples[0].text) == embed_text(samples[0].text)
    path = tmp_path / "emb.jsonl"
    write_embedding_jsonl(samples, path, dim=16)
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(records) == len(samples)
    assert all(set(r) == {"id", "vec", "label"} for r in records)
    assert all(len(r["vec"]) == 16 for r in records)


def test_classifier_learns_the_toy_task():
    samples = make_toy_dataset(n_per_class=30, seed=5)
    model = BagOfWordsClassifier([s.text for s in samples])
    texts = [s.text for s in samples]
    labels = [s.label for s in samples]
    for _ in range(25):
        model.train_epoch(texts, labels)
    assert macro_f1(labels, model.predict(texts)) > 0.9


def test_local_macro_f1_conventions():
    assert macro_f1(["garden", "orbit", "pastry"], ["garden", "orbit", "pastry"]) == 1.0
    # a class absent from truth and prediction scores zero but is averaged
    assert macro_f1(["garden", "orbit"], ["garden", "orbit"]) == 2 / 3
    assert macro_f1(["garden", "garden"], ["garden", "garden"]) == 1 / 3


def test_demo_visits_all_stages_and_stops(demo_report):
    report, _ = demo_report
    assert report["stages_visited"] == [
        ["easy"],
        ["easy", "medium"],
        ["easy", "medium", "hard"],
    ]
    assert report["stop_reason"] in {"saturated", "patience_exhausted", "epoch_budget"}
    assert report["stop_epoch"] <= 40


def test_demo_pool_sizes_match_cumulative_level_counts(demo_report):
    report, _ = demo_report
    counts = report["level_counts"]
    expected_levels = [
        counts["easy"],
        counts["easy"] + counts["medium"],
        counts["easy"] + counts["medium"] + counts["hard"],
    ]
    assert sorted(set(report["pool_sizes"])) == expected_levels
    # the pool never shrinks across the run
    assert report["pool_sizes"] == sorted(report["pool_sizes"])


def test_demo_trajectory_csv(demo_report):
    report, out = demo_report
    with open(out / "trajectory.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == report["stop_epoch"]
    assert rows[-1]["action"] == "stop"
    assert [r["action"] for r in rows].count("advance") == 2
    assert set(rows[0]) == {
        "epoch", "macro_f1", "action", "stage", "active_levels", "pool_size"
    }


def test_demo_reproducible(tmp_path):
    from curlearn_adapter.demo import demo_run

    r1 = demo_run(tmp_path / "one", n_per_class=24, seed=4, epochs=30)
    r2 = demo_run(tmp_path / "two", n_per_class=24, seed=4, epochs=30)
    assert (tmp_path / "one" / "trajectory.csv").read_bytes() == (
        tmp_path / "two" / "trajectory.csv"
    ).read_bytes()
    for key in ("stages_visited", "transition_epochs", "stop_epoch",
                "stop_reason", "final_macro_f1", "pool_sizes"):
        assert r1[key] == r2[key]
