"""Evaluation metrics: macro/micro F1, macro/micro AUROC, precision@K.

Conventions, fixed for determinism and exactness:

* Per-class F1 with a zero denominator contributes 0 and still enters the
  macro average (so a class absent from both truth and prediction lowers it).
* Hard predictions, when not supplied, derive from scores: argmax for
  single-label tasks, a 0.5 (configurable) threshold for multilabel.
* AUROC is the Mann-Whitney rank statistic with ties counted one half,
  accumulated in integer arithmetic so the value matches a pairwise
  comparison count bit for bit. One-vs-rest per class: the macro average is
  unweighted over classes where both a positive and a negative exist, the
  micro variant pools every (sample, class) pair into one binary problem.
* precision@K breaks score ties by ascending class index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, KExceedsClasses, MalformedHeader, SingleClassOnly

TASK_KINDS = ("binary", "multiclass", "multilabel")


@dataclass
class PredictionSet:
    """Truths and per-class scores (and/or hard predictions) for n samples.

    ``truths`` holds one class index per sample for binary/multiclass tasks
    and a collection of class indices for multilabel. ``scores`` is (n, L).
    ``predictions`` may supply hard predictions directly: shape (n,) for
    single-label tasks, (n, L) 0/1 for multilabel.
    """

    task_kind: str
    class_count: int
    truths: list
    scores: np.ndarray | None = None
    predictions: np.ndarray | None = None
    threshold: float = 0.5
    ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.task_kind not in TASK_KINDS:
            raise ValueError(f"task_kind must be one of {TASK_KINDS}")
        if self.class_count < 2:
            raise ValueError("class_count must be >= 2")
        if self.task_kind == "binary" and self.class_count != 2:
            raise ValueError("binary task implies class_count == 2")
        if len(self.truths) == 0:
            raise EmptyInput("no samples")
        if self.scores is not None:
            self.scores = np.asarray(self.scores, dtype=np.float64)
            if self.scores.shape != (len(self.truths), self.class_count):
                raise ValueError(
                    f"scores shape {self.scores.shape} != "
                    f"({len(self.truths)}, {self.class_count})"
                )
        if self.scores is None and self.predictions is None:
            raise ValueError("need scores or hard predictions")
        if self.task_kind == "multilabel":
            self.truths = [frozenset(int(c) for c in t) for t in self.truths]
            for i, t in enumerate(self.truths):
                if any(c < 0 or c >= self.class_count for c in t):
                    raise ValueError(f"sample {i}: label set {sorted(t)} out of range")
        else:
            self.truths = [int(t) for t in self.truths]
            for i, t in enumerate(self.truths):
                if t < 0 or t >= self.class_count:
                    raise ValueError(f"sample {i}: class {t} out of range")

    @property
    def n(self) -> int:
        return len(self.truths)

    def hard_predictions(self) -> np.ndarray:
        """(n,) class indices, or an (n, L) 0/1 matrix for multilabel."""
        if self.predictions is not None:
            return np.asarray(self.predictions)
        if self.task_kind == "multilabel":
            return (self.scores >= self.threshold).astype(np.int64)
        return np.argmax(self.scores, axis=1)  # ties: lowest class index

    def truth_matrix(self) -> np.ndarray:
        """(n, L) 0/1 class-membership indicators."""
        out = np.zeros((self.n, self.class_count), dtype=np.int64)
        if self.task_kind == "multilabel":
            for i, t in enumerate(self.truths):
                for c in t:
                    out[i, c] = 1
        else:
            out[np.arange(self.n), self.truths] = 1
        return out

    def prediction_matrix(self) -> np.ndarray:
        hard = self.hard_predictions()
        if hard.ndim == 2:
            return hard.astype(np.int64)
        out = np.zeros((self.n, self.class_count), dtype=np.int64)
        out[np.arange(self.n), hard] = 1
        return out


def _class_counts(preds: PredictionSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    truth = preds.truth_matrix()
    pred = preds.prediction_matrix()
    tp = np.sum((truth == 1) & (pred == 1), axis=0)
    fp = np.sum((truth == 0) & (pred == 1), axis=0)
    fn = np.sum((truth == 1) & (pred == 0), axis=0)
    return tp, fp, fn


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2.0 * tp / denom if denom else 0.0


def macro_f1(preds: PredictionSet) -> float:
    """Unweighted mean of per-class F1 over all classes."""
    tp, fp, fn = _class_counts(preds)
    return float(
        sum(_f1(int(t), int(p), int(n)) for t, p, n in zip(tp, fp, fn))
        / preds.class_count
    )


def micro_f1(preds: PredictionSet) -> float:
    """F1 over globally pooled true/false positive and negative counts."""
    tp, fp, fn = _class_counts(preds)
    return _f1(int(tp.sum()), int(fp.sum()), int(fn.sum()))


def auroc(scores, labels) -> float:
    """Probability a random positive outranks a random negative, ties half.

    Computed from tie-averaged ranks with pure integer accumulation, so the
    result is bitwise identical to counting all positive/negative pairs.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise ValueError("scores and labels must be 1-D and aligned")
    n = scores.shape[0]
    n_pos = int(labels.sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassOnly(f"{n_pos} positives, {n_neg} negatives")
    order = np.argsort(scores, kind="mergesort")
    doubled_rank_sum = 0  # sum over positives of (first + last) 1-based tie ranks
    i = 0
    while i < n:
        j = i
        while j + 1 < n and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        doubled = (i + 1) + (j + 1)
        for pos in range(i, j + 1):
            if labels[order[pos]]:
                doubled_rank_sum += doubled
        i = j + 1
    numerator = doubled_rank_sum - n_pos * (n_pos + 1)
    return numerator / (2 * n_pos * n_neg)


def _ovr_labels(preds: PredictionSet, c: int) -> np.ndarray:
    if preds.task_kind == "multilabel":
        return np.array([1 if c in t else 0 for t in preds.truths], dtype=np.int64)
    return np.array([1 if t == c else 0 for t in preds.truths], dtype=np.int64)


def macro_auroc(preds: PredictionSet) -> float:
    """Unweighted one-vs-rest AUROC over classes with both outcomes present."""
    if preds.scores is None:
        raise ValueError("AUROC needs scores")
    per_class = []
    for c in range(preds.class_count):
        labels = _ovr_labels(preds, c)
        pos = int(labels.sum())
        if pos == 0 or pos == preds.n:
            continue
        per_class.append(auroc(preds.scores[:, c], labels))
    if not per_class:
        raise SingleClassOnly("no class has both positive and negative examples")
    return float(sum(per_class) / len(per_class))


def micro_auroc(preds: PredictionSet) -> float:
    """AUROC over all (sample, class) pairs pooled into one binary problem."""
    if preds.scores is None:
        raise ValueError("AUROC needs scores")
    labels = preds.truth_matrix().reshape(-1)
    return auroc(preds.scores.reshape(-1), labels)


def precision_at_k(preds: PredictionSet, k: int) -> float:
    """Mean over samples of |top-k predicted classes ∩ true set| / k."""
    if preds.scores is None:
        raise ValueError("precision@K needs scores")
    if k > preds.class_count:
        raise KExceedsClasses(f"k={k} exceeds class count {preds.class_count}")
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 0.0
    for i in range(preds.n):
        # stable sort on negated scores: ties resolve to the lower class index
        top = np.argsort(-preds.scores[i], kind="mergesort")[:k]
        true_set = (
            preds.truths[i]
            if preds.task_kind == "multilabel"
            else {preds.truths[i]}
        )
        total += sum(1 for c in top if int(c) in true_set) / k
    return total / preds.n


def build_report(preds: PredictionSet, k: int) -> dict:
    """All five metrics keyed exactly as the report schema requires."""
    return {
        "macro_f1": macro_f1(preds),
        "micro_f1": micro_f1(preds),
        "macro_auc": macro_auroc(preds),
        "micro_auc": micro_auroc(preds),
        "p_at_k": precision_at_k(preds, k),
    }


def load_predictions(path, task_kind: str) -> PredictionSet:
    """Read a predictions JSONL file: {"id", "true": int|[int], "scores": [...]}."""
    ids: list[str] = []
    truths: list = []
    score_rows: list[list[float]] = []
    class_count: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for row, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedHeader(f"{path}: row {row} is not valid JSON") from exc
            if not isinstance(record, dict) or not {"id", "true", "scores"} <= record.keys():
                raise MalformedHeader(f"{path}: row {row} lacks id/true/scores keys")
            scores = record["scores"]
            if class_count is None:
                class_count = len(scores)
            elif len(scores) != class_count:
                raise MalformedHeader(
                    f"{path}: row {row} has {len(scores)} scores, expected {class_count}"
                )
            ids.append(record["id"])
            truths.append(record["true"])
            score_rows.append(scores)
    if not score_rows:
        raise EmptyInput(f"{path}: no prediction records")
    return PredictionSet(
        task_kind=task_kind,
        class_count=int(class_count),
        truths=truths,
        scores=np.array(score_rows, dtype=np.float64),
        ids=ids,
    )
