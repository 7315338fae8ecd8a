"""Independent reference implementations used as test oracles.

Everything here is deliberately written straight-line with plain Python
lists and explicit loops, without importing the implementation under test,
so a disagreement always points at the production code.
"""

from __future__ import annotations

import itertools
import math


def naive_wcss(points, centroids, assignments) -> float:
    """Two explicit loops over rows and dimensions, double accumulation."""
    total = 0.0
    for row, cluster in zip(points, assignments):
        centroid = centroids[cluster]
        for a, b in zip(row, centroid):
            diff = float(a) - float(b)
            total += diff * diff
    return total


def brute_force_k2_wcss(points) -> float:
    """Global two-cluster optimum by enumerating every non-empty split."""
    n = len(points)
    d = len(points[0])
    best = math.inf
    for mask in range(1, 2**n - 1):
        groups = ([], [])
        for i in range(n):
            groups[(mask >> i) & 1].append(points[i])
        total = 0.0
        for group in groups:
            mean = [sum(float(row[j]) for row in group) / len(group) for j in range(d)]
            for row in group:
                for j in range(d):
                    diff = float(row[j]) - mean[j]
                    total += diff * diff
        best = min(best, total)
    return best


def pairwise_auroc(scores, labels) -> float:
    """All positive/negative pairs compared directly; ties count one half."""
    pos = [float(s) for s, y in zip(scores, labels) if y == 1]
    neg = [float(s) for s, y in zip(scores, labels) if y == 0]
    wins = 0
    ties = 0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1
            elif p == q:
                ties += 1
    return (2 * wins + ties) / (2 * len(pos) * len(neg))


def confusion_f1(pairs) -> float:
    """F1 from (truth, prediction) boolean pairs for one class."""
    tp = sum(1 for t, p in pairs if t and p)
    fp = sum(1 for t, p in pairs if not t and p)
    fn = sum(1 for t, p in pairs if t and not p)
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def best_contiguous_three_cut(sizes) -> tuple[int, int]:
    """Exhaustive search over the C(k-1, 2) contiguous three-way cuts.

    Minimizes the largest group's total; ties resolve to the
    lexicographically earliest cut pair.
    """
    best = None
    for i, j in itertools.combinations(range(1, len(sizes)), 2):
        load = max(sum(sizes[:i]), sum(sizes[i:j]), sum(sizes[j:]))
        key = (load, i, j)
        if best is None or key < best:
            best = key
    return best[1], best[2]


def reference_schedule_events(
    next_f1,
    *,
    beta: float,
    window_n: int,
    total_epochs: int,
    patience: int,
    n_stages: int,
    reset_window_on_transition: bool = False,
    stagnation_as_saturation: bool = True,
):
    """Straight-line trace of the staged training loop.

    ``next_f1(stage_index, epochs_in_stage)`` supplies the macro-F1 for each
    epoch, so closed-form stage-dependent curves and fixed prerecorded
    sequences can both be replayed. Returns the ordered event list:
    ("advance", epoch, new_stage_index) and a final ("stop", epoch, reason).
    """
    events = []
    window: list[float] = []
    stage = 0
    epochs_in_stage = 0
    best = None
    since_improvement = 0

    for epoch in range(1, total_epochs + 1):
        epochs_in_stage += 1
        f1 = next_f1(stage, epochs_in_stage)

        window.append(f1)
        if len(window) > window_n:
            window.pop(0)

        if best is None or f1 > best:
            best = f1
            since_improvement = 0
        else:
            since_improvement += 1

        saturated = False
        if len(window) == window_n:
            diffs = [window[i + 1] - window[i] for i in range(window_n - 1)]
            gamma_bar = sum(diffs) / (window_n - 1)
            gamma_delta = window[-1] - window[-2]
            if stagnation_as_saturation and gamma_bar <= 0.0:
                saturated = True
            elif gamma_delta < beta * gamma_bar:
                saturated = True

        at_final = stage == n_stages - 1
        if saturated and at_final:
            events.append(("stop", epoch, "saturated"))
            break
        if at_final and since_improvement >= patience:
            events.append(("stop", epoch, "patience_exhausted"))
            break
        if epoch >= total_epochs:
            events.append(("stop", epoch, "epoch_budget"))
            break
        if saturated:
            stage += 1
            events.append(("advance", epoch, stage))
            epochs_in_stage = 0
            best = None
            since_improvement = 0
            if reset_window_on_transition:
                window = []

    return events
