"""K-means clustering of embedding rows with reproducible initialization.

Lloyd iterations from k-means++ seeding. All distances are squared
Euclidean and all accumulation happens in float64 even though the input
rows are float32: the objective sums n*d terms and single-precision drift
would break the per-iteration monotonicity guarantee.

Initialization draws come from the xorshift64* stream in :mod:`curlearn.rng`:
the first centroid is a Lemire-reduced uniform index, each further centroid
is the best of a few candidates sampled with probability proportional to
the squared distance from the nearest chosen centroid (greedy k-means++,
linear cumulative sums over row index). Restarts reuse the same stream in
sequence, so identical (matrix, config) yields bitwise-identical centroids
and assignments.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .embedding_io import EmbeddingMatrix
from .errors import KTooLarge, ShapeMismatch
from .rng import Xorshift64Star


@dataclass
class KmeansConfig:
    k: int = 3
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-6
    normalize: bool = False
    n_init: int = 10

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")

    def hash(self) -> str:
        """Stable digest of the configuration, recorded in manifest provenance."""
        canon = json.dumps(
            {
                "k": self.k,
                "seed": self.seed,
                "max_iters": self.max_iters,
                "tol": self.tol,
                "normalize": self.normalize,
                "n_init": self.n_init,
            },
            sort_keys=True,
        )
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass
class ClusterModel:
    """Fitted partition: centroids, per-row assignments, and the objective.

    ``wcss_history`` (one objective value per Lloyd iteration) and
    ``degenerate`` (all input rows identical while k > 1, leaving duplicated
    centroids) are in-memory diagnostics; the JSON form carries exactly the
    keys k, centroids, assignments, wcss, iterations_run, converged, ids.
    """

    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    wcss: float
    iterations_run: int
    converged: bool
    ids: list[str]
    wcss_history: list[float] = field(default_factory=list, repr=False, compare=False)
    degenerate: bool = field(default=False, compare=False)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "centroids": [[float(v) for v in row] for row in self.centroids],
            "assignments": [int(a) for a in self.assignments],
            "wcss": float(self.wcss),
            "iterations_run": self.iterations_run,
            "converged": self.converged,
            "ids": list(self.ids),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ClusterModel":
        return cls(
            k=int(obj["k"]),
            centroids=np.asarray(obj["centroids"], dtype=np.float64),
            assignments=np.asarray(obj["assignments"], dtype=np.int64),
            wcss=float(obj["wcss"]),
            iterations_run=int(obj["iterations_run"]),
            converged=bool(obj["converged"]),
            ids=list(obj["ids"]),
        )


def compute_wcss(points: np.ndarray, centroids: np.ndarray, assignments: np.ndarray) -> float:
    """Total within-cluster sum of squared Euclidean distances, in float64."""
    points = np.asarray(points)
    centroids = np.asarray(centroids)
    assignments = np.asarray(assignments)
    if points.ndim != 2 or centroids.ndim != 2 or assignments.ndim != 1:
        raise ShapeMismatch("points and centroids must be 2-D, assignments 1-D")
    if points.shape[0] != assignments.shape[0]:
        raise ShapeMismatch(
            f"{points.shape[0]} points but {assignments.shape[0]} assignments"
        )
    if points.shape[1] != centroids.shape[1]:
        raise ShapeMismatch(
            f"points are {points.shape[1]}-D but centroids are {centroids.shape[1]}-D"
        )
    if assignments.size and (assignments.min() < 0 or assignments.max() >= centroids.shape[0]):
        raise ShapeMismatch("assignment index out of range")
    diff = points.astype(np.float64) - centroids[assignments]
    return float(np.sum(diff * diff))


def _squared_distances_to(points64: np.ndarray, centroid: np.ndarray) -> np.ndarray:
    diff = points64 - centroid
    return np.sum(diff * diff, axis=1)


def _weighted_index(best_sq: np.ndarray, rng: Xorshift64Star) -> int:
    """One draw with probability proportional to best_sq (linear cumsum)."""
    n = best_sq.shape[0]
    r = rng.uniform() * float(np.sum(best_sq))
    cum = np.cumsum(best_sq)
    idx = int(np.searchsorted(cum, r, side="right"))
    if idx >= n:
        idx = int(np.flatnonzero(best_sq > 0)[-1])
    return idx


def _kmeanspp_init(points64: np.ndarray, k: int, rng: Xorshift64Star) -> np.ndarray:
    """Greedy k-means++ seeding; returns the chosen row indices in draw order.

    Each step draws 2 + floor(log2(k)) candidates proportionally to the
    squared distance from the nearest chosen centroid and keeps the one
    that minimizes the resulting potential (first drawn wins ties).
    """
    n = points64.shape[0]
    trials = 2 + int(math.log2(k)) if k > 1 else 1
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.below(n)
    best_sq = _squared_distances_to(points64, points64[chosen[0]])
    for i in range(1, k):
        if float(np.sum(best_sq)) > 0.0:
            best_idx = -1
            best_potential = math.inf
            for _ in range(trials):
                cand = _weighted_index(best_sq, rng)
                potential = float(
                    np.sum(np.minimum(best_sq, _squared_distances_to(points64, points64[cand])))
                )
                if potential < best_potential:
                    best_potential = potential
                    best_idx = cand
            idx = best_idx
        else:
            # all remaining rows duplicate a chosen centroid; take the
            # smallest index not yet chosen to stay deterministic
            taken = set(int(c) for c in chosen[:i])
            idx = next(j for j in range(n) if j not in taken)
        chosen[i] = idx
        best_sq = np.minimum(best_sq, _squared_distances_to(points64, points64[idx]))
    return chosen


def _assign(points64: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Nearest-centroid assignment; ties go to the lowest cluster index."""
    n = points64.shape[0]
    dist = np.empty((n, centroids.shape[0]), dtype=np.float64)
    for j in range(centroids.shape[0]):
        dist[:, j] = _squared_distances_to(points64, centroids[j])
    return np.argmin(dist, axis=1).astype(np.int64)


def _lloyd_once(
    points64: np.ndarray, k: int, config: KmeansConfig, rng: Xorshift64Star
) -> tuple[np.ndarray, np.ndarray, list[float], bool, int]:
    """One k-means++ seeding followed by Lloyd updates to convergence."""
    centroids = points64[_kmeanspp_init(points64, k, rng)].copy()

    assignments = np.zeros(points64.shape[0], dtype=np.int64)
    wcss_history: list[float] = []
    prev_wcss: float | None = None
    converged = False
    iterations = 0

    for iterations in range(1, config.max_iters + 1):
        assignments = _assign(points64, centroids)

        counts = np.bincount(assignments, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # an emptied cluster steals the row farthest from its stale
            # centroid; moving a row to its own singleton cluster never
            # raises the objective, so monotonicity survives the repair
            claimed: set[int] = set()
            for c in empty:
                sq = _squared_distances_to(points64, centroids[c])
                for cand in np.argsort(-sq, kind="stable"):
                    cand = int(cand)
                    if cand in claimed or counts[assignments[cand]] <= 1:
                        continue
                    claimed.add(cand)
                    counts[assignments[cand]] -= 1
                    assignments[cand] = c
                    counts[c] = 1
                    break

        for j in range(k):
            members = points64[assignments == j]
            if members.shape[0]:
                centroids[j] = members.mean(axis=0)

        wcss = compute_wcss(points64, centroids, assignments)
        if wcss_history:
            assert wcss <= wcss_history[-1] * (1.0 + 1e-12) + 1e-300, (
                "objective increased across a Lloyd iteration"
            )
        wcss_history.append(wcss)
        if prev_wcss is not None and (prev_wcss - wcss) <= config.tol * prev_wcss:
            converged = True
            break
        if wcss == 0.0:
            converged = True
            break
        prev_wcss = wcss

    return centroids, assignments, wcss_history, converged, iterations


def fit_kmeans(matrix: EmbeddingMatrix, config: KmeansConfig) -> ClusterModel:
    """Cluster matrix rows into config.k groups.

    Runs ``config.n_init`` independent k-means++ seedings (drawn in sequence
    from the one seeded stream) and keeps the run with the lowest objective;
    Lloyd itself only finds local optima, restarts are the standard remedy.
    Each run iterates until the relative WCSS decrease falls below
    ``config.tol`` or ``config.max_iters`` is reached. Clusters emptied by
    an update are repaired by donating the row farthest from the emptied
    centroid, which keeps the objective non-increasing; the returned model
    never has an empty cluster. Raises KTooLarge when k > n. All rows
    identical with k > 1 is not an error: the model comes back with
    duplicated centroids and ``degenerate`` set.
    """
    config.validate()
    n = matrix.n
    if config.k > n:
        raise KTooLarge(f"k={config.k} exceeds sample count n={n}")

    points64 = matrix.data.astype(np.float64)
    if config.normalize:
        norms = np.sqrt(np.sum(points64 * points64, axis=1, keepdims=True))
        np.divide(points64, norms, out=points64, where=norms > 0)

    all_identical = bool(np.all(points64 == points64[0]))

    rng = Xorshift64Star(config.seed)
    best = None
    for _ in range(config.n_init):
        run = _lloyd_once(points64, config.k, config, rng)
        if best is None or run[2][-1] < best[2][-1]:  # strictly better: first run wins ties
            best = run
        if best[2][-1] == 0.0:
            break

    centroids, assignments, wcss_history, converged, iterations = best
    return ClusterModel(
        k=config.k,
        centroids=centroids,
        assignments=assignments,
        wcss=wcss_history[-1],
        iterations_run=iterations,
        converged=converged,
        ids=list(matrix.ids),
        wcss_history=wcss_history,
        degenerate=all_identical and config.k > 1,
    )
