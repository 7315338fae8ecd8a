"""Score clusters and emit the easy/medium/hard curriculum manifest.

Two per-cluster signals drive the grading, both against the cluster's own
centroid: ``density_value`` is the mean squared distance (lower means a
tighter, more homogeneous cluster) and ``mean_distance`` is the mean
Euclidean distance. Since "hard" may come from either signal, the composite
score is the rank-sum of the two ascending ranks, which weighs them
symmetrically and is invariant to scaling.

Clusters sorted by composite score are cut into three contiguous groups,
Easy / Medium / Hard, choosing the cut that minimizes the largest group's
sample count (ties: earliest cut positions). With k = 2 the Medium level is
empty, with k = 1 everything is Easy; both cases carry a manifest warning
and downstream scheduling skips empty levels.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .embedding_io import EmbeddingMatrix
from .errors import EmptyCluster, InconsistentInputs
from .kmeans import ClusterModel, KmeansConfig


class DifficultyLevel(enum.IntEnum):
    EASY = 0
    MEDIUM = 1
    HARD = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "DifficultyLevel":
        return cls[label.upper()]


@dataclass
class ClusterStats:
    cluster_id: int
    size: int
    density_value: float
    mean_distance: float
    composite_rank: int = 0

    def to_json_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "size": self.size,
            "density_value": self.density_value,
            "mean_distance": self.mean_distance,
            "composite_rank": self.composite_rank,
        }


def compute_cluster_stats(matrix: EmbeddingMatrix, model: ClusterModel) -> list[ClusterStats]:
    """Mean squared and mean Euclidean distance to the centroid, per cluster."""
    if model.assignments.shape[0] != matrix.n:
        raise InconsistentInputs(
            f"model covers {model.assignments.shape[0]} rows, matrix has {matrix.n}"
        )
    if model.centroids.shape[1] != matrix.d:
        raise InconsistentInputs(
            f"centroids are {model.centroids.shape[1]}-D, matrix is {matrix.d}-D"
        )
    points64 = matrix.data.astype(np.float64)
    stats = []
    for c in range(model.k):
        members = points64[model.assignments == c]
        if members.shape[0] == 0:
            raise EmptyCluster(f"cluster {c} has no samples")
        sq = np.sum((members - model.centroids[c]) ** 2, axis=1)
        stats.append(
            ClusterStats(
                cluster_id=c,
                size=int(members.shape[0]),
                density_value=float(np.mean(sq)),
                mean_distance=float(np.mean(np.sqrt(sq))),
            )
        )
    return stats


def _min_ranks(values: list[float]) -> list[int]:
    """Competition ranking, ascending: rank = 1 + count of strictly smaller."""
    return [1 + sum(1 for other in values if other < v) for v in values]


def rank_clusters(stats: list[ClusterStats]) -> list[ClusterStats]:
    """Fill composite_rank and return stats ordered easiest to hardest.

    Ordering key is (composite_rank, mean_distance, cluster_id).
    """
    density_ranks = _min_ranks([s.density_value for s in stats])
    distance_ranks = _min_ranks([s.mean_distance for s in stats])
    for s, dr, mr in zip(stats, density_ranks, distance_ranks):
        s.composite_rank = dr + mr
    return sorted(stats, key=lambda s: (s.composite_rank, s.mean_distance, s.cluster_id))


def _best_three_way_cut(sizes: list[int]) -> tuple[int, int]:
    """Cut positions (i, j) splitting sizes into [0:i], [i:j], [j:] groups.

    Minimizes the largest group's sample total; ties resolve to the
    lexicographically earliest (i, j).
    """
    k = len(sizes)
    best: tuple[int, tuple[int, int]] | None = None
    for i, j in itertools.combinations(range(1, k), 2):
        load = max(sum(sizes[:i]), sum(sizes[i:j]), sum(sizes[j:]))
        if best is None or load < best[0]:
            best = (load, (i, j))
    assert best is not None
    return best[1]


def assign_levels(stats: list[ClusterStats]) -> dict[int, DifficultyLevel]:
    """Map each cluster id to Easy, Medium, or Hard."""
    if not stats:
        raise InconsistentInputs("no clusters to grade")
    ordered = rank_clusters(list(stats))
    if len(ordered) == 1:
        return {ordered[0].cluster_id: DifficultyLevel.EASY}
    if len(ordered) == 2:
        return {
            ordered[0].cluster_id: DifficultyLevel.EASY,
            ordered[1].cluster_id: DifficultyLevel.HARD,
        }
    i, j = _best_three_way_cut([s.size for s in ordered])
    levels: dict[int, DifficultyLevel] = {}
    for pos, s in enumerate(ordered):
        if pos < i:
            levels[s.cluster_id] = DifficultyLevel.EASY
        elif pos < j:
            levels[s.cluster_id] = DifficultyLevel.MEDIUM
        else:
            levels[s.cluster_id] = DifficultyLevel.HARD
    return levels


@dataclass
class CurriculumManifest:
    """Per-sample difficulty assignment plus the cluster grading that made it."""

    sample_ids: list[str]
    sample_clusters: list[int]
    sample_levels: list[DifficultyLevel]
    clusters: list[ClusterStats]
    provenance: dict
    warnings: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.sample_ids)

    @property
    def level_counts(self) -> dict[str, int]:
        counts = {lvl.label: 0 for lvl in DifficultyLevel}
        for lvl in self.sample_levels:
            counts[lvl.label] += 1
        return counts

    def level_of(self, sample_id: str) -> DifficultyLevel:
        return self.sample_levels[self.sample_ids.index(sample_id)]

    def to_json_dict(self) -> dict:
        return {
            "samples": [
                {"id": sid, "cluster": cluster, "level": lvl.label}
                for sid, cluster, lvl in zip(
                    self.sample_ids, self.sample_clusters, self.sample_levels
                )
            ],
            "clusters": [s.to_json_dict() for s in self.clusters],
            "level_counts": self.level_counts,
            "provenance": self.provenance,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CurriculumManifest":
        samples = obj["samples"]
        return cls(
            sample_ids=[s["id"] for s in samples],
            sample_clusters=[int(s["cluster"]) for s in samples],
            sample_levels=[DifficultyLevel.from_label(s["level"]) for s in samples],
            clusters=[
                ClusterStats(
                    cluster_id=int(c["cluster_id"]),
                    size=int(c["size"]),
                    density_value=float(c["density_value"]),
                    mean_distance=float(c["mean_distance"]),
                    composite_rank=int(c["composite_rank"]),
                )
                for c in obj["clusters"]
            ],
            provenance=dict(obj["provenance"]),
            warnings=list(obj.get("warnings", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "CurriculumManifest":
        return cls.from_json_dict(json.loads(text))


def build_manifest(
    matrix: EmbeddingMatrix,
    model: ClusterModel,
    levels: dict[int, DifficultyLevel],
    stats: list[ClusterStats] | None = None,
    config: KmeansConfig | None = None,
) -> CurriculumManifest:
    """Assemble and sanity-check the manifest for one (matrix, model) pair.

    ``config``, when the clustering configuration is still at hand, stamps
    seed and config hash into provenance; a manifest assembled from a bare
    model JSON records them as null.
    """
    if list(model.ids) != list(matrix.ids):
        raise InconsistentInputs("model ids do not match matrix ids")
    if set(levels.keys()) != set(range(model.k)):
        raise InconsistentInputs(
            f"level map covers clusters {sorted(levels)}, model has k={model.k}"
        )
    if stats is None:
        stats = compute_cluster_stats(matrix, model)
    ordered = rank_clusters(list(stats))

    # mean composite score must be weakly increasing easy -> medium -> hard
    means = []
    for lvl in DifficultyLevel:
        ranks = [s.composite_rank for s in ordered if levels[s.cluster_id] == lvl]
        if ranks:
            means.append(sum(ranks) / len(ranks))
    assert all(a <= b for a, b in zip(means, means[1:])), (
        "difficulty levels out of composite-score order"
    )

    warnings = []
    populated = {levels[s.cluster_id] for s in ordered}
    for lvl in DifficultyLevel:
        if lvl not in populated:
            warnings.append(f"level {lvl.label} is empty (k={model.k})")

    provenance = {
        "k": model.k,
        "seed": config.seed if config is not None else None,
        "config_hash": config.hash() if config is not None else None,
    }
    return CurriculumManifest(
        sample_ids=list(matrix.ids),
        sample_clusters=[int(a) for a in model.assignments],
        sample_levels=[levels[int(a)] for a in model.assignments],
        clusters=ordered,
        provenance=provenance,
        warnings=warnings,
    )
