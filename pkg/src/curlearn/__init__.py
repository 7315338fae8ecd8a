"""Curriculum-learning engine for precomputed text embeddings.

Clusters embeddings into difficulty levels and drives an external training
loop easy -> medium -> hard, advancing stages when macro-F1 growth
saturates against an adaptive threshold.
"""

from .difficulty import (
    ClusterStats,
    CurriculumManifest,
    DifficultyLevel,
    assign_levels,
    build_manifest,
    compute_cluster_stats,
)
from .embedding_io import EmbeddingMatrix, SampleRecord, load_embeddings, write_embeddings
from .kmeans import ClusterModel, KmeansConfig, compute_wcss, fit_kmeans
from .metrics import (
    PredictionSet,
    auroc,
    build_report,
    macro_auroc,
    macro_f1,
    micro_auroc,
    micro_f1,
    precision_at_k,
)
from .rng import Xorshift64Star
from .scheduler import (
    Action,
    Direction,
    GrowthTracker,
    SchedulerConfig,
    SchedulerDecision,
    SchedulerState,
    StopReason,
    average_growth_rate,
    instantaneous_growth_rate,
    is_saturated,
    observe_epoch,
)
from .simulate import RunReport, SyntheticLearnerConfig, run_simulation, step_learner, sweep_beta

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ClusterModel",
    "ClusterStats",
    "CurriculumManifest",
    "DifficultyLevel",
    "Direction",
    "EmbeddingMatrix",
    "GrowthTracker",
    "KmeansConfig",
    "PredictionSet",
    "RunReport",
    "SampleRecord",
    "SchedulerConfig",
    "SchedulerDecision",
    "SchedulerState",
    "StopReason",
    "SyntheticLearnerConfig",
    "Xorshift64Star",
    "assign_levels",
    "auroc",
    "average_growth_rate",
    "build_manifest",
    "build_report",
    "compute_cluster_stats",
    "compute_wcss",
    "fit_kmeans",
    "instantaneous_growth_rate",
    "is_saturated",
    "load_embeddings",
    "macro_auroc",
    "macro_f1",
    "micro_auroc",
    "micro_f1",
    "observe_epoch",
    "precision_at_k",
    "run_simulation",
    "step_learner",
    "sweep_beta",
    "write_embeddings",
]
