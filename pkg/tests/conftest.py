import numpy as np
import pytest

from curlearn.difficulty import assign_levels, build_manifest, compute_cluster_stats
from curlearn.embedding_io import EmbeddingMatrix
from curlearn.kmeans import KmeansConfig, fit_kmeans


def three_blob_matrix(sizes=(5, 4, 3), d=4, spreads=(0.05, 0.4, 1.5), seed=11):
    """Well-separated blobs with increasing spread: easy, medium, hard."""
    rng = np.random.RandomState(seed)
    centers = np.zeros((3, d))
    centers[0, 0] = 0.0
    centers[1, 0] = 30.0
    centers[2, 0] = 60.0
    rows = []
    ids = []
    for b, (size, spread) in enumerate(zip(sizes, spreads)):
        for i in range(size):
            rows.append(centers[b] + rng.randn(d) * spread)
            ids.append(f"blob{b}-{i}")
    return EmbeddingMatrix(np.array(rows, dtype=np.float32), ids)


@pytest.fixture
def blob_matrix():
    return three_blob_matrix()


@pytest.fixture
def blob_manifest(blob_matrix):
    config = KmeansConfig(k=3, seed=7)
    model = fit_kmeans(blob_matrix, config)
    stats = compute_cluster_stats(blob_matrix, model)
    levels = assign_levels(stats)
    return build_manifest(blob_matrix, model, levels, stats=stats, config=config)


def random_matrix(n, d, seed, scale=1.0):
    rng = np.random.RandomState(seed)
    data = (rng.randn(n, d) * scale).astype(np.float32)
    ids = [f"s{i}" for i in range(n)]
    return EmbeddingMatrix(data, ids)
