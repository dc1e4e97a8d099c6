"""Seeded synthetic fixtures: well-separated Gaussian blobs on the sphere.

The only randomness in the package lives here; everything downstream is
deterministic given the generated data.
"""

from __future__ import annotations

import numpy as np

from .calibrate import LabeledDataset
from .embedspace import EmbeddingMatrix
from .errors import InputError


def blob_arrays(
    n_points: int = 300,
    n_blobs: int = 3,
    dim: int = 16,
    noise: float = 0.02,
    seed: int = 42,
) -> tuple[list[str], np.ndarray, list[str]]:
    """(ids, vectors, labels) for points scattered around orthonormal centers.

    Centers are mutually orthogonal unit vectors, so raw inter-blob cosine
    similarity sits near 0 while intra-blob similarity sits near 1; after
    min-max normalization the two populations are far apart.
    """
    if n_blobs < 2 or n_points < n_blobs:
        raise InputError(f"need n_points >= n_blobs >= 2, got {n_points}, {n_blobs}")
    if dim < n_blobs:
        raise InputError(f"dim={dim} too small for {n_blobs} orthogonal centers")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    centers = basis[:, :n_blobs].T  # orthonormal rows

    per = n_points // n_blobs
    counts = [per + (1 if b < n_points % n_blobs else 0) for b in range(n_blobs)]
    ids: list[str] = []
    labels: list[str] = []
    vectors = np.empty((n_points, dim))
    row = 0
    for b, count in enumerate(counts):
        pts = centers[b] + noise * rng.standard_normal((count, dim))
        vectors[row : row + count] = pts
        for _ in range(count):
            ids.append(f"item-{row:04d}")
            labels.append(f"blob-{b}")
            row += 1
    return ids, vectors, labels


def make_blobs(
    n_points: int = 300,
    n_blobs: int = 3,
    dim: int = 16,
    noise: float = 0.02,
    seed: int = 42,
) -> tuple[EmbeddingMatrix, LabeledDataset]:
    ids, vectors, labels = blob_arrays(n_points, n_blobs, dim, noise, seed)
    emb = EmbeddingMatrix.from_vectors(ids, vectors)
    labeled = LabeledDataset(items=tuple(ids), labels=dict(zip(ids, labels)))
    return emb, labeled
