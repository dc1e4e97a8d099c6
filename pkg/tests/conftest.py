"""Shared test helpers: random graphs and an independent brute-force oracle."""

from __future__ import annotations

import numpy as np
import pytest

from embedcut.graphbuild import SimilarityGraph
from embedcut import tri


def random_graph(rng: np.random.Generator, n: int, lo: float = -1.0, hi: float = 1.0) -> SimilarityGraph:
    weights = rng.uniform(lo, hi, size=tri.num_pairs(n))
    return SimilarityGraph(n=n, weights=weights)


def dense_graph(matrix) -> SimilarityGraph:
    dense = np.asarray(matrix, dtype=np.float64)
    return SimilarityGraph(n=dense.shape[0], weights=tri.from_dense(dense))


def iter_partitions(n: int):
    """Every set partition of range(n) as a list of blocks.

    Recursive first-element placement; intentionally a different algorithm
    from the production enumerator so the two can check each other.
    """
    if n == 0:
        yield []
        return
    for rest in iter_partitions(n - 1):
        node = n - 1
        for i in range(len(rest)):
            yield rest[:i] + [rest[i] + [node]] + rest[i + 1 :]
        yield rest + [[node]]


def blocks_to_labels(blocks, n: int) -> np.ndarray:
    labels = np.empty(n, dtype=np.int64)
    for cid, block in enumerate(blocks):
        for v in block:
            labels[v] = cid
    return labels


def brute_force_minimum(graph: SimilarityGraph):
    """(cost, labels) of an exhaustive scan, independent of the solvers."""
    best_cost = np.inf
    best = None
    for blocks in iter_partitions(graph.n):
        labels = blocks_to_labels(blocks, graph.n)
        c = 0.0
        for i in range(graph.n - 1):
            for j in range(i + 1, graph.n):
                if labels[i] != labels[j]:
                    c += graph.weight(i, j)
        if c < best_cost:
            best_cost = c
            best = labels
    return best_cost, best


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)
