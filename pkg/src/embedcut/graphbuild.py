"""Similarity matrix -> complete weighted graph with calibrated logit weights.

Raw cosine similarities are min-max scaled to [0, 1] over the off-diagonal
pairs, clamped away from the endpoints, and passed through the log-odds
transform plus an additive calibration bias. An edge weight is zero exactly
where the normalized similarity equals the calibration term, positive above
it, negative below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .embedspace import SimilarityMatrix
from . import tri

# Min-max scaling guarantees at least one exact 0 and one exact 1, which the
# log-odds transform would map to infinity; clamp to keep weights finite.
CLAMP_EPS = 1e-6

BIAS_SIGNS = ("paper", "flipped")


@dataclass(frozen=True)
class CalibrationTerm:
    """Decision-boundary location in normalized-similarity space, in (0, 1)."""

    value: float

    def __post_init__(self):
        if not (isinstance(self.value, (int, float)) and 0.0 < self.value < 1.0):
            raise InputError(f"calibration term must lie in the open interval (0, 1), got {self.value}")


@dataclass(frozen=True)
class SimilarityGraph:
    """Complete weighted graph over n nodes, edge costs in log-odds units.

    `weights` is the flat strictly-upper triangle (float64). Graphs built
    from similarities carry the calibration term and the min-max extremes
    used; graphs read from edge lists leave those None.
    """

    n: int
    weights: np.ndarray
    cal: float | None = None
    norm_min: float | None = None
    norm_max: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"graph needs at least one node, got n={self.n}")
        if self.weights.shape != (tri.num_pairs(self.n),):
            raise ValueError(f"weight array length {self.weights.shape} does not match n={self.n}")
        if not np.isfinite(self.weights).all():
            raise ValueError("non-finite edge weight")

    def weight(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        return float(self.weights[tri.pair_index(self.n, i, j)])

    def row_weights(self, i: int) -> np.ndarray:
        """Weights from node i to every node, as a length-n vector (entry i is 0)."""
        return tri.row_values(self.weights, self.n, i)

    def total_weight(self) -> float:
        return float(self.weights.sum())


def minmax_normalize(sim: SimilarityMatrix) -> tuple[np.ndarray, float, float]:
    """Scale off-diagonal similarities onto [0, 1].

    Returns the flat normalized triangle (float64) and the (min, max) raw
    extremes. Self-similarities never participate. Raises when all pairs are
    equal: there is no informative spread to scale.
    """
    if sim.n < 2:
        raise InputError(f"need at least 2 items to build a graph, have {sim.n}")
    vals = sim.pair_values().astype(np.float64)
    lo = float(vals.min())
    hi = float(vals.max())
    if hi <= lo:
        raise InputError(
            f"degenerate similarities: all {vals.size} pairs equal {lo}; "
            "min-max normalization undefined"
        )
    return (vals - lo) / (hi - lo), lo, hi


def logit_weights(normalized: np.ndarray) -> np.ndarray:
    """Log-odds transform of normalized similarities, clamped to stay finite.

    This is the uncalibrated weight: the decision boundary sits at 0.5.
    """
    s = np.clip(normalized, CLAMP_EPS, 1.0 - CLAMP_EPS)
    return np.log(s / (1.0 - s))


def calibration_bias(cal: CalibrationTerm, bias_sign: str = "paper") -> float:
    """Additive bias shifting the decision boundary to `cal`.

    "paper" uses log((1-cal)/cal); "flipped" negates it, which makes larger
    cal produce more positive edges instead of fewer.
    """
    if bias_sign not in BIAS_SIGNS:
        raise InputError(f"bias_sign must be one of {BIAS_SIGNS}, got {bias_sign!r}")
    bias = math.log((1.0 - cal.value) / cal.value)
    return bias if bias_sign == "paper" else -bias


def build_graph(
    sim: SimilarityMatrix, cal: CalibrationTerm, bias_sign: str = "paper"
) -> SimilarityGraph:
    """Complete graph whose edge weights are calibrated log-odds.

    w(a,b) = log(s'/(1-s')) + log((1-cal)/cal) with s' the clamped normalized
    similarity; sign(w) = sign(s' - cal) and w = 0 at s' = cal.
    """
    normalized, lo, hi = minmax_normalize(sim)
    weights = logit_weights(normalized) + calibration_bias(cal, bias_sign)
    return SimilarityGraph(n=sim.n, weights=weights, cal=cal.value, norm_min=lo, norm_max=hi)


def graph_from_dense(dense: np.ndarray) -> SimilarityGraph:
    """Graph from a symmetric dense weight matrix (test/fixture helper)."""
    dense = np.asarray(dense, dtype=np.float64)
    return SimilarityGraph(n=dense.shape[0], weights=tri.from_dense(dense))


def load_edge_list(path: str | Path) -> SimilarityGraph:
    """Read a complete graph from a `u v w` text file.

    Node indices are 0-based; `#` starts a comment line; pairs not listed
    get weight 0 (cutting them is free, so they never matter). The node
    count is max index + 1.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"edge list not found: {path}")
    edges: dict[tuple[int, int], float] = {}
    max_node = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 3:
                raise InputError(f"{path}:{lineno}: expected 'u v w', got {text!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2])
            except ValueError:
                raise InputError(f"{path}:{lineno}: cannot parse 'u v w' from {text!r}") from None
            if u < 0 or v < 0:
                raise InputError(f"{path}:{lineno}: negative node index")
            if u == v:
                raise InputError(f"{path}:{lineno}: self-loop on node {u}")
            if not math.isfinite(w):
                raise InputError(f"{path}:{lineno}: non-finite weight")
            key = (min(u, v), max(u, v))
            if key in edges:
                raise InputError(f"{path}:{lineno}: duplicate edge {key}")
            edges[key] = w
            max_node = max(max_node, u, v)
    if not edges:
        raise InputError(f"{path}: no edges")
    n = max_node + 1
    weights = np.zeros(tri.num_pairs(n), dtype=np.float64)
    for (u, v), w in edges.items():
        weights[tri.pair_index(n, u, v)] = w
    return SimilarityGraph(n=n, weights=weights)
