"""Index arithmetic for strictly-upper-triangle pair storage.

A complete graph on n nodes has n*(n-1)//2 unordered pairs. We store
per-pair values in a flat array laid out row-major over i < j:
(0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
"""

from __future__ import annotations

import numpy as np


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, i: int, j: int) -> int:
    """Flat offset of pair (i, j); requires i < j."""
    if not 0 <= i < j < n:
        raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def row_start(n: int, i: int) -> int:
    """Offset of (i, i+1), the first pair of row i. Valid for i < n-1."""
    return i * n - i * (i + 1) // 2


def row_values(flat: np.ndarray, n: int, i: int) -> np.ndarray:
    """All pair values touching node i as a length-n vector; entry i is 0.

    Entries j > i come from the contiguous row slice, entries j < i from a
    strided gather down column i.
    """
    out = np.zeros(n, dtype=flat.dtype)
    if i + 1 < n:
        s = row_start(n, i)
        out[i + 1 :] = flat[s : s + n - i - 1]
    if i > 0:
        lo = np.arange(i)
        out[:i] = flat[lo * n - lo * (lo + 1) // 2 + (i - lo - 1)]
    return out


def to_dense(flat: np.ndarray, n: int, diagonal: float = 0.0) -> np.ndarray:
    """Symmetric n x n matrix from the flat upper triangle."""
    dense = np.full((n, n), diagonal, dtype=np.float64)
    iu, ju = np.triu_indices(n, k=1)
    dense[iu, ju] = flat
    dense[ju, iu] = flat
    return dense


def from_dense(dense: np.ndarray) -> np.ndarray:
    """Flat strictly-upper triangle of a square matrix."""
    n = dense.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    return np.ascontiguousarray(dense[iu, ju])
