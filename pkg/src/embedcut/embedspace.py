"""Embedding matrices, pairwise cosine similarities, and distribution diagnostics.

Embeddings enter either as `EMB1` binary files (with an optional manifest CSV
mapping row index to item id) or as CSV. Rows are L2-normalized once at load,
so a similarity is afterwards a plain dot product.
"""

from __future__ import annotations

import csv
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from . import tri

EMB1_MAGIC = b"EMB1"

# Similarities are stored as float32 to bound memory at 4 bytes per pair;
# dot products are accumulated in float64 before the cast.
SIM_DTYPE = np.float32


@dataclass(frozen=True)
class EmbeddingMatrix:
    """n items with d-dimensional feature vectors, rows unit-norm.

    Construct through :meth:`from_vectors`, which validates and normalizes.
    """

    items: tuple[str, ...]
    vectors: np.ndarray  # (n, d) float64, each row L2-normalized

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def from_vectors(cls, items, vectors) -> "EmbeddingMatrix":
        """Validate raw vectors and return a row-normalized matrix.

        Rejects empty input, non-finite entries, all-zero rows, and duplicate
        item identifiers.
        """
        vecs = np.asarray(vectors, dtype=np.float64)
        if vecs.ndim != 2 or vecs.shape[0] < 1 or vecs.shape[1] < 1:
            raise InputError(f"need an n x d matrix with n,d >= 1, got shape {vecs.shape}")
        items = tuple(str(it) for it in items)
        if len(items) != vecs.shape[0]:
            raise InputError(f"{len(items)} identifiers for {vecs.shape[0]} rows")
        seen: dict[str, int] = {}
        for row, it in enumerate(items):
            if it in seen:
                raise InputError(f"duplicate identifier {it!r} (rows {seen[it]} and {row})")
            seen[it] = row
        bad = np.nonzero(~np.isfinite(vecs).all(axis=1))[0]
        if bad.size:
            raise InputError(f"non-finite value in row {bad[0]} (id {items[bad[0]]!r})")
        norms = np.linalg.norm(vecs, axis=1)
        zero = np.nonzero(norms == 0.0)[0]
        if zero.size:
            raise InputError(
                f"row {zero[0]} (id {items[zero[0]]!r}) is all-zero; cosine similarity undefined"
            )
        return cls(items=items, vectors=vecs / norms[:, None])


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise cosine similarities of n items.

    Only the strictly-upper triangle is stored (flat float32, see `tri`);
    the diagonal is 1 by construction and the matrix is symmetric by
    definition.
    """

    n: int
    values: np.ndarray  # flat upper triangle, float32, length n*(n-1)//2

    def __post_init__(self):
        if self.values.shape != (tri.num_pairs(self.n),):
            raise ValueError(
                f"triangle length {self.values.shape} does not match n={self.n}"
            )

    def value(self, i: int, j: int) -> float:
        if i == j:
            if not 0 <= i < self.n:
                raise IndexError(f"node {i} out of range")
            return 1.0
        if i > j:
            i, j = j, i
        return float(self.values[tri.pair_index(self.n, i, j)])

    def pair_values(self) -> np.ndarray:
        """The n*(n-1)//2 off-diagonal similarities (upper triangle, flat)."""
        return self.values

    def to_dense(self) -> np.ndarray:
        """Full symmetric matrix with unit diagonal (float64; small n only)."""
        return tri.to_dense(self.values.astype(np.float64), self.n, diagonal=1.0)


@dataclass(frozen=True)
class DistributionStats:
    """Summary statistics of the off-diagonal similarity distribution.

    A mean far above zero indicates embeddings packed into a narrow cone of
    the hypersphere; the histogram covers [-1, 1] with fixed-width bins.
    """

    mean: float
    std: float
    min: float
    max: float
    median: float
    histogram: np.ndarray  # int64 counts, one per bin
    bin_edges: np.ndarray  # length bins + 1, spanning [-1, 1]


def load_embeddings(path: str | Path, format: str = "auto") -> EmbeddingMatrix:
    """Load an embedding matrix from an `EMB1` binary file or a CSV file.

    format: "binary", "csv", or "auto" (sniff the EMB1 magic bytes).
    Any malformed content rejects the whole file with a diagnostic naming
    the offending line or byte offset.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"embedding file not found: {path}")
    if format == "auto":
        with open(path, "rb") as fh:
            format = "binary" if fh.read(4) == EMB1_MAGIC else "csv"
    if format == "binary":
        return _load_emb1(path)
    if format == "csv":
        return _load_csv(path)
    raise InputError(f"unknown embedding format {format!r} (expected binary or csv)")


def _load_emb1(path: Path) -> EmbeddingMatrix:
    raw = path.read_bytes()
    if len(raw) < 12:
        raise InputError(f"{path}: truncated header, need 12 bytes, have {len(raw)}")
    if raw[:4] != EMB1_MAGIC:
        raise InputError(f"{path}: bad magic {raw[:4]!r} at offset 0, expected {EMB1_MAGIC!r}")
    n, d = struct.unpack_from("<II", raw, 4)
    if n < 1 or d < 1:
        raise InputError(f"{path}: header declares n={n}, d={d}; both must be >= 1")
    expected = 12 + 4 * n * d
    if len(raw) != expected:
        raise InputError(
            f"{path}: header n={n}, d={d} implies {expected} bytes but file has "
            f"{len(raw)} (payload mismatch at offset 12)"
        )
    payload = np.frombuffer(raw, dtype="<f4", count=n * d, offset=12)
    vectors = payload.reshape(n, d).astype(np.float64)
    bad = np.argwhere(~np.isfinite(vectors))
    if bad.size:
        r, c = bad[0]
        raise InputError(
            f"{path}: non-finite value at row {r}, column {c} "
            f"(byte offset {12 + 4 * (r * d + c)})"
        )
    items = _read_manifest(path, n)
    return EmbeddingMatrix.from_vectors(items, vectors)


def _read_manifest(path: Path, n: int) -> list[str]:
    manifest = path.with_name(path.name + ".manifest.csv")
    if not manifest.is_file():
        return [str(i) for i in range(n)]
    ids: list[str | None] = [None] * n
    with open(manifest, newline="", encoding="utf-8") as fh:
        # '#' lines may carry provenance notes (e.g. which encoder wrote the file)
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["index", "id"]:
            raise InputError(f"{manifest}: expected header 'index,id', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise InputError(f"{manifest}:{lineno}: expected 'index,id'")
            try:
                idx = int(row[0])
            except ValueError:
                raise InputError(f"{manifest}:{lineno}: non-integer index {row[0]!r}") from None
            if not 0 <= idx < n:
                raise InputError(f"{manifest}:{lineno}: index {idx} out of range for n={n}")
            if ids[idx] is not None:
                raise InputError(f"{manifest}:{lineno}: duplicate index {idx}")
            ids[idx] = row[1]
    missing = [i for i, v in enumerate(ids) if v is None]
    if missing:
        raise InputError(f"{manifest}: no id for row index {missing[0]}")
    return ids  # type: ignore[return-value]


def _load_csv(path: Path) -> EmbeddingMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InputError(f"{path}: empty file")
        if len(header) < 2 or header[0].strip() != "id":
            raise InputError(
                f"{path}:1: expected header 'id,f0,...,f{{d-1}}', got {','.join(header)!r}"
            )
        d = len(header) - 1
        items: list[str] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + 1:
                raise InputError(
                    f"{path}:{lineno}: expected {d + 1} columns per header, got {len(row)}"
                )
            try:
                values = [float(x) for x in row[1:]]
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            if not all(np.isfinite(values)):
                raise InputError(f"{path}:{lineno}: non-finite feature value")
            if not any(values):
                raise InputError(f"{path}:{lineno}: all-zero vector for id {row[0]!r}")
            if row[0] in items:
                raise InputError(f"{path}:{lineno}: duplicate identifier {row[0]!r}")
            items.append(row[0])
            rows.append(values)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return EmbeddingMatrix.from_vectors(items, np.array(rows, dtype=np.float64))


def write_emb1(path: str | Path, items, vectors, manifest: bool = True) -> Path:
    """Write raw vectors in the `EMB1` binary layout plus a manifest CSV.

    Input vectors are written as given (float32, row-major); normalization
    happens at load time.
    """
    path = Path(path)
    vecs = np.ascontiguousarray(np.asarray(vectors, dtype="<f4"))
    n, d = vecs.shape
    items = [str(it) for it in items]
    if len(items) != n:
        raise InputError(f"{len(items)} identifiers for {n} rows")
    with open(path, "wb") as fh:
        fh.write(EMB1_MAGIC)
        fh.write(struct.pack("<II", n, d))
        fh.write(vecs.tobytes())
    if manifest:
        mpath = path.with_name(path.name + ".manifest.csv")
        with open(mpath, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index", "id"])
            writer.writerows(enumerate(items))
    return path


def cosine_similarities(
    emb: EmbeddingMatrix, *, block_size: int = 256, threads: int = 1
) -> SimilarityMatrix:
    """All pairwise cosine similarities of `emb`.

    Rows are already unit-norm, so each block is one float64 matmul; results
    are cast to float32 into the shared triangle. Blocks are disjoint, so
    thread workers never overlap, and block boundaries are independent of
    the thread count (identical output for any `threads`).
    """
    n = emb.n
    flat = np.empty(tri.num_pairs(n), dtype=SIM_DTYPE)
    vecs = emb.vectors

    def fill(start: int) -> None:
        stop = min(start + block_size, n - 1)  # row n-1 has no pairs
        gram = vecs[start:stop] @ vecs.T
        for i in range(start, stop):
            s = tri.row_start(n, i)
            flat[s : s + n - i - 1] = gram[i - start, i + 1 :]

    starts = range(0, max(n - 1, 0), block_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)
    return SimilarityMatrix(n=n, values=flat)


def distribution_stats(sim: SimilarityMatrix, bins: int) -> DistributionStats:
    """Summarize the off-diagonal similarity distribution.

    Self-similarities are excluded: statistics run over the n*(n-1)/2
    upper-triangle values only.
    """
    if sim.n < 2:
        raise InputError(f"need at least 2 items for pair statistics, have {sim.n}")
    if bins < 1:
        raise InputError(f"bins must be >= 1, got {bins}")
    vals = sim.pair_values().astype(np.float64)
    counts, edges = np.histogram(np.clip(vals, -1.0, 1.0), bins=bins, range=(-1.0, 1.0))
    return DistributionStats(
        mean=float(vals.mean()),
        std=float(vals.std()),
        min=float(vals.min()),
        max=float(vals.max()),
        median=float(np.median(vals)),
        histogram=counts.astype(np.int64),
        bin_edges=edges,
    )
