"""Minimum cost multicut solvers and partition bookkeeping.

The problem: split a complete weighted graph into components so that the sum
of cut (inter-component) edge weights is minimal. Solutions are represented
as node partitions, which makes every edge labeling cycle-consistent by
construction.

Solvers: greedy additive edge contraction (builds a partition by repeatedly
merging the heaviest non-negative pair of clusters), Kernighan-Lin-style
local search with joins (refines a partition via node exchanges, moves to
new clusters, and cluster joins, accepting strict cost decreases), and an
exhaustive oracle over all set partitions for small n.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .graphbuild import SimilarityGraph
from . import tri

SOLVER_MODES = ("gaec", "gaec-kl")

# Bell(12) = 4,213,597 partitions is the largest count worth enumerating.
EXACT_MAX_NODES = 12

# Local search terminates on its own (strict decrease over finitely many
# partitions); the cap only guards against float-noise pathologies.
KL_MAX_SWEEPS = 100

_STRICT = 1e-12  # a move must beat this margin to count as an improvement
_RGS_BATCH = 65536
_RGS_CACHE_MAX_N = 10
_rgs_cache: dict[int, np.ndarray] = {}


def canonical_assignment(labels) -> np.ndarray:
    """Relabel clusters to 0..k-1, ordered by decreasing size, ties broken by
    the smallest member node index."""
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size < 1:
        raise InputError(f"assignment must be a non-empty 1-D sequence, got shape {arr.shape}")
    uniq, first, inverse = np.unique(arr, return_index=True, return_inverse=True)
    sizes = np.bincount(inverse, minlength=uniq.size)
    order = np.lexsort((first, -sizes))
    rank = np.empty(uniq.size, dtype=np.int64)
    rank[order] = np.arange(uniq.size)
    return rank[inverse]


@dataclass(frozen=True, eq=False)
class Partition:
    """Node -> cluster-id map in canonical form (ids 0..k-1 by size)."""

    assignment: np.ndarray

    def __post_init__(self):
        canon = canonical_assignment(self.assignment)
        canon.flags.writeable = False
        object.__setattr__(self, "assignment", canon)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        return cls(assignment=np.asarray(labels))

    @property
    def n(self) -> int:
        return int(self.assignment.shape[0])

    @property
    def k(self) -> int:
        return int(self.assignment.max()) + 1

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def clusters(self) -> list[np.ndarray]:
        """Member node indices per cluster id."""
        return [np.nonzero(self.assignment == c)[0] for c in range(self.k)]

    def __eq__(self, other) -> bool:
        # Canonical form makes this equality up to cluster relabeling.
        return isinstance(other, Partition) and np.array_equal(self.assignment, other.assignment)

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, k={self.k})"


@dataclass(frozen=True)
class SolveReport:
    partition: Partition
    cost: float
    solver: str
    iterations: int  # local-search sweep count; 0 for pure contraction
    runtime_ms: float
    move_deltas: tuple[float, ...] = field(default=(), repr=False, compare=False)


def cost(graph: SimilarityGraph, partition: Partition) -> float:
    """Sum of weights over edges whose endpoints lie in different clusters."""
    a = partition.assignment
    if a.shape[0] != graph.n:
        raise InputError(f"partition covers {a.shape[0]} nodes, graph has {graph.n}")
    w = graph.weights
    n = graph.n
    total = 0.0
    for i in range(n - 1):
        s = tri.row_start(n, i)
        row = w[s : s + n - i - 1]
        total += float(row[a[i + 1 :] != a[i]].sum())
    return total


def _check_report_cost(graph: SimilarityGraph, report: SolveReport) -> SolveReport:
    actual = cost(graph, report.partition)
    assert abs(actual - report.cost) <= 1e-6 * max(1.0, abs(actual)), (
        f"reported cost {report.cost} diverges from recomputed {actual}"
    )
    return report


def solve_gaec(graph: SimilarityGraph) -> SolveReport:
    """Greedy additive edge contraction.

    Starts from singletons and repeatedly merges the pair of clusters joined
    by the largest aggregated weight while that maximum is non-negative; on
    a merge, parallel edges to a common neighbor are summed. A lazy priority
    queue holds only non-negative aggregates (negative ones can never be
    extracted for a merge) with per-cluster version stamps; stale entries
    are skipped on pop. Equal weights tie-break toward the lexicographically
    smaller (min rep, max rep) pair.
    """
    t0 = time.perf_counter()
    n = graph.n
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    version = [0] * n
    adj: list[dict[int, float]] = [{} for _ in range(n)]
    for i in range(n - 1):
        s = tri.row_start(n, i)
        row = graph.weights[s : s + n - i - 1]
        for off in range(n - i - 1):
            j = i + 1 + off
            w = float(row[off])
            adj[i][j] = w
            adj[j][i] = w

    heap: list[tuple[float, int, int, int, int]] = [
        (-w, i, j, 0, 0)
        for i in range(n - 1)
        for j, w in adj[i].items()
        if j > i and w >= 0.0
    ]
    heapq.heapify(heap)

    while heap:
        negw, a, b, va, vb = heapq.heappop(heap)
        if parent[a] != a or parent[b] != b or version[a] != va or version[b] != vb:
            continue
        w = -negw
        assert w >= 0.0, "contraction candidate with negative weight reached the merge step"
        parent[b] = a
        adj_a, adj_b = adj[a], adj[b]
        del adj_a[b]
        del adj_b[a]
        for x, wbx in adj_b.items():
            del adj[x][b]
            nw = adj_a.get(x, 0.0) + wbx
            adj_a[x] = nw
            adj[x][a] = nw
        adj[b] = {}
        version[a] += 1
        for x, wx in adj_a.items():
            if wx >= 0.0:
                u, v = (a, x) if a < x else (x, a)
                heapq.heappush(heap, (-wx, u, v, version[u], version[v]))

    partition = Partition.from_labels([find(i) for i in range(n)])
    report = SolveReport(
        partition=partition,
        cost=cost(graph, partition),
        solver="gaec",
        iterations=0,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )
    return _check_report_cost(graph, report)


class _LocalSearchState:
    """Partition bookkeeping for the join-enabled Kernighan-Lin sweeps.

    Per cluster c we keep S[c], the length-n vector of summed weights from
    every node into c, so single-node quantities are O(1) lookups:
    internal weight of a is S[own(a)][a], the pull of cluster B on a is
    S[B][a]. Join gains are O(|cluster|) and cached until any move lands.
    """

    def __init__(self, graph: SimilarityGraph, assignment: np.ndarray):
        self.graph = graph
        self.n = graph.n
        self.assign = assignment.astype(np.int64).copy()
        self._rows: dict[int, np.ndarray] = {}
        self.members: dict[int, set[int]] = {}
        for node, c in enumerate(self.assign):
            self.members.setdefault(int(c), set()).add(node)
        self.S: dict[int, np.ndarray] = {}
        for c, nodes in self.members.items():
            vec = np.zeros(self.n)
            for v in nodes:
                vec += self.row(v)
            self.S[c] = vec
        self.next_cid = max(self.members) + 1
        self._join_cache: dict[tuple[int, int], float] = {}

    def row(self, v: int) -> np.ndarray:
        r = self._rows.get(v)
        if r is None:
            r = tri.row_values(self.graph.weights, self.n, v)
            self._rows[v] = r
        return r

    # -- candidate gains (negative = cost decrease) --

    def move_delta(self, a: int, dst: int) -> float:
        own = int(self.assign[a])
        return float(self.S[own][a] - self.S[dst][a])

    def swap_delta(self, a: int, b: int) -> float:
        A, B = int(self.assign[a]), int(self.assign[b])
        return float(
            self.S[A][a] + self.S[B][b] - self.S[B][a] - self.S[A][b]
            + 2.0 * self.graph.weight(a, b)
        )

    def join_delta(self, A: int, B: int) -> float:
        key = (A, B) if A < B else (B, A)
        d = self._join_cache.get(key)
        if d is None:
            d = -float(self.S[B][list(self.members[A])].sum())
            self._join_cache[key] = d
        return d

    def new_cluster_delta(self, a: int) -> float:
        return float(self.S[int(self.assign[a])][a])

    # -- appliers; each returns the set of nodes whose neighborhoods changed --

    def apply_move(self, a: int, dst: int) -> set[int]:
        own = int(self.assign[a])
        touched = self.members[own] | self.members[dst]
        r = self.row(a)
        self.S[own] -= r
        self.S[dst] += r
        self.members[own].discard(a)
        self.members[dst].add(a)
        self.assign[a] = dst
        if not self.members[own]:
            del self.members[own]
            del self.S[own]
        self._join_cache.clear()
        return touched

    def apply_swap(self, a: int, b: int) -> set[int]:
        A, B = int(self.assign[a]), int(self.assign[b])
        touched = self.members[A] | self.members[B]
        ra, rb = self.row(a), self.row(b)
        self.S[A] += rb - ra
        self.S[B] += ra - rb
        self.members[A].discard(a)
        self.members[A].add(b)
        self.members[B].discard(b)
        self.members[B].add(a)
        self.assign[a] = B
        self.assign[b] = A
        self._join_cache.clear()
        return touched

    def apply_join(self, A: int, B: int) -> set[int]:
        keep, gone = (A, B) if A < B else (B, A)
        touched = self.members[A] | self.members[B]
        self.S[keep] += self.S[gone]
        for v in self.members[gone]:
            self.assign[v] = keep
        self.members[keep] |= self.members[gone]
        del self.members[gone]
        del self.S[gone]
        self._join_cache.clear()
        return touched

    def apply_new_cluster(self, a: int) -> set[int]:
        own = int(self.assign[a])
        touched = set(self.members[own])
        cid = self.next_cid
        self.next_cid += 1
        r = self.row(a)
        self.S[own] -= r
        self.S[cid] = r.copy()
        self.members[own].discard(a)
        self.members[cid] = {a}
        self.assign[a] = cid
        self._join_cache.clear()
        return touched


def solve_klj(graph: SimilarityGraph, init: Partition) -> SolveReport:
    """Kernighan-Lin refinement with joins, starting from `init`.

    Each sweep first walks all inter-cluster node pairs and tries, in order:
    moving either endpoint across, exchanging the two endpoints, and joining
    the two clusters; then walks all nodes and splits off any node whose
    internal weight is negative into a fresh cluster. The first change that
    strictly lowers the cut cost is applied immediately. Pairs and nodes
    whose clusters were untouched by the previous sweep are skipped.
    Terminates on a sweep without changes or after KL_MAX_SWEEPS.
    """
    t0 = time.perf_counter()
    n = graph.n
    if init.n != n:
        raise InputError(f"initial partition covers {init.n} nodes, graph has {graph.n}")
    state = _LocalSearchState(graph, init.assignment)
    deltas: list[float] = []
    changed_prev = np.ones(n, dtype=bool)
    sweeps = 0

    while sweeps < KL_MAX_SWEEPS:
        sweeps += 1
        changed_next = np.zeros(n, dtype=bool)
        improved = False

        def accept(delta: float, touched: set[int]) -> None:
            nonlocal improved
            improved = True
            deltas.append(delta)
            for v in touched:
                changed_next[v] = True

        for a in range(n - 1):
            for b in range(a + 1, n):
                if state.assign[a] == state.assign[b]:
                    continue
                if not (changed_prev[a] or changed_prev[b]):
                    continue
                A, B = int(state.assign[a]), int(state.assign[b])
                d = state.move_delta(a, B)
                if d < -_STRICT:
                    accept(d, state.apply_move(a, B))
                    continue
                d = state.move_delta(b, A)
                if d < -_STRICT:
                    accept(d, state.apply_move(b, A))
                    continue
                d = state.swap_delta(a, b)
                if d < -_STRICT:
                    accept(d, state.apply_swap(a, b))
                    continue
                d = state.join_delta(A, B)
                if d < -_STRICT:
                    accept(d, state.apply_join(A, B))

        for a in range(n):
            if not changed_prev[a]:
                continue
            d = state.new_cluster_delta(a)
            if d < -_STRICT:
                accept(d, state.apply_new_cluster(a) | {a})

        if not improved:
            break
        changed_prev = changed_next

    partition = Partition.from_labels(state.assign)
    report = SolveReport(
        partition=partition,
        cost=cost(graph, partition),
        solver="klj",
        iterations=sweeps,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        move_deltas=tuple(deltas),
    )
    return _check_report_cost(graph, report)


def solve(graph: SimilarityGraph, mode: str = "gaec-kl") -> SolveReport:
    """Run the contraction solver, optionally followed by local refinement."""
    if mode not in SOLVER_MODES:
        raise InputError(f"solver mode must be one of {SOLVER_MODES}, got {mode!r}")
    t0 = time.perf_counter()
    report = solve_gaec(graph)
    if mode == "gaec-kl":
        refined = solve_klj(graph, report.partition)
        report = SolveReport(
            partition=refined.partition,
            cost=refined.cost,
            solver="gaec-kl",
            iterations=refined.iterations,
            runtime_ms=(time.perf_counter() - t0) * 1e3,
            move_deltas=refined.move_deltas,
        )
    return report


def _rgs_batches(n: int, batch_size: int = _RGS_BATCH):
    """All restricted growth strings of length n, in lexicographic order,
    yielded as int8 arrays of shape (m, n) with m <= batch_size.

    Iterative generation; memory stays bounded by the batch except for the
    small-n cache reused across solver calls.
    """
    cached = _rgs_cache.get(n)
    if cached is not None:
        for s in range(0, cached.shape[0], batch_size):
            yield cached[s : s + batch_size]
        return

    chunks: list[np.ndarray] = []
    collect = n <= _RGS_CACHE_MAX_N

    a = [0] * n
    b = [1] * n  # b[j] = 1 + max(a[:j]); a[j] may range over 0..b[j]
    buf = np.empty((batch_size, n), dtype=np.int8)
    k = 0
    while True:
        buf[k] = a
        k += 1
        if k == batch_size:
            out = buf.copy()
            if collect:
                chunks.append(out)
            yield out
            k = 0
        j = n - 1
        while j > 0 and a[j] == b[j]:
            j -= 1
        if j == 0:
            break
        a[j] += 1
        nb = b[j] if a[j] < b[j] else a[j] + 1
        for t in range(j + 1, n):
            a[t] = 0
            b[t] = nb
    if k:
        out = buf[:k].copy()
        if collect:
            chunks.append(out)
        yield out
    if collect:
        _rgs_cache[n] = np.vstack(chunks)


def solve_exact(graph: SimilarityGraph) -> SolveReport:
    """Exhaustive minimum over all set partitions (n <= 12).

    Enumerates restricted growth strings in lexicographic order and keeps
    the first partition achieving the minimal cost; evaluation is batched
    and vectorized over partitions.
    """
    t0 = time.perf_counter()
    n = graph.n
    if n > EXACT_MAX_NODES:
        raise InputError(
            f"exact enumeration is limited to n <= {EXACT_MAX_NODES} "
            f"(set-partition counts grow super-exponentially); got n={n}"
        )
    if n == 1:
        partition = Partition.from_labels([0])
        return SolveReport(partition, 0.0, "exact", 0, (time.perf_counter() - t0) * 1e3)

    best_cost = np.inf
    best: np.ndarray | None = None
    for batch in _rgs_batches(n):
        costs = np.zeros(batch.shape[0])
        for i in range(n - 1):
            s = tri.row_start(n, i)
            wrow = graph.weights[s : s + n - i - 1]
            cut = batch[:, i + 1 :] != batch[:, i : i + 1]
            costs += cut.astype(np.float64) @ wrow
        k = int(np.argmin(costs))
        if costs[k] < best_cost:  # strict: earlier batches win ties
            best_cost = float(costs[k])
            best = batch[k].copy()

    partition = Partition.from_labels(best)
    report = SolveReport(
        partition=partition,
        cost=best_cost,
        solver="exact",
        iterations=0,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )
    return _check_report_cost(graph, report)


def write_clustering_csv(path, items, partition: Partition) -> None:
    """Write `id,cluster` rows, one per item, in item order."""
    import csv as _csv

    if len(items) != partition.n:
        raise InputError(f"{len(items)} identifiers for a partition of {partition.n} nodes")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "cluster"])
        for it, c in zip(items, partition.assignment):
            writer.writerow([it, int(c)])


def read_clustering_csv(path) -> tuple[list[str], Partition]:
    """Read a clustering CSV back into item ids and a canonical partition."""
    import csv as _csv
    from pathlib import Path as _Path

    path = _Path(path)
    if not path.is_file():
        raise InputError(f"clustering file not found: {path}")
    items: list[str] = []
    labels: list[int] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = _csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["id", "cluster"]:
            raise InputError(f"{path}: expected header 'id,cluster', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise InputError(f"{path}:{lineno}: expected 'id,cluster'")
            if row[0] in seen:
                raise InputError(f"{path}:{lineno}: duplicate id {row[0]!r}")
            try:
                labels.append(int(row[1]))
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer cluster id {row[1]!r}") from None
            seen.add(row[0])
            items.append(row[0])
    if not items:
        raise InputError(f"{path}: no rows")
    return items, Partition.from_labels(labels)
