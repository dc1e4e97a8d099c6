"""Partition comparison and cluster statistics.

Variation of information, VI(C,C') = H(C|C') + H(C'|C), is a true metric on
partitions bounded by ln(n). All entropies are in nats; reports carry a
log_base field so downstream readers cannot misinterpret the unit.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .multicut import Partition

LOG_BASE = "e"


@dataclass(frozen=True)
class VIReport:
    vi: float
    h_c_given_cprime: float
    h_cprime_given_c: float
    n: int

    def to_json_dict(self) -> dict:
        return {
            "vi": self.vi,
            "h_a_given_b": self.h_c_given_cprime,
            "h_b_given_a": self.h_cprime_given_c,
            "n": self.n,
            "log_base": LOG_BASE,
        }


@dataclass(frozen=True)
class ClusterStats:
    num_clusters: int
    min_size: int
    median_size: float
    mean_size: float
    max_size: int
    pct_size_one: float  # fraction of clusters that are singletons

    def to_json_dict(self) -> dict:
        return {
            "num_clusters": self.num_clusters,
            "min_size": self.min_size,
            "median_size": self.median_size,
            "mean_size": self.mean_size,
            "max_size": self.max_size,
            "pct_size_one": self.pct_size_one,
        }


@dataclass(frozen=True)
class OverlapPair:
    cluster_p1: int
    cluster_p2: int
    intersection: int
    jaccard: float
    containment: float  # |A intersect B| / |A|


@dataclass(frozen=True)
class OverlapReport:
    pairs: tuple[OverlapPair, ...]  # every nonzero-intersection cluster pair
    max_jaccard_pair: OverlapPair
    contained: tuple[int, ...]  # p1 clusters contained in some p2 cluster at >= threshold
    threshold: float


def _require_same_universe(a: Partition, b: Partition) -> int:
    if a.n != b.n:
        raise InputError(f"partitions cover different universes: {a.n} vs {b.n} items")
    return a.n


def _joint_counts(x: Partition, y: Partition) -> Counter:
    joint: Counter = Counter()
    for cx, cy in zip(x.assignment, y.assignment):
        joint[(int(cx), int(cy))] += 1
    return joint


def conditional_entropy(y: Partition, x: Partition) -> float:
    """H(Y|X) in nats from co-occurrence counts over the shared items.

    Zero exactly when each X-cluster lies inside a single Y-cluster; empty
    joint cells contribute nothing (0 ln 0 = 0).
    """
    n = _require_same_universe(y, x)
    joint = _joint_counts(x, y)
    nx = np.bincount(x.assignment, minlength=x.k)
    h = 0.0
    for (cx, _cy), c in joint.items():
        h += (c / n) * math.log(nx[cx] / c)
    return h


def variation_of_information(c: Partition, cprime: Partition) -> VIReport:
    """VI(C,C') with both conditional entropies; symmetric in its arguments."""
    n = _require_same_universe(c, cprime)
    joint = _joint_counts(c, cprime)
    sizes_c = np.bincount(c.assignment, minlength=c.k)
    sizes_cp = np.bincount(cprime.assignment, minlength=cprime.k)
    h_c_given_cp = 0.0
    h_cp_given_c = 0.0
    for (cc, cp), cnt in joint.items():
        h_c_given_cp += (cnt / n) * math.log(sizes_cp[cp] / cnt)
        h_cp_given_c += (cnt / n) * math.log(sizes_c[cc] / cnt)
    return VIReport(
        vi=h_c_given_cp + h_cp_given_c,
        h_c_given_cprime=h_c_given_cp,
        h_cprime_given_c=h_cp_given_c,
        n=n,
    )


def vi_matrix(partitions: list[tuple[str, Partition]]) -> np.ndarray:
    """Symmetric matrix of pairwise VI values for named partitions."""
    if not partitions:
        raise InputError("need at least one partition")
    k = len(partitions)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            v = variation_of_information(partitions[i][1], partitions[j][1]).vi
            out[i, j] = v
            out[j, i] = v
    return out


def write_vi_matrix_csv(path, names: list[str], matrix: np.ndarray) -> None:
    """CSV with partition names on the first row and column."""
    import csv as _csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow([""] + list(names))
        for name, row in zip(names, matrix):
            writer.writerow([name] + [f"{v:.9g}" for v in row])


def cluster_stats(p: Partition) -> ClusterStats:
    """Size statistics of a partition's clusters."""
    sizes = p.sizes()
    return ClusterStats(
        num_clusters=int(sizes.size),
        min_size=int(sizes.min()),
        median_size=float(np.median(sizes)),
        mean_size=float(sizes.mean()),
        max_size=int(sizes.max()),
        pct_size_one=float((sizes == 1).sum() / sizes.size),
    )


def overlap_analysis(
    p1: Partition, p2: Partition, containment_threshold: float = 0.8
) -> OverlapReport:
    """Cross-clustering overlap: intersections, Jaccard, and containment.

    Reports every cluster pair with a nonzero intersection, the pair with
    maximal Jaccard agreement, and each p1 cluster whose members fall inside
    a single p2 cluster at a rate >= the threshold.
    """
    _require_same_universe(p1, p2)
    if not 0.0 < containment_threshold <= 1.0:
        raise InputError(
            f"containment threshold must lie in (0, 1], got {containment_threshold}"
        )
    joint = _joint_counts(p1, p2)
    sizes1 = p1.sizes()
    sizes2 = p2.sizes()
    pairs = []
    for (c1, c2) in sorted(joint):
        inter = joint[(c1, c2)]
        union = int(sizes1[c1]) + int(sizes2[c2]) - inter
        pairs.append(
            OverlapPair(
                cluster_p1=c1,
                cluster_p2=c2,
                intersection=inter,
                jaccard=inter / union,
                containment=inter / int(sizes1[c1]),
            )
        )
    best = max(pairs, key=lambda pr: (pr.jaccard, -pr.cluster_p1, -pr.cluster_p2))
    contained = tuple(
        sorted({pr.cluster_p1 for pr in pairs if pr.containment >= containment_threshold})
    )
    return OverlapReport(
        pairs=tuple(pairs),
        max_jaccard_pair=best,
        contained=contained,
        threshold=containment_threshold,
    )


def write_overlap_csv(path, report: OverlapReport) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("cluster_p1,cluster_p2,intersection,jaccard,containment_p1_in_p2\n")
        for pr in report.pairs:
            fh.write(
                f"{pr.cluster_p1},{pr.cluster_p2},{pr.intersection},"
                f"{pr.jaccard:.9g},{pr.containment:.9g}\n"
            )


def align_partitions(
    items_a: list[str], part_a: Partition, items_b: list[str], part_b: Partition
) -> tuple[Partition, Partition]:
    """Reorder two id-keyed partitions onto a shared item order.

    Raises when the id universes differ, naming examples of the mismatch.
    """
    set_a, set_b = set(items_a), set(items_b)
    if set_a != set_b:
        only_a = sorted(set_a - set_b)[:5]
        only_b = sorted(set_b - set_a)[:5]
        raise InputError(
            f"item universes differ: {len(only_a) and only_a or '-'} only in first, "
            f"{len(only_b) and only_b or '-'} only in second"
        )
    order = sorted(set_a)
    pos_a = {it: i for i, it in enumerate(items_a)}
    pos_b = {it: i for i, it in enumerate(items_b)}
    la = [int(part_a.assignment[pos_a[it]]) for it in order]
    lb = [int(part_b.assignment[pos_b[it]]) for it in order]
    return Partition.from_labels(la), Partition.from_labels(lb)
