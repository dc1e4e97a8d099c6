"""Calibration-term ablation against ground-truth labels.

Sweeps the calibration term over a grid, clusters at each point, and scores
the clustering against labels via the two conditional entropies. The winner
balances H(Class|Cluster) and H(Cluster|Class): minimum absolute difference,
ties broken by lower VI, then lower calibration value.

Similarities (and their normalization) are computed once per dataset; only
the additive bias differs between grid points.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .embedspace import EmbeddingMatrix, cosine_similarities
from .graphbuild import (
    CalibrationTerm,
    SimilarityGraph,
    calibration_bias,
    logit_weights,
    minmax_normalize,
)
from .metrics import variation_of_information
from .multicut import Partition, solve


@dataclass(frozen=True)
class LabeledDataset:
    """Item identifiers with one class label each (>= 2 distinct classes)."""

    items: tuple[str, ...]
    labels: dict[str, str]

    def __post_init__(self):
        missing = [it for it in self.items if it not in self.labels]
        if missing:
            raise InputError(f"no label for items {missing[:5]} ({len(missing)} total)")
        if len(self.items) != len(set(self.items)):
            raise InputError("duplicate item identifiers in labeled dataset")
        if len(self.items) == 0:
            raise InputError("labeled dataset is empty")
        if len(set(self.labels[it] for it in self.items)) < 2:
            raise InputError("need at least 2 distinct labels for a meaningful comparison")

    @classmethod
    def from_csv(cls, path) -> "LabeledDataset":
        path = Path(path)
        if not path.is_file():
            raise InputError(f"labels file not found: {path}")
        items: list[str] = []
        labels: dict[str, str] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["id", "label"]:
                raise InputError(f"{path}: expected header 'id,label', got {header}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) < 2:
                    raise InputError(f"{path}:{lineno}: expected 'id,label'")
                if row[0] in labels:
                    raise InputError(f"{path}:{lineno}: duplicate id {row[0]!r}")
                items.append(row[0])
                labels[row[0]] = row[1]
        return cls(items=tuple(items), labels=labels)

    def to_partition(self, item_order) -> Partition:
        """Ground-truth labels as a partition over `item_order`.

        Errors name any items without a label.
        """
        missing = [it for it in item_order if it not in self.labels]
        if missing:
            raise InputError(
                f"labels missing for {len(missing)} items, e.g. {missing[:5]}"
            )
        classes: dict[str, int] = {}
        out = []
        for it in item_order:
            out.append(classes.setdefault(self.labels[it], len(classes)))
        return Partition.from_labels(out)


@dataclass(frozen=True)
class CalibrationRun:
    """Clustering-vs-labels score at one calibration grid point."""

    cal: float
    h_class_given_cluster: float
    h_cluster_given_class: float
    delta: float  # |h_class_given_cluster - h_cluster_given_class|
    vi: float
    num_clusters: int
    cost: float

    def to_json_dict(self) -> dict:
        return {
            "cal": self.cal,
            "h_class_given_cluster": self.h_class_given_cluster,
            "h_cluster_given_class": self.h_cluster_given_class,
            "delta": self.delta,
            "vi": self.vi,
            "num_clusters": self.num_clusters,
            "cost": self.cost,
            "log_base": "e",
        }


def _score(cluster_partition: Partition, class_partition: Partition, cal: float, cost: float) -> CalibrationRun:
    rep = variation_of_information(class_partition, cluster_partition)
    h1 = rep.h_c_given_cprime  # H(Class | Cluster)
    h2 = rep.h_cprime_given_c  # H(Cluster | Class)
    return CalibrationRun(
        cal=cal,
        h_class_given_cluster=h1,
        h_cluster_given_class=h2,
        delta=abs(h1 - h2),
        vi=rep.vi,
        num_clusters=cluster_partition.k,
        cost=cost,
    )


def _check_grid(grid) -> list[float]:
    values = [float(c) for c in grid]
    if not values:
        raise InputError("calibration grid is empty")
    for c in values:
        if not 0.0 < c < 1.0:
            raise InputError(f"calibration grid value {c} outside the open interval (0, 1)")
    return values


def ablate(
    emb: EmbeddingMatrix,
    labels: LabeledDataset,
    grid,
    mode: str = "gaec-kl",
    bias_sign: str = "paper",
    threads: int = 1,
) -> list[CalibrationRun]:
    """One clustering-vs-labels run per grid point, sharing one similarity matrix."""
    values = _check_grid(grid)
    class_partition = labels.to_partition(emb.items)
    sim = cosine_similarities(emb, threads=max(threads, 1))
    normalized, lo, hi = minmax_normalize(sim)
    logits = logit_weights(normalized)

    def run_point(cal: float) -> CalibrationRun:
        bias = calibration_bias(CalibrationTerm(cal), bias_sign)
        graph = SimilarityGraph(
            n=emb.n, weights=logits + bias, cal=cal, norm_min=lo, norm_max=hi
        )
        report = solve(graph, mode)
        return _score(report.partition, class_partition, cal, report.cost)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_point, values))
    return [run_point(c) for c in values]


def select_cal(runs: list[CalibrationRun]) -> CalibrationRun:
    """The run balancing the two conditional entropies: minimum |delta|,
    ties broken by lower VI, then lower cal."""
    if not runs:
        raise InputError("no calibration runs to select from")
    return min(runs, key=lambda r: (r.delta, r.vi, r.cal))


def validate_cal(
    emb_val: EmbeddingMatrix,
    labels_val: LabeledDataset,
    cal: CalibrationTerm,
    mode: str = "gaec-kl",
    bias_sign: str = "paper",
) -> CalibrationRun:
    """Cluster held-out data at a fixed calibration term and score it."""
    runs = ablate(emb_val, labels_val, [cal.value], mode=mode, bias_sign=bias_sign)
    return runs[0]


def write_ablation_csv(path, runs: list[CalibrationRun]) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(
            "cal,h_class_given_cluster,h_cluster_given_class,delta,vi,num_clusters,cost\n"
        )
        for r in runs:
            fh.write(
                f"{r.cal:.10g},{r.h_class_given_cluster:.9g},{r.h_cluster_given_class:.9g},"
                f"{r.delta:.9g},{r.vi:.9g},{r.num_clusters},{r.cost:.9g}\n"
            )


def write_labels_csv(path, dataset: LabeledDataset) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "label"])
        for it in dataset.items:
            writer.writerow([it, dataset.labels[it]])
