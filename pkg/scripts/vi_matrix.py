"""Pairwise VI matrix over several clustering CSVs.

Usage: python scripts/vi_matrix.py out.csv a.clusters.csv b.clusters.csv ...
Names in the output header are the file stems. All clusterings must cover
the same item ids.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from embedcut.metrics import align_partitions, vi_matrix, write_vi_matrix_csv
from embedcut.multicut import read_clustering_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", type=Path)
    parser.add_argument("clusterings", nargs="+", type=Path)
    args = parser.parse_args()

    loaded = [(p.stem, *read_clustering_csv(p)) for p in args.clusterings]
    base_name, base_items, base_part = loaded[0]
    base_sorted, _ = align_partitions(base_items, base_part, base_items, base_part)
    named = [(base_name, base_sorted)]
    for name, items, part in loaded[1:]:
        _, aligned = align_partitions(base_items, base_part, items, part)
        named.append((name, aligned))

    matrix = vi_matrix(named)
    write_vi_matrix_csv(args.output, [name for name, _ in named], matrix)
    print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} VI matrix to {args.output}")


if __name__ == "__main__":
    main()
