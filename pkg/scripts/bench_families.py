#!/usr/bin/env python3
"""Benchmark both model families across sizes and storage formats.

Writes one CSV per family (same schema as `snpsim bench`) and prints a
compression summary plus a host-CPU step-time comparison.  Wall-clock
behaviour on this machine is informational; the stable claim is the
element-count ordering compressed < ELL < sparse.

Usage:
    python scripts/bench_families.py [--out-dir results] [--reps 3]
"""

import argparse
from pathlib import Path

from snpsim import Format, SortInstance, gen_sort, storage_elements
from snpsim.bench import run_bench, records_to_csv

FORMATS = [Format.SPARSE, Format.ELL, Format.COMPRESSED]


def summarize(records):
    by_cell = {}
    for record in records:
        by_cell.setdefault((record.size, record.format), []).append(record)
    sizes = sorted({size for size, _ in by_cell})
    print(f"{'size':>6} {'format':>12} {'elements':>12} {'mean wall_ms':>14} {'steps':>7}")
    for size in sizes:
        for fmt in FORMATS:
            cell = by_cell.get((size, fmt.value))
            if not cell:
                continue
            mean_ms = sum(r.wall_ms for r in cell) / len(cell)
            print(f"{size:>6} {fmt.value:>12} {cell[0].elements:>12} "
                  f"{mean_ms:>14.3f} {cell[0].steps:>7}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    plans = [
        ("sort", [50, 100, 150, 200]),
        ("subsetsum", [50, 100, 200, 400]),
    ]
    for family, sizes in plans:
        print(f"== {family} ==")
        records = run_bench(family, sizes, FORMATS, repetitions=args.reps,
                            max_steps=10_000, seed=args.seed)
        path = out_dir / f"bench_{family}.csv"
        path.write_text(records_to_csv(records))
        summarize(records)
        print(f"wrote {path}\n")

    print("== element-count ordering (larger sorter sizes, no simulation) ==")
    for n in (100, 200, 500, 1000):
        system = gen_sort(SortInstance(n))
        counts = {fmt.value: storage_elements(fmt, system) for fmt in FORMATS}
        ratio = counts["sparse"] / counts["compressed"]
        print(f"sort n={n}: sparse={counts['sparse']} ell={counts['ell']} "
              f"compressed={counts['compressed']} (sparse/compressed = {ratio:.1f}x)")


if __name__ == "__main__":
    main()
