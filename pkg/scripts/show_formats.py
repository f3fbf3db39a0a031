#!/usr/bin/env python3
"""Print the three storage layouts for a small sorter, side by side.

A readable walkthrough of what each format stores: run it with no
arguments to see the 3-number sorter (12 rules, 9 neurons).
"""

import argparse

from snpsim import (
    Format,
    SortInstance,
    build_compressed,
    build_ell,
    build_sparse,
    gen_sort,
    storage_elements,
)
from snpsim.matrices import NULL


def neuron_name(index, n):
    # inputs, detectors, outputs -- 1-based for display
    if index < n:
        return f"i{index + 1}"
    if index < 2 * n:
        return f"d{index - n + 1}"
    return f"o{index - 2 * n + 1}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", type=int, default=3, help="sorter size")
    args = parser.parse_args()
    n = args.n

    system = gen_sort(SortInstance(n))
    stats = system.stats()
    print(f"sorter n={n}: q={stats.q} neurons, m={stats.m} rules, "
          f"max out-degree {stats.max_out_degree}\n")

    names = [neuron_name(i, n) for i in range(stats.q)]

    print("dense transition matrix (row per rule, column per neuron):")
    print("      " + " ".join(f"{name:>4}" for name in names))
    sparse = build_sparse(system)
    for ri, rule in enumerate(system.rules):
        row = " ".join(f"{int(v):>4}" for v in sparse.data[ri])
        print(f"r{ri + 1:<3} {neuron_name(rule.neuron, n):>4} {row}")

    print("\npair layout (column per rule, consumption pair first):")
    ell = build_ell(system)
    for ri in range(stats.m):
        pairs = []
        for row in range(ell.rows):
            if ell.target[row, ri] == NULL:
                break
            pairs.append(f"({int(ell.amount[row, ri]):+d},"
                         f"{neuron_name(int(ell.target[row, ri]), n)})")
        print(f"r{ri + 1:<3} " + " ".join(pairs))

    print("\nsynapse-only layout (column per neuron, rows = out-neighbours):")
    compressed = build_compressed(system)
    for neuron in range(stats.q):
        targets = [neuron_name(int(v), n)
                   for v in compressed.target[:, neuron] if v != NULL]
        print(f"{names[neuron]:>4} -> {', '.join(targets) if targets else '-'}")

    print("\nstored elements: " + "  ".join(
        f"{fmt.value}={storage_elements(fmt, system)}"
        for fmt in (Format.SPARSE, Format.ELL, Format.COMPRESSED)))


if __name__ == "__main__":
    main()
