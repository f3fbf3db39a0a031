"""Benchmark harness: timed runs over the model families, CSV output.

Wall time covers the simulation loop only; structure building (rule vector
plus matrix) is timed separately and reported next to the CSV, not in it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .engine import Format, SimOptions, simulate_prepared, prepare
from .generators import (
    SortInstance,
    SubsetSumInstance,
    gen_random,
    gen_sort,
    gen_subset_sum,
)
from .matrices import storage_bytes, storage_elements
from .model import SNPSystem
from .selection import SeededRandom

CSV_HEADER = "model,family,size,format,steps,wall_ms,elements,bytes,halt,seed,rep"

FAMILIES = ("sort", "subsetsum", "random")


@dataclass(frozen=True)
class BenchRecord:
    """One CSV row: a single timed repetition of (model, format)."""

    model: str
    family: str
    size: int
    format: str
    steps: int
    wall_ms: float
    elements: int
    bytes: int
    halt: str
    seed: int
    rep: int

    def csv_row(self) -> str:
        return (
            f"{self.model},{self.family},{self.size},{self.format},"
            f"{self.steps},{self.wall_ms:.3f},{self.elements},{self.bytes},"
            f"{self.halt},{self.seed},{self.rep}"
        )


def build_family_system(family: str, size: int, seed: int) -> SNPSystem:
    """Instantiate one family member; ``size`` is n (or the neuron bound for
    the random family)."""
    if family == "sort":
        return gen_sort(SortInstance(size))
    if family == "subsetsum":
        return gen_subset_sum(SubsetSumInstance.random(size, seed))
    if family == "random":
        return gen_random(size, 4, 8, 20, 3, seed)
    raise ValueError(f"unknown family {family!r}")


def run_bench(family: str, sizes: list[int], formats: list[Format],
              repetitions: int, max_steps: int, seed: int = 0,
              workers: int = 1, log=None) -> list[BenchRecord]:
    """Time every (size, format, repetition) cell and return the records.

    ``log``, when given, receives one human-readable line per cell with the
    structure build time.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    records = []
    for size in sizes:
        system = build_family_system(family, size, seed)
        model_id = f"{family}-{size}"
        for fmt in formats:
            t0 = time.perf_counter()
            prep = prepare(system, fmt)
            build_ms = (time.perf_counter() - t0) * 1e3
            elements = storage_elements(fmt, system)
            nbytes = storage_bytes(fmt, system)
            options = SimOptions(max_steps=max_steps,
                                 selection=SeededRandom(seed), workers=workers)
            for rep in range(1, repetitions + 1):
                t0 = time.perf_counter()
                trace = simulate_prepared(prep, options)
                wall_ms = (time.perf_counter() - t0) * 1e3
                records.append(BenchRecord(
                    model=model_id, family=family, size=size, format=fmt.value,
                    steps=trace.steps, wall_ms=wall_ms, elements=elements,
                    bytes=nbytes, halt=trace.halt_reason.value, seed=seed,
                    rep=rep,
                ))
            if log is not None:
                log(f"{model_id} {fmt.value}: build_ms={build_ms:.3f} "
                    f"elements={elements} last_wall_ms={records[-1].wall_ms:.3f}")
    return records


def records_to_csv(records: list[BenchRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(record.csv_row() for record in records)
    return "\n".join(lines) + "\n"
