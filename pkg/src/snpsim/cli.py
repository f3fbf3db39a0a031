"""Command-line front end.

Subcommands::

    snpsim generate  build a family model and write it to a model file
    snpsim run       simulate a model under one format, emit a trace
    snpsim bench     time the families across sizes/formats, emit CSV
    snpsim size      report storage element counts and byte estimates

Exit codes: 0 success, 1 usage error, 2 model validation error, 3 runtime
simulation error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bench import CSV_HEADER, FAMILIES, build_family_system, records_to_csv, run_bench
from .engine import (
    EngineError,
    Format,
    SimOptions,
    format_trace,
    prepare,
    simulate_prepared,
)
from .generators import (
    InvalidInstance,
    SortInstance,
    SubsetSumInstance,
    gen_random,
    gen_sort,
    gen_subset_sum,
    sort_result,
)
from .matrices import MATRIX_FORMATS, storage_bytes, storage_elements
from .model import ModelError, SNPSystem
from .modelfile import parse_model, serialize_model
from .selection import FirstApplicable, SeededRandom


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems via exit code 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _add_family_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("family parameters")
    group.add_argument("--family", choices=FAMILIES, help="model family to build")
    group.add_argument("-n", type=int, help="family size parameter")
    group.add_argument("--values", help="comma-separated integers (sort values "
                                        "or subset-sum numbers)")
    group.add_argument("--target", type=int, help="subset-sum target")
    group.add_argument("--q-max", type=int, default=50, help="random family: neuron bound")
    group.add_argument("--rules-max", type=int, default=4)
    group.add_argument("--out-degree-max", type=int, default=8)
    group.add_argument("--spikes-max", type=int, default=20)
    group.add_argument("--delay-max", type=int, default=3)


def _parse_values(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"--values must be comma-separated integers, got {text!r}")


def _family_system(args, seed: int) -> tuple[SNPSystem, str, int]:
    """Build (system, family, size) from family arguments."""
    family = args.family
    if family is None:
        raise UsageError("either --model or --family is required")
    try:
        if family == "sort":
            values = _parse_values(args.values) if args.values else ()
            n = args.n if args.n is not None else len(values)
            if n < 1:
                raise UsageError("sort needs -n >= 1 (or --values)")
            return gen_sort(SortInstance(n, values)), family, n
        if family == "subsetsum":
            if args.values is not None:
                values = _parse_values(args.values)
                if args.target is None:
                    raise UsageError("subsetsum with --values needs --target")
                instance = SubsetSumInstance(values, args.target)
            else:
                if args.n is None or args.n < 0:
                    raise UsageError("subsetsum needs -n >= 0 or --values/--target")
                instance = SubsetSumInstance.random(args.n, seed)
            return gen_subset_sum(instance), family, len(instance.values)
        if family == "random":
            size = args.n if args.n is not None else args.q_max
            return gen_random(size, args.rules_max, args.out_degree_max,
                              args.spikes_max, args.delay_max, seed), family, size
    except InvalidInstance as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown family {family!r}")


def _load_system(args, seed: int) -> tuple[SNPSystem, str | None, int]:
    if getattr(args, "model", None):
        path = Path(args.model)
        if not path.exists():
            raise UsageError(f"model file not found: {path}")
        return parse_model(path.read_text()), None, 0
    return _family_system(args, seed)


def cmd_generate(args) -> int:
    system, _, _ = _family_system(args, args.seed or 0)
    Path(args.out).write_text(serialize_model(system))
    stats = system.stats()
    print(f"wrote {args.out}: q={stats.q} m={stats.m} "
          f"max_out_degree={stats.max_out_degree}")
    return 0


def cmd_run(args) -> int:
    seed = args.seed if args.seed is not None else 0
    system, family, n = _load_system(args, seed)
    selection = SeededRandom(args.seed) if args.seed is not None else FirstApplicable()
    options = SimOptions(max_steps=args.steps, selection=selection,
                         workers=args.workers)
    fmt = Format(args.format)

    t0 = time.perf_counter()
    prep = prepare(system, fmt)
    build_ms = (time.perf_counter() - t0) * 1e3
    t0 = time.perf_counter()
    trace = simulate_prepared(prep, options)
    wall_ms = (time.perf_counter() - t0) * 1e3

    if args.trace_out:
        Path(args.trace_out).write_text(format_trace(trace))
    summary = (f"halt={trace.halt_reason.value} steps={trace.steps} "
               f"format={fmt.value} wall_ms={wall_ms:.3f} build_ms={build_ms:.3f}")
    if family == "sort":
        summary += f" sorted={sort_result(trace, n)}"
    print(summary)
    return 0


def cmd_bench(args) -> int:
    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    if not sizes or any(s < 1 for s in sizes):
        raise UsageError("--sizes must be a comma-separated list of positive integers")
    formats = []
    for tok in args.formats.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            fmt = Format(tok)
        except ValueError:
            fmt = None
        if fmt is None or fmt not in MATRIX_FORMATS:
            raise UsageError(f"--formats entries must be one of "
                             f"{', '.join(f.value for f in MATRIX_FORMATS)}; got {tok!r}")
        formats.append(fmt)
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")

    records = run_bench(args.family, sizes, formats, args.reps, args.steps,
                        seed=args.seed or 0, workers=args.workers, log=print)
    csv_text = records_to_csv(records)
    if args.csv_out:
        Path(args.csv_out).write_text(csv_text)
        print(f"wrote {args.csv_out} ({len(records)} rows)")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_size(args) -> int:
    system, _, _ = _load_system(args, args.seed or 0)
    formats = [Format(args.format)] if args.format else list(MATRIX_FORMATS)
    for fmt in formats:
        if fmt not in MATRIX_FORMATS:
            raise UsageError(f"no storage accounting for format {fmt.value!r}")
        elements = storage_elements(fmt, system)
        nbytes = storage_bytes(fmt, system)
        print(f"{fmt.value} elements={elements} bytes={nbytes}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="snpsim",
                     description="Simulator and benchmark harness for spiking "
                                 "neural P systems with delays.")
    # subparsers inherit _Parser, so their usage problems exit 1 as well
    sub = parser.add_subparsers(dest="command", metavar="command")

    gen = sub.add_parser("generate", help="build a model file",
                         description="Build a family model and write it out.")
    _add_family_args(gen)
    gen.add_argument("--seed", type=int, default=0, help="instance seed")
    gen.add_argument("-o", "--out", required=True, help="output model file path")
    gen.set_defaults(func=cmd_generate)

    run = sub.add_parser("run", help="simulate a model",
                         description="Simulate a model and emit a trace.")
    run.add_argument("--model", help="model file path")
    _add_family_args(run)
    run.add_argument("--format", required=True,
                     choices=[f.value for f in Format],
                     help="simulation backend")
    run.add_argument("--steps", type=int, default=10000, help="step bound L")
    run.add_argument("--seed", type=int,
                     help="seeded-random rule selection (default: first applicable)")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--trace-out", help="write the configuration trace here")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="benchmark families",
                           description=f"Write one CSV row per (size, format, "
                                       f"repetition); header: {CSV_HEADER}")
    bench.add_argument("--family", choices=FAMILIES, required=True)
    bench.add_argument("--sizes", required=True,
                       help="comma-separated size parameters")
    bench.add_argument("--formats", default="sparse,ell,compressed")
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--steps", type=int, default=10000)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--csv-out", help="CSV output path (default: stdout)")
    bench.set_defaults(func=cmd_bench)

    size = sub.add_parser("size", help="storage accounting",
                          description="Print storage element counts and byte "
                                      "estimates per format.")
    size.add_argument("--model", help="model file path")
    _add_family_args(size)
    size.add_argument("--seed", type=int, default=0)
    size.add_argument("--format", choices=[f.value for f in MATRIX_FORMATS])
    size.set_defaults(func=cmd_size)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help()
            return 1
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
