"""Synchronous simulation engine over the matrix storage formats.

One step is: select at most one applicable rule per open neuron
(``sv_calc``), apply every selected rule through the chosen matrix layout
(``step_sparse`` / ``step_ell`` / ``step_compressed``), then age the delay
counters (``update_delays``).  A full barrier separates the three phases.

Delay semantics (normative for the whole package): a rule selected at step
``k`` in an open neuron consumes and emits at step ``k``; the neuron is then
closed for the rule's ``delay`` following steps, during which it selects no
rules and spikes addressed to it are lost.  When no rule is applicable but
some neuron is still closed, the step counter keeps advancing and delays
keep ageing, so the run terminates instead of spinning.

Every phase is a map over independent indices combined by exact integer
addition, so traces are bit-identical for any worker count; ``workers=1``
is the sequential mode.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .matrices import (
    EllMatrix,
    Format,
    NeuronRuleMap,
    RuleVector,
    SparseMatrix,
    SynapseMatrix,
    build_compressed,
    build_ell,
    build_rule_vector,
    build_sparse,
)
from .model import SNPSystem
from .selection import FirstApplicable, SeededRandom, Selection, mix64_array


class EngineError(Exception):
    """Base class for simulation-time failures."""


class NegativeSpikes(EngineError):
    """A step drove some neuron's spike count below zero.

    Signals an invalid model/selection (a rule whose condition threshold
    lies below its consumed count was applied to a too-small store); it
    cannot happen when conditions imply the consumed amount is present.
    """


class HaltReason(enum.Enum):
    STEP_LIMIT = "step_limit"
    NO_APPLICABLE_RULES = "no_applicable_rules"


class RecordLevel(enum.Enum):
    CONFIGS = "configs"
    CONFIGS_AND_DELAYS = "configs+delays"
    FULL = "full"


@dataclass(frozen=True)
class SpikingVector:
    """Per-step rule selection.

    ``chosen[i]`` is the global index of the rule neuron ``i`` fires this
    step, or ``-1``.  This is the rule-per-neuron view the compressed kernel
    consumes directly; :meth:`flags` materialises the flag-per-rule view the
    sparse and ELL kernels iterate.  Both views set at most one rule per
    neuron by construction.  Vectors are per-step values: a fresh one is
    computed each step, which is what clears ("unmarks") delivered rules.
    """

    chosen: np.ndarray  # int64[q]

    def flags(self, rule_count: int) -> np.ndarray:
        """0/1 flag per rule."""
        out = np.zeros(rule_count, dtype=np.uint8)
        fired = self.chosen[self.chosen >= 0]
        out[fired] = 1
        return out

    @property
    def is_empty(self) -> bool:
        return bool((self.chosen < 0).all())

    def fired_rules(self) -> np.ndarray:
        """Global indices of the rules firing this step, ascending."""
        return np.sort(self.chosen[self.chosen >= 0])


@dataclass
class SimState:
    """Mutable per-run state: spike counts, delay counters, last selection."""

    config: np.ndarray            # int64[q], >= 0 at every step boundary
    delays: np.ndarray            # int64[q]; 0 means open
    spiking: SpikingVector | None = None
    step: int = 0


@dataclass(frozen=True)
class SimOptions:
    """Run options.

    ``max_steps`` is the hard step bound; ``selection`` the rule-choice
    policy; ``record`` what each trace entry keeps; ``workers`` the chunk
    count for the parallel maps (1 = sequential, same results bit-for-bit).
    """

    max_steps: int
    selection: Selection = field(default_factory=FirstApplicable)
    record: RecordLevel = RecordLevel.CONFIGS
    workers: int = 1

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(eq=False)
class Trace:
    """Recorded run: ``configs[k]`` is the configuration after ``k`` steps
    (entry 0 is the initial one), plus optional delay/selection snapshots."""

    configs: list[np.ndarray]
    halt_reason: HaltReason
    delays: list[np.ndarray] | None = None
    spiking: list[np.ndarray] | None = None  # chosen-rule arrays, one per executed step

    @property
    def steps(self) -> int:
        return len(self.configs) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        if self.halt_reason is not other.halt_reason:
            return False
        if not _same_array_list(self.configs, other.configs):
            return False
        for mine, theirs in ((self.delays, other.delays), (self.spiking, other.spiking)):
            if (mine is None) != (theirs is None):
                return False
            if mine is not None and not _same_array_list(mine, theirs):
                return False
        return True


def _same_array_list(a: list[np.ndarray], b: list[np.ndarray]) -> bool:
    return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


def format_trace(trace: Trace) -> str:
    """Serialise a trace as newline-delimited rows of space-separated spike
    counts, one configuration per line (the CLI trace-file format)."""
    return "".join(" ".join(str(int(v)) for v in cfg) + "\n" for cfg in trace.configs)


# -- phase kernels ---------------------------------------------------------

def _chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    parts = max(1, min(workers, total))
    step, extra = divmod(total, parts)
    bounds = []
    lo = 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def _map_chunks(total: int, workers: int, fn):
    """Apply ``fn(lo, hi)`` over a partition of ``range(total)``; results come
    back in chunk order, so any exact combination is scheduling-independent."""
    bounds = _chunk_bounds(total, workers)
    if len(bounds) == 1:
        return [fn(*bounds[0])]
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        return list(pool.map(lambda b: fn(*b), bounds))


def sv_calc(config: np.ndarray, delays: np.ndarray, rules: RuleVector,
            rule_map: NeuronRuleMap, selection: Selection,
            step: int = 0, workers: int = 1) -> SpikingVector:
    """Select at most one applicable rule per open neuron.

    A rule is applicable when its owner is open and the condition holds:
    at-least kind needs ``count >= threshold``, exact kind ``count ==
    threshold``.  ``FirstApplicable`` takes the lowest-index applicable
    rule; ``SeededRandom`` a uniform one keyed by (seed, step, neuron).
    """
    q = config.shape[0]
    offsets = rule_map.offsets
    seed = selection.seed if isinstance(selection, SeededRandom) else 0
    pick_first = isinstance(selection, FirstApplicable)

    def chunk(lo: int, hi: int) -> np.ndarray:
        chosen = np.full(hi - lo, -1, dtype=np.int64)
        r0, r1 = int(offsets[lo]), int(offsets[hi])
        if r0 == r1:
            return chosen
        owner = rules.neuron[r0:r1]
        count = config[owner]
        applicable = (delays[owner] == 0) & np.where(
            rules.is_exact[r0:r1],
            count == rules.threshold[r0:r1],
            count >= rules.threshold[r0:r1],
        )
        idx = np.flatnonzero(applicable)
        if idx.size == 0:
            return chosen
        owners = owner[idx]                       # ascending: rules are grouped
        neurons = np.unique(owners)
        first = np.searchsorted(owners, neurons, side="left")
        if pick_first:
            pick = first
        else:
            per = np.searchsorted(owners, neurons, side="right") - first
            offset = mix64_array(seed, step, neurons) % per.astype(np.uint64)
            pick = first + offset.astype(np.int64)
        chosen[neurons - lo] = idx[pick] + r0
        return chosen

    parts = _map_chunks(q, workers, chunk)
    chosen = parts[0] if len(parts) == 1 else np.concatenate(parts)
    return SpikingVector(chosen)


def step_sparse(state: SimState, matrix: SparseMatrix, rules: RuleVector,
                workers: int = 1) -> np.ndarray:
    """Transition step over the dense layout.

    Each open neuron adds the flagged rows of its matrix column; closed
    neurons keep their counts and receive nothing.  The open-owner re-check
    on flagged rules is vacuous under this engine's phase ordering
    (selection already requires an open owner) and kept for parity with the
    other kernels.
    """
    flags = state.spiking.flags(len(rules))
    active = np.flatnonzero(flags)
    if active.size:
        active = active[state.delays[rules.neuron[active]] == 0]  # vacuous re-check
    open_mask = state.delays == 0
    # flags are 0/1, so the flag-weighted column sum equals the plain sum of
    # the active rows (exact integer addition, any order)
    active_rows = matrix.data[active]

    def chunk(lo: int, hi: int) -> np.ndarray:
        return active_rows[:, lo:hi].sum(axis=0, dtype=np.int64)

    parts = _map_chunks(state.config.shape[0], workers, chunk)
    delta = parts[0] if len(parts) == 1 else np.concatenate(parts)
    nxt = np.where(open_mask, state.config + delta, state.config)
    if (nxt < 0).any():
        raise NegativeSpikes(_negative_report(nxt))
    return nxt


def step_ell(state: SimState, matrix: EllMatrix, rules: RuleVector,
             workers: int = 1, row_visits: np.ndarray | None = None) -> np.ndarray:
    """Transition step over the pair layout.

    Walks each active rule's column top-down, applying ``(target, amount)``
    pairs to open targets, and stops at the first null (padding is
    contiguous, so nothing is skipped).  Pass ``row_visits`` (int64[m]) to
    count rows visited per rule.
    """
    m = len(rules)
    flags = state.spiking.flags(m)
    active = np.flatnonzero(flags)
    if active.size:
        active = active[state.delays[rules.neuron[active]] == 0]  # vacuous re-check
    q = state.config.shape[0]
    rows = matrix.rows

    def chunk(lo: int, hi: int) -> np.ndarray:
        delta = np.zeros(q, dtype=np.int64)
        alive = active[lo:hi]
        row = 0
        while alive.size and row < rows:
            if row_visits is not None:
                row_visits[alive] += 1
            tgt = matrix.target[row, alive]
            amt = matrix.amount[row, alive]
            live = tgt >= 0
            tgt, amt = tgt[live], amt[live]
            open_t = state.delays[tgt] == 0
            np.add.at(delta, tgt[open_t], amt[open_t])
            alive = alive[live]
            row += 1
        return delta

    parts = _map_chunks(active.size, workers, chunk)
    delta = parts[0]
    for extra in parts[1:]:
        delta = delta + extra
    nxt = state.config + delta
    if (nxt < 0).any():
        raise NegativeSpikes(_negative_report(nxt))
    return nxt


def step_compressed(state: SimState, matrix: SynapseMatrix, rules: RuleVector,
                    workers: int = 1) -> np.ndarray:
    """Transition step over the synapse-only layout.

    For each open neuron with a selected rule: subtract its consumed count,
    then deliver its produced count to every open out-neighbour listed in
    the neuron's column (padding nulls terminate the walk; a zero-row matrix
    means no deliveries at all).
    """
    chosen = state.spiking.chosen
    firing = np.flatnonzero(chosen >= 0)
    if firing.size:
        firing = firing[state.delays[firing] == 0]  # vacuous re-check
    q = state.config.shape[0]
    rows = matrix.rows

    def chunk(lo: int, hi: int) -> np.ndarray:
        delta = np.zeros(q, dtype=np.int64)
        cols = firing[lo:hi]
        rule_ids = chosen[cols]
        delta[cols] -= rules.consumed[rule_ids]
        produced = rules.produced[rule_ids]
        sending = produced > 0  # forgetting rules deliver nothing
        alive, amounts = cols[sending], produced[sending]
        row = 0
        while alive.size and row < rows:
            tgt = matrix.target[row, alive]
            live = tgt >= 0
            tgt, amt = tgt[live], amounts[live]
            open_t = state.delays[tgt] == 0
            np.add.at(delta, tgt[open_t], amt[open_t])
            alive, amounts = alive[live], amt
            row += 1
        return delta

    parts = _map_chunks(firing.size, workers, chunk)
    delta = parts[0]
    for extra in parts[1:]:
        delta = delta + extra
    nxt = state.config + delta
    if (nxt < 0).any():
        raise NegativeSpikes(_negative_report(nxt))
    return nxt


def update_delays(delays: np.ndarray, spiking: SpikingVector,
                  rules: RuleVector) -> np.ndarray:
    """Age delay counters: closed neurons count down one step; a neuron that
    fired this step takes its rule's delay; everyone else stays open."""
    nxt = np.where(delays > 0, delays - 1, 0)
    fired = spiking.chosen >= 0
    if fired.any():
        nxt[fired] = rules.delay[spiking.chosen[fired]]
    return nxt


def _negative_report(config: np.ndarray) -> str:
    bad = np.flatnonzero(config < 0)
    head = ", ".join(f"neuron {i}: {int(config[i])}" for i in bad[:5])
    return f"spike counts went negative ({head}); the applied rule consumed more than stored"


# -- run orchestration -----------------------------------------------------

@dataclass(frozen=True)
class Prepared:
    """A system compiled for one backend: rule store plus its matrix form."""

    system: SNPSystem
    fmt: Format
    rules: RuleVector | None
    rule_map: NeuronRuleMap | None
    matrix: SparseMatrix | EllMatrix | SynapseMatrix | None


def prepare(system: SNPSystem, fmt: Format) -> Prepared:
    """Build the structures ``fmt`` needs; time this separately from runs."""
    system.ensure_validated()
    if fmt is Format.ORACLE:
        return Prepared(system, fmt, None, None, None)
    rules, rule_map = build_rule_vector(system)
    if fmt is Format.SPARSE:
        matrix = build_sparse(system)
    elif fmt is Format.ELL:
        matrix = build_ell(system)
    elif fmt is Format.COMPRESSED:
        matrix = build_compressed(system)
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown format {fmt!r}")
    return Prepared(system, fmt, rules, rule_map, matrix)


def simulate(system: SNPSystem, fmt: Format, options: SimOptions) -> Trace:
    """Run one computation of ``system`` under ``fmt`` (or the reference
    interpreter for ``Format.ORACLE``) and record a trace.

    The loop runs until the step bound is hit, or until no rule is
    applicable and every neuron is open.  Idle steps (nothing applicable but
    some neuron closed) still advance the counter and age delays.
    """
    return simulate_prepared(prepare(system, fmt), options)


def simulate_prepared(prep: Prepared, options: SimOptions) -> Trace:
    if prep.fmt is Format.ORACLE:
        from .oracle import oracle_simulate

        return oracle_simulate(prep.system, options)

    system = prep.system
    rules, rule_map = prep.rules, prep.rule_map
    m = len(rules)
    workers = options.workers

    config = np.asarray(system.initial_spikes, dtype=np.int64)
    delays = np.zeros(system.neuron_count, dtype=np.int64)

    configs = [config.copy()]
    delay_log = [delays.copy()] if options.record is not RecordLevel.CONFIGS else None
    spike_log = [] if options.record is RecordLevel.FULL else None

    if prep.fmt is Format.SPARSE:
        kernel = lambda st: step_sparse(st, prep.matrix, rules, workers)
    elif prep.fmt is Format.ELL:
        kernel = lambda st: step_ell(st, prep.matrix, rules, workers)
    else:
        kernel = lambda st: step_compressed(st, prep.matrix, rules, workers)

    step = 0
    while True:
        if step == options.max_steps:
            reason = HaltReason.STEP_LIMIT
            break
        spiking = sv_calc(config, delays, rules, rule_map, options.selection,
                          step=step, workers=workers)
        if spiking.is_empty and not delays.any():
            reason = HaltReason.NO_APPLICABLE_RULES
            break
        config = kernel(SimState(config, delays, spiking, step))
        delays = update_delays(delays, spiking, rules)
        step += 1
        configs.append(config.copy())
        if delay_log is not None:
            delay_log.append(delays.copy())
        if spike_log is not None:
            spike_log.append(spiking.chosen.copy())

    return Trace(configs=configs, halt_reason=reason,
                 delays=delay_log, spiking=spike_log)
