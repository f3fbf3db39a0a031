"""Direct sequential interpreter of the system definition.

This is the ground truth the matrix backends are checked against.  It walks
the rule lists and the synapse set of the :class:`~snpsim.model.SNPSystem`
itself -- no rule vector, no matrix layout, no padding, plain Python
integers -- so any disagreement with a matrix backend localises the bug to
matrix construction or a step kernel.  It applies the same normative
semantics: fire-and-emit at the selection step, then close for the rule's
delay, losing spikes addressed to closed neurons.
"""

from __future__ import annotations

import numpy as np

from .engine import HaltReason, NegativeSpikes, RecordLevel, SimOptions, Trace
from .model import Rule, SNPSystem
from .selection import Selection, choose_index


def oracle_step(system: SNPSystem, config: list[int], delays: list[int],
                selection: Selection, step: int = 0,
                ) -> tuple[list[int], list[int], dict[int, int]]:
    """One synchronous step by per-neuron scanning.

    Returns ``(next_config, next_delays, fired)`` where ``fired`` maps each
    firing neuron to the global index of the rule it applied.
    """
    system.ensure_validated()
    rule_ids = system.rule_ids_by_neuron()
    q = len(config)

    fired: dict[int, int] = {}
    for neuron in range(q):
        if delays[neuron] != 0:
            continue
        count = config[neuron]
        applicable = [ri for ri in rule_ids[neuron]
                      if system.rules[ri].regex.matches(count)]
        if applicable:
            k = choose_index(selection, step, neuron, len(applicable))
            fired[neuron] = applicable[k]

    next_config = list(config)
    for neuron, ri in fired.items():
        rule: Rule = system.rules[ri]
        next_config[neuron] -= rule.consumed
        if rule.produced:
            for dst in system.out_neighbors(neuron):
                if delays[dst] == 0:
                    next_config[dst] += rule.produced
    for neuron, value in enumerate(next_config):
        if value < 0:
            raise NegativeSpikes(
                f"spike count of neuron {neuron} went negative ({value})"
            )

    next_delays = [d - 1 if d > 0 else 0 for d in delays]
    for neuron, ri in fired.items():
        next_delays[neuron] = system.rules[ri].delay

    return next_config, next_delays, fired


def oracle_simulate(system: SNPSystem, options: SimOptions) -> Trace:
    """Run the interpreter under the same loop and halting contract as the
    matrix engine and record an identically-shaped trace."""
    system.ensure_validated()
    q = system.neuron_count
    config = [int(v) for v in system.initial_spikes]
    delays = [0] * q

    configs = [np.asarray(config, dtype=np.int64)]
    delay_log = [np.zeros(q, dtype=np.int64)] \
        if options.record is not RecordLevel.CONFIGS else None
    spike_log = [] if options.record is RecordLevel.FULL else None

    step = 0
    while True:
        if step == options.max_steps:
            reason = HaltReason.STEP_LIMIT
            break
        next_config, next_delays, fired = oracle_step(system, config, delays,
                                                      options.selection, step=step)
        if not fired and not any(delays):
            # nothing applicable while every neuron is open: halt in place
            reason = HaltReason.NO_APPLICABLE_RULES
            break
        config, delays = next_config, next_delays
        step += 1
        configs.append(np.asarray(config, dtype=np.int64))
        if delay_log is not None:
            delay_log.append(np.asarray(delays, dtype=np.int64))
        if spike_log is not None:
            chosen = np.full(q, -1, dtype=np.int64)
            for neuron, ri in fired.items():
                chosen[neuron] = ri
            spike_log.append(chosen)

    return Trace(configs=configs, halt_reason=reason,
                 delays=delay_log, spiking=spike_log)
