"""Benchmark model families and the random-system generator.

Two structured families drive the measurements:

* ``gen_sort``       -- sorts ``n`` pairwise-distinct positive integers.
                        Input neurons drip their value one spike per step
                        into a bank of threshold detectors; detector ``j``
                        fires exactly when ``n+1-j`` inputs are still live
                        and feeds output neurons ``j..n``, whose final spike
                        totals are the input values in ascending order.
                        Stats: ``q = 3n``, ``m = n + n**2``, max out-degree
                        ``n``.
* ``gen_subset_sum`` -- one nondeterministic take/skip choice per number;
                        the designated output neuron fires if and only if
                        the taken numbers sum to the target.  Stats:
                        ``q = sum(V) + 2n + 2``, ``m = sum(V) + 4n + 2``,
                        max out-degree ``n``.

``gen_random`` samples small valid systems for property testing; every rule
condition implies its consumed amount is present, so runs cannot drive spike
counts negative.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import Trace
from .model import ModelError, SNPSystem, at_least, exactly


class InvalidInstance(ModelError):
    """A benchmark instance violates its family's preconditions."""


@dataclass(frozen=True)
class SortInstance:
    """``n`` pairwise-distinct positive integers; defaults to the worst case
    ``n, n-1, ..., 1``."""

    n: int
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstance(f"sort instance needs n >= 1, got {self.n}")
        values = self.values or tuple(range(self.n, 0, -1))
        object.__setattr__(self, "values", tuple(int(v) for v in values))
        if len(self.values) != self.n:
            raise InvalidInstance(
                f"expected {self.n} values, got {len(self.values)}"
            )
        if any(v < 1 for v in self.values):
            raise InvalidInstance("sort values must be positive integers")
        if len(set(self.values)) != self.n:
            raise InvalidInstance("sort values must be pairwise distinct")


@dataclass(frozen=True)
class SubsetSumInstance:
    """Number set ``values`` and target sum ``target`` (must not exceed the
    total, otherwise no benchmark path can accept)."""

    values: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise InvalidInstance("subset-sum values must be non-negative")
        if self.target < 0:
            raise InvalidInstance("subset-sum target must be non-negative")
        if self.target > sum(self.values):
            raise InvalidInstance(
                f"target {self.target} exceeds the total {sum(self.values)}"
            )

    @classmethod
    def random(cls, n: int, seed: int, low: int = 0, high: int = 50,
               fraction: float = 0.2) -> "SubsetSumInstance":
        """Experimental regime: ``n`` values uniform in ``[low, high]``, the
        target being the sum of a random ~``fraction`` subset."""
        if n < 0:
            raise InvalidInstance(f"n must be >= 0, got {n}")
        rng = random.Random(seed)
        values = tuple(rng.randint(low, high) for _ in range(n))
        k = round(fraction * n)
        target = sum(rng.sample(values, k)) if k else 0
        return cls(values, target)


def gen_sort(instance: SortInstance) -> SNPSystem:
    """Build the natural-number sorter for ``instance``.

    Neuron layout (0-based): inputs ``0..n-1`` loaded with the values,
    detectors ``n..2n-1``, outputs ``2n..3n-1`` (no rules).  Detector ``j``
    (1-based) fires on exactly ``n+1-j`` spikes and forgets every other
    count in ``1..n``; its forgetting rules list counts above the firing
    threshold ascending, then counts below it descending.
    """
    n = instance.n
    system = SNPSystem()
    inputs = [system.add_neuron(v) for v in instance.values]
    detectors = [system.add_neuron(0) for _ in range(n)]
    outputs = [system.add_neuron(0) for _ in range(n)]

    for src in inputs:
        system.add_rule(src, at_least(1), 1, 1, 0)
        for dst in detectors:
            system.add_synapse(src, dst)

    for j in range(1, n + 1):
        det = detectors[j - 1]
        fire_on = n + 1 - j
        system.add_rule(det, exactly(fire_on), fire_on, 1, 0)
        for k in range(fire_on + 1, n + 1):
            system.add_rule(det, exactly(k), k, 0, 0)
        for k in range(fire_on - 1, 0, -1):
            system.add_rule(det, exactly(k), k, 0, 0)
        for out in outputs[j - 1:]:
            system.add_synapse(det, out)

    return system.validate()


def sort_result(trace: Trace, n: int) -> list[int]:
    """Decode a finished sorter run: the output neurons' final spike totals,
    in neuron order, which equal the input values ascending."""
    final = trace.configs[-1]
    return [int(v) for v in final[2 * n:3 * n]]


def gen_subset_sum(instance: SubsetSumInstance) -> SNPSystem:
    """Build the nondeterministic subset-sum system for ``instance``.

    Per number ``v`` there are ``v`` store neurons (one spike each), a
    chooser and a relay.  A trigger neuron starts every chooser; with the
    stores' spikes each chooser then holds ``v + 1`` and picks one of two
    rules: take (forward all ``v + 1``) or skip (forward 1).  Relays pass
    the contribution to the adder, take-relays with a one-step delay.  The
    adder starts with one offset spike and fires exactly on
    ``target + n + 1`` spikes, i.e. exactly when the taken numbers sum to
    the target; a run accepts iff the adder fired (its count drained to 0).

    Neuron layout: trigger first, then stores/chooser/relay per number, the
    adder (the designated output neuron) last.
    """
    values = instance.values
    n = len(values)
    system = SNPSystem()

    trigger = system.add_neuron(1)
    system.add_rule(trigger, at_least(1), 1, 1, 0)

    choosers = []
    relays = []
    for v in values:
        stores = [system.add_neuron(1) for _ in range(v)]
        chooser = system.add_neuron(0)
        relay = system.add_neuron(0)
        for store in stores:
            system.add_rule(store, at_least(1), 1, 1, 0)
            system.add_synapse(store, chooser)
        # the binary choice: both rules match exactly v + 1 spikes
        system.add_rule(chooser, exactly(v + 1), v + 1, v + 1, 0)  # take
        system.add_rule(chooser, exactly(v + 1), v + 1, 1, 0)      # skip
        system.add_rule(relay, exactly(v + 1), v + 1, v + 1, 1)    # relay a take
        system.add_rule(relay, exactly(1), 1, 1, 0)                # relay a skip
        system.add_synapse(chooser, relay)
        choosers.append(chooser)
        relays.append(relay)

    adder = system.add_neuron(1)
    system.add_rule(adder, exactly(instance.target + n + 1),
                    instance.target + n + 1, 1, 0)
    for chooser in choosers:
        system.add_synapse(trigger, chooser)
    for relay in relays:
        system.add_synapse(relay, adder)
    system.output_neuron = adder

    return system.validate()


def subset_sum_accepted(trace: Trace, system: SNPSystem) -> bool:
    """True when the run's output neuron fired (accept): the adder only ever
    fires by draining its whole count, so acceptance shows as a final 0."""
    return int(trace.configs[-1][system.output_neuron]) == 0


SUBSET_SUM_STEP_BOUND = 6  # trigger, choice, relay, adder, delay drain, halt check


def gen_random(q_max: int, rules_per_neuron_max: int, out_degree_max: int,
               spikes_max: int, delay_max: int, seed: int) -> SNPSystem:
    """Sample a valid system uniformly within the given bounds, reproducibly.

    Rule mix per draw: ~20% forgetting, ~35% exact-condition firing, ~45%
    at-least firing; conditions always cover the consumed amount.
    """
    if min(q_max, rules_per_neuron_max, out_degree_max, spikes_max) < 1:
        raise InvalidInstance("bounds must be >= 1 (delay_max may be 0)")
    if delay_max < 0:
        raise InvalidInstance(f"delay_max must be >= 0, got {delay_max}")
    rng = random.Random(seed)
    system = SNPSystem()
    q = rng.randint(1, q_max)
    for _ in range(q):
        system.add_neuron(rng.randint(0, spikes_max))
    for neuron in range(q):
        for _ in range(rng.randint(0, rules_per_neuron_max)):
            roll = rng.random()
            if roll < 0.20:
                consumed = rng.randint(1, spikes_max)
                system.add_rule(neuron, exactly(consumed), consumed, 0, 0)
            else:
                threshold = rng.randint(1, spikes_max)
                consumed = rng.randint(1, threshold)
                produced = rng.randint(1, consumed)
                delay = rng.randint(0, delay_max)
                regex = exactly(threshold) if roll < 0.55 else at_least(threshold)
                system.add_rule(neuron, regex, consumed, produced, delay)
    if q > 1:
        for neuron in range(q):
            others = [i for i in range(q) if i != neuron]
            degree = rng.randint(0, min(out_degree_max, q - 1))
            for dst in rng.sample(others, degree):
                system.add_synapse(neuron, dst)
    return system.validate()
