"""Spiking neural P systems with delays: core types, builder API, validation.

A system is a directed graph of neurons exchanging a single object kind
(spikes).  Each neuron holds a spike count and a finite list of rules; each
rule is guarded by a spike-count condition and either fires (consume ``c``,
send ``p`` to every out-neighbour, optionally close the neuron for ``d``
steps) or forgets (consume its trigger count, send nothing).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple


class ModelError(Exception):
    """Base class for errors raised while building or validating a system."""


class InvalidRule(ModelError):
    """A rule violates the firing/forgetting constraints."""


class UnknownNeuron(ModelError):
    """A neuron index is out of range."""


class ReflexiveSynapse(ModelError):
    """A synapse may not connect a neuron to itself."""


class RegexKind(enum.IntEnum):
    """Condition kind flag; the integer value is what rule arrays store."""

    AT_LEAST = 0
    EXACTLY = 1


@dataclass(frozen=True)
class SpikeRegex:
    """Spike-count condition guarding a rule.

    Two shapes exist: "at least ``threshold`` spikes" and "exactly
    ``threshold`` spikes".  ``at_least(0)`` matches any count and
    ``at_least(1)`` any positive count.
    """

    kind: RegexKind
    threshold: int

    def __post_init__(self):
        if self.threshold < 0:
            raise InvalidRule(f"condition threshold must be >= 0, got {self.threshold}")
        if self.kind is RegexKind.EXACTLY and self.threshold < 1:
            raise InvalidRule("an exact-count condition needs threshold >= 1")

    def matches(self, count: int) -> bool:
        if self.kind is RegexKind.AT_LEAST:
            return count >= self.threshold
        return count == self.threshold


def at_least(threshold: int) -> SpikeRegex:
    return SpikeRegex(RegexKind.AT_LEAST, threshold)


def exactly(threshold: int) -> SpikeRegex:
    return SpikeRegex(RegexKind.EXACTLY, threshold)


@dataclass(frozen=True)
class Rule:
    """One rule owned by neuron ``neuron``.

    Firing rule: ``produced >= 1`` and ``consumed >= produced``.
    Forgetting rule: ``produced == 0``; it must consume exactly its trigger
    count immediately, so ``delay == 0`` and ``regex == exactly(consumed)``.
    """

    neuron: int
    regex: SpikeRegex
    consumed: int
    produced: int
    delay: int = 0

    def __post_init__(self):
        if self.neuron < 0:
            raise UnknownNeuron(f"neuron index must be >= 0, got {self.neuron}")
        if self.consumed < 1:
            raise InvalidRule(f"a rule must consume at least one spike, got {self.consumed}")
        if self.produced < 0:
            raise InvalidRule(f"produced spike count must be >= 0, got {self.produced}")
        if self.delay < 0:
            raise InvalidRule(f"delay must be >= 0, got {self.delay}")
        if self.produced > 0:
            if self.consumed < self.produced:
                raise InvalidRule(
                    f"a firing rule cannot produce more than it consumes "
                    f"(consumed={self.consumed}, produced={self.produced})"
                )
        else:
            if self.delay != 0:
                raise InvalidRule("a forgetting rule cannot carry a delay")
            if self.regex.kind is not RegexKind.EXACTLY or self.regex.threshold != self.consumed:
                raise InvalidRule(
                    "a forgetting rule must be guarded by exactly its consumed count"
                )

    @property
    def is_forgetting(self) -> bool:
        return self.produced == 0


class SystemStats(NamedTuple):
    """Structural statistics of a validated system.

    ``z_ell`` is the row count of the pair-per-entry transition layout
    (max out-degree plus one, for the consumption entry); ``z_compressed``
    is the row count of the synapse-only layout (max out-degree).
    """

    q: int
    m: int
    max_out_degree: int
    z_ell: int
    z_compressed: int


@dataclass
class SNPSystem:
    """A spiking neural P system with delays, plus its builder API.

    Neuron and rule indices are 0-based in memory; the on-disk model format
    and the CLI display them 1-based.  After :meth:`validate` the rule list
    is grouped contiguously by neuron (stable within a neuron, so insertion
    order still decides "first applicable") and the instance must be treated
    as immutable; validated systems are safe to share across threads.
    """

    initial_spikes: list[int] = field(default_factory=list)
    rules: list[Rule] = field(default_factory=list)
    synapses: set[tuple[int, int]] = field(default_factory=set)
    output_neuron: int | None = None

    _validated: bool = field(default=False, init=False, repr=False, compare=False)
    _rule_ids: list[list[int]] | None = field(default=None, init=False, repr=False, compare=False)
    _neighbors: list[list[int]] | None = field(default=None, init=False, repr=False, compare=False)

    # -- builder ----------------------------------------------------------

    def add_neuron(self, initial_spikes: int) -> int:
        """Append a neuron holding ``initial_spikes`` and return its index."""
        if initial_spikes < 0:
            raise ModelError(f"initial spike count must be >= 0, got {initial_spikes}")
        self._touch()
        self.initial_spikes.append(int(initial_spikes))
        return len(self.initial_spikes) - 1

    def add_rule(self, neuron: int, regex: SpikeRegex, consumed: int,
                 produced: int, delay: int = 0) -> int:
        """Append a rule to ``neuron`` and return its insertion index."""
        self._check_neuron(neuron)
        rule = Rule(neuron, regex, consumed, produced, delay)
        self._touch()
        self.rules.append(rule)
        return len(self.rules) - 1

    def add_synapse(self, source: int, target: int) -> None:
        """Insert the arc ``source -> target``; duplicates are ignored."""
        if source == target:
            raise ReflexiveSynapse(f"synapse ({source}, {source}) is reflexive")
        self._check_neuron(source)
        self._check_neuron(target)
        self._touch()
        self.synapses.add((source, target))

    # -- queries ----------------------------------------------------------

    @property
    def neuron_count(self) -> int:
        return len(self.initial_spikes)

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    def out_degrees(self) -> list[int]:
        deg = [0] * self.neuron_count
        for src, _ in self.synapses:
            deg[src] += 1
        return deg

    def max_out_degree(self) -> int:
        degrees = self.out_degrees()
        return max(degrees, default=0)

    def out_neighbors(self, neuron: int) -> list[int]:
        """Out-neighbours of ``neuron`` in ascending index order."""
        if self._neighbors is not None:
            return self._neighbors[neuron]
        return sorted(dst for src, dst in self.synapses if src == neuron)

    def rule_ids_by_neuron(self) -> list[list[int]]:
        """Global rule indices grouped per neuron, in stored order."""
        if self._rule_ids is not None:
            return self._rule_ids
        groups: list[list[int]] = [[] for _ in range(self.neuron_count)]
        for ri, rule in enumerate(self.rules):
            groups[rule.neuron].append(ri)
        return groups

    def stats(self) -> SystemStats:
        mod = self.max_out_degree()
        return SystemStats(
            q=self.neuron_count,
            m=self.rule_count,
            max_out_degree=mod,
            z_ell=mod + 1,
            z_compressed=mod,
        )

    # -- validation -------------------------------------------------------

    def validate(self) -> "SNPSystem":
        """Check every invariant, normalise rule order, freeze caches.

        Rules added out of neuron order are re-sorted into contiguous
        per-neuron groups (stable, preserving per-neuron insertion order).
        Returns ``self`` for chaining; idempotent.
        """
        if self._validated:
            return self
        q = self.neuron_count
        for spikes in self.initial_spikes:
            if spikes < 0:
                raise ModelError(f"initial spike count must be >= 0, got {spikes}")
        for rule in self.rules:
            if rule.neuron >= q:
                raise UnknownNeuron(
                    f"rule owner {rule.neuron} out of range for {q} neurons"
                )
        for src, dst in self.synapses:
            if src == dst:
                raise ReflexiveSynapse(f"synapse ({src}, {dst}) is reflexive")
            if not (0 <= src < q) or not (0 <= dst < q):
                raise UnknownNeuron(f"synapse ({src}, {dst}) out of range for {q} neurons")
        if self.output_neuron is not None and not (0 <= self.output_neuron < q):
            raise UnknownNeuron(f"output neuron {self.output_neuron} out of range")

        self.rules.sort(key=lambda rule: rule.neuron)  # stable: keeps per-neuron order
        groups: list[list[int]] = [[] for _ in range(q)]
        for ri, rule in enumerate(self.rules):
            groups[rule.neuron].append(ri)
        neighbors = [[] for _ in range(q)]
        for src, dst in sorted(self.synapses):
            neighbors[src].append(dst)

        self._rule_ids = groups
        self._neighbors = neighbors
        self._validated = True
        return self

    @property
    def is_validated(self) -> bool:
        return self._validated

    def ensure_validated(self) -> "SNPSystem":
        return self if self._validated else self.validate()

    # -- internals --------------------------------------------------------

    def _check_neuron(self, neuron: int) -> None:
        if not (0 <= neuron < self.neuron_count):
            raise UnknownNeuron(
                f"neuron {neuron} out of range for {self.neuron_count} neurons"
            )

    def _touch(self) -> None:
        self._validated = False
        self._rule_ids = None
        self._neighbors = None
