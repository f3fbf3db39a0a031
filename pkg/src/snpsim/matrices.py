"""Transition-matrix storage formats and the flattened rule store.

Three interchangeable layouts of the same transition information:

* ``sparse``     -- the uncompressed dense matrix, one row per rule and one
                    column per neuron: ``-consumed`` at the owning neuron,
                    ``+produced`` at every out-neighbour, zero elsewhere.
* ``ell``        -- transposed pair layout, one column per rule; row 0 holds
                    the consumption pair ``(owner, -consumed)``, later rows
                    the delivery pairs ``(target, +produced)`` padded with
                    nulls.  Column height is max out-degree + 1.
* ``compressed`` -- a synapse-only matrix (one column per neuron, rows are
                    its out-neighbours, null-padded to max out-degree);
                    consumption and production amounts live in the rule
                    store instead.

All three are built from a validated :class:`~snpsim.model.SNPSystem` and
are immutable once built.  Nulls are encoded as target index ``-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import SNPSystem

NULL = -1


class Format(str, enum.Enum):
    """Simulation backend / storage format selector."""

    SPARSE = "sparse"
    ELL = "ell"
    COMPRESSED = "compressed"
    ORACLE = "oracle"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


MATRIX_FORMATS = (Format.SPARSE, Format.ELL, Format.COMPRESSED)


@dataclass(frozen=True)
class RuleVector:
    """Flat per-rule arrays, grouped contiguously by owning neuron.

    ``produced`` is populated for every format even though the sparse and
    ELL step kernels never read it (they take the amount from the matrix);
    keeping one layout makes format switching trivial.
    """

    threshold: np.ndarray  # int64[m] condition multiplicity
    is_exact: np.ndarray   # bool[m]  condition kind (False = at-least)
    consumed: np.ndarray   # int64[m]
    produced: np.ndarray   # int64[m] 0 exactly for forgetting rules
    delay: np.ndarray      # int64[m]
    neuron: np.ndarray     # int64[m] owning neuron, non-decreasing

    def __len__(self) -> int:
        return self.threshold.shape[0]


@dataclass(frozen=True)
class NeuronRuleMap:
    """CSR-style offsets: rules of neuron ``i`` occupy
    ``offsets[i]:offsets[i+1]`` in the rule vector."""

    offsets: np.ndarray  # int64[q+1]


@dataclass(frozen=True)
class SparseMatrix:
    """Dense transition matrix, ``m`` rule rows by ``q`` neuron columns."""

    data: np.ndarray  # int64[m, q]


@dataclass(frozen=True)
class EllMatrix:
    """Column-per-rule pair layout; ``target == NULL`` marks padding.

    Within a column the first null is followed only by nulls, and delivery
    targets appear in ascending neuron order (canonical, reproducible
    builds).
    """

    target: np.ndarray  # int64[z', m]
    amount: np.ndarray  # int64[z', m]

    @property
    def rows(self) -> int:
        return self.target.shape[0]


@dataclass(frozen=True)
class SynapseMatrix:
    """Column-per-neuron adjacency, rows null-padded to max out-degree.

    Ascending target order per column; first null terminates the column.
    A system with no synapses yields zero rows.
    """

    target: np.ndarray  # int64[z, q]

    @property
    def rows(self) -> int:
        return self.target.shape[0]


def build_rule_vector(system: SNPSystem) -> tuple[RuleVector, NeuronRuleMap]:
    """Flatten the validated system's rules into per-rule arrays plus offsets."""
    system.ensure_validated()
    m = system.rule_count
    q = system.neuron_count
    threshold = np.empty(m, dtype=np.int64)
    is_exact = np.empty(m, dtype=bool)
    consumed = np.empty(m, dtype=np.int64)
    produced = np.empty(m, dtype=np.int64)
    delay = np.empty(m, dtype=np.int64)
    neuron = np.empty(m, dtype=np.int64)
    for ri, rule in enumerate(system.rules):
        threshold[ri] = rule.regex.threshold
        is_exact[ri] = bool(rule.regex.kind)
        consumed[ri] = rule.consumed
        produced[ri] = rule.produced
        delay[ri] = rule.delay
        neuron[ri] = rule.neuron

    offsets = np.zeros(q + 1, dtype=np.int64)
    for rule in system.rules:
        offsets[rule.neuron + 1] += 1
    np.cumsum(offsets, out=offsets)

    vector = RuleVector(threshold, is_exact, consumed, produced, delay, neuron)
    return vector, NeuronRuleMap(offsets)


def build_sparse(system: SNPSystem) -> SparseMatrix:
    """Dense m-by-q transition matrix of the validated system."""
    system.ensure_validated()
    m = system.rule_count
    q = system.neuron_count
    data = np.zeros((m, q), dtype=np.int64)
    for ri, rule in enumerate(system.rules):
        data[ri, rule.neuron] = -rule.consumed
        if rule.produced:
            for dst in system.out_neighbors(rule.neuron):
                data[ri, dst] = rule.produced
    return SparseMatrix(data)


def build_ell(system: SNPSystem) -> EllMatrix:
    """Pair layout: consumption pair first, then deliveries, null padding.

    Forgetting rules deliver nothing, so their columns hold only the
    consumption pair (a zero amount is a null entry, not a pair).
    """
    system.ensure_validated()
    m = system.rule_count
    rows = system.max_out_degree() + 1
    target = np.full((rows, m), NULL, dtype=np.int64)
    amount = np.zeros((rows, m), dtype=np.int64)
    for ri, rule in enumerate(system.rules):
        target[0, ri] = rule.neuron
        amount[0, ri] = -rule.consumed
        if rule.produced:
            for row, dst in enumerate(system.out_neighbors(rule.neuron), start=1):
                target[row, ri] = dst
                amount[row, ri] = rule.produced
    return EllMatrix(target, amount)


def build_compressed(system: SNPSystem) -> SynapseMatrix:
    """Synapse-only matrix; amounts come from the rule vector at step time."""
    system.ensure_validated()
    q = system.neuron_count
    rows = system.max_out_degree()
    target = np.full((rows, q), NULL, dtype=np.int64)
    for src in range(q):
        for row, dst in enumerate(system.out_neighbors(src)):
            target[row, src] = dst
    return SynapseMatrix(target)


def storage_elements(fmt: Format, system: SNPSystem) -> int:
    """Abstract stored-element count of ``fmt`` for the given system.

    Counts matrix entries plus the per-rule arrays, configuration, delays
    and map vector each format needs; ``z`` is the maximum out-degree.

    * sparse:     ``m*q + 3m + 2q + 1``
    * ell:        ``m*(2z + 5) + 2q + 1``
    * compressed: ``q*(z + 3) + 4m + 1``
    """
    stats = system.ensure_validated().stats()
    q, m, z = stats.q, stats.m, stats.max_out_degree
    if fmt is Format.SPARSE:
        return m * q + 3 * m + 2 * q + 1
    if fmt is Format.ELL:
        return m * (2 * z + 5) + 2 * q + 1
    if fmt is Format.COMPRESSED:
        return q * (z + 3) + 4 * m + 1
    raise ValueError(f"no storage accounting for format {fmt!r}")


def storage_bytes(fmt: Format, system: SNPSystem,
                  matrix_width: int = 4, config_width: int = 8) -> int:
    """Byte estimate: configuration entries (q) at ``config_width`` bytes,
    every other accounted element at ``matrix_width`` bytes.

    This mirrors the memory-trend reports, not the in-process numpy widths
    (computation always runs on 64-bit signed integers).
    """
    q = system.neuron_count
    elements = storage_elements(fmt, system)
    return (elements - q) * matrix_width + q * config_width
