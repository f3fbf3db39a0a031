"""Rule-selection policies shared by the matrix engine and the reference interpreter.

A policy decides, per open neuron and per step, which of the neuron's
applicable rules fires.  ``SeededRandom`` draws purely from
``(seed, step, neuron)`` so the outcome is reproducible, independent of
worker count, and identical across every simulation backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class FirstApplicable:
    """Deterministic policy: the lowest-index applicable rule wins."""


@dataclass(frozen=True)
class SeededRandom:
    """Uniform choice among a neuron's applicable rules, keyed by
    ``(seed, step, neuron)``."""

    seed: int


Selection = FirstApplicable | SeededRandom


def mix64(seed: int, step: int, neuron: int) -> int:
    """SplitMix64-style finalizer over the selection coordinates (mod 2**64)."""
    z = (seed + _GOLDEN * (step + 1) + _MIX1 * (neuron + 1)) & _MASK
    z ^= z >> 30
    z = (z * _MIX1) & _MASK
    z ^= z >> 27
    z = (z * _MIX2) & _MASK
    z ^= z >> 31
    return z


def mix64_array(seed: int, step: int, neurons: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mix64`; bit-identical to the scalar version.

    Arithmetic stays in uint64 arrays throughout: numpy array ops wrap
    silently at 64 bits, matching the masked scalar path.
    """
    base = (seed + _GOLDEN * (step + 1)) & _MASK
    z = np.asarray(neurons, dtype=np.uint64) + np.uint64(1)
    z = np.uint64(base) + np.uint64(_MIX1) * z
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return z


def choose_index(selection: Selection, step: int, neuron: int, count: int) -> int:
    """Index in ``[0, count)`` of the rule to fire among ``count`` applicable ones."""
    if count <= 0:
        raise ValueError("choose_index needs at least one applicable rule")
    if isinstance(selection, FirstApplicable):
        return 0
    return mix64(selection.seed, step, neuron) % count
