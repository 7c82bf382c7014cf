"""Deterministic, splittable random streams.

Every random draw in this package comes from a substream addressed by
``(master_seed, stream_index, layer, chunk)``.  Substreams are independent
Philox generators keyed through :class:`numpy.random.SeedSequence`, so results
are identical no matter how work is ordered or distributed across workers.

Layers separate the independent sign diagonals of the two-block transform
from Gaussian sampling; chunks index fixed-size blocks of draws inside one
logical stream so that batched sampling stays reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Layer(IntEnum):
    """Independent randomness layers within one stream."""

    D1 = 1
    D2 = 2
    GAUSS = 3


def mix64(*parts: int) -> int:
    """Fold integers into a single 64-bit stream index.

    An order-sensitive splitmix-style avalanche.  Used to derive one
    stream index per work unit, e.g. ``mix64(d, input_index)``.
    """
    acc = 0
    for part in parts:
        acc = (acc + (int(part) & MASK64) + _GOLDEN) & MASK64
        acc ^= acc >> 30
        acc = (acc * _MIX1) & MASK64
        acc ^= acc >> 27
        acc = (acc * _MIX2) & MASK64
        acc ^= acc >> 31
    return acc


def substream(master_seed: int, stream_index: int, layer: Layer, chunk: int = 0) -> np.random.Generator:
    """Return the Philox generator for one (seed, stream, layer, chunk) cell."""
    if chunk < 0:
        raise ValueError(f"chunk must be nonnegative, got {chunk}")
    seq = np.random.SeedSequence(
        [int(master_seed) & MASK64, int(stream_index) & MASK64, int(layer), int(chunk)]
    )
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class Stream:
    """Handle for one logical random stream.

    ``generator(layer, chunk)`` hands out the actual numpy generator;
    ``child(*parts)`` derives a sub-stream with a mixed-in index.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self, layer: Layer, chunk: int = 0) -> np.random.Generator:
        return substream(self.master_seed, self.stream_index, layer, chunk)

    def child(self, *parts: int) -> "Stream":
        return Stream(self.master_seed, mix64(self.stream_index, *parts))
