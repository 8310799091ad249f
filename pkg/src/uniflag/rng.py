"""Deterministic random stream management.

Everything random in this package (bootstrap replicates, fold splits,
cell corruption) flows from one root seed. Each consumer derives its own
stream from an integer index, so results never depend on execution order
or on how many threads ran the work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class SeededRng:
    """A (seed, stream_id) pair naming one reproducible random stream.

    Equal pairs always yield identical value streams; distinct stream ids
    yield independent streams of the same root seed.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK64)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def stream(self, index: int) -> "SeededRng":
        """Independent child stream for consumer number ``index``."""
        return SeededRng(self.seed, _splitmix64(self.stream_id ^ _splitmix64(index)))

    def child_seed(self, index: int) -> int:
        """A bare 64-bit seed for components that take one (e.g. plans)."""
        return _splitmix64(self.seed ^ _splitmix64(self.stream_id ^ _splitmix64(index)))
