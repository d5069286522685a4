"""Per-trial random streams derived from ``(master_seed, trial_index)``.

Each trial gets its own Philox key, so the stream a trial sees does not
depend on which worker runs it or in what order. Independent draws inside a
trial (class labels, selections) use separate Philox counter blocks of the
same key.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1

# splitmix64 finalizer constants (Steele, Lea & Flood 2014)
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL1 = 0xBF58476D1CE4E5B9
MIX_MUL2 = 0x94D049BB133111EB

STREAM_CLASSES = 0
STREAM_SELECTIONS = 1


def splitmix64(x: int) -> int:
    """One splitmix64 step: add the golden gamma, then avalanche."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL2) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "trial_index"):
            value = getattr(self, name)
            if not 0 <= int(value) <= MASK64:
                raise ValueError(f"{name} must fit in 64 unsigned bits, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def key(self) -> int:
        """128-bit Philox key; a pure function of the two seed words."""
        hi = splitmix64(self.master_seed)
        lo = splitmix64(hi ^ splitmix64(self.trial_index))
        return (hi << 64) | lo

    def generator(self, stream: int = 0) -> np.random.Generator:
        # the top counter word separates streams; each gets 2**192 blocks
        bitgen = np.random.Philox(key=self.key, counter=[0, 0, 0, stream])
        return np.random.Generator(bitgen)
