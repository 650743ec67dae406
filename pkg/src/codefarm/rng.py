"""Counter-based random streams.

Every stochastic component draws from a named Stream derived from one master
seed. A stream's whole state is a single 64-bit draw counter, so streams
serialize into snapshots as one integer each, and batched (numpy) draws are
bit-identical to the same number of scalar draws. The generator is the
splitmix64 sequence evaluated at the counter.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 1/2^53; a 53-bit mantissa draw maps to [0, 1).
_DOUBLE_UNIT = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective 64-bit mix."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_key(master_seed: int, name: str) -> int:
    """Derive an independent stream key from the master seed and a stream name."""
    h = mix64(master_seed & MASK64)
    for b in name.encode("utf-8"):
        h = mix64((h ^ b) * _GAMMA)
    return h


class Stream:
    """Deterministic random stream: output n is mix64(key + n * gamma).

    The counter is the number of draws made so far; restoring it replays the
    stream from exactly that point. Array draws advance the counter by the
    array length and equal the corresponding scalar draws.
    """

    __slots__ = ("key", "counter")

    def __init__(self, key: int, counter: int = 0):
        self.key = key & MASK64
        self.counter = counter

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Stream):
            return NotImplemented
        return self.key == other.key and self.counter == other.counter

    def __repr__(self) -> str:
        return f"Stream(key={self.key:#018x}, counter={self.counter})"

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * _GAMMA)

    def next_u64_array(self, n: int) -> np.ndarray:
        counters = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        z = np.uint64(self.key) + counters * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def next_double(self) -> float:
        """Uniform float64 in [0, 1) from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * _DOUBLE_UNIT

    def next_double_array(self, n: int) -> np.ndarray:
        return (self.next_u64_array(n) >> np.uint64(11)) * _DOUBLE_UNIT

    def next_bit(self) -> int:
        """Fair coin: low bit of one draw."""
        return self.next_u64() & 1

    def next_bit_array(self, n: int) -> np.ndarray:
        return (self.next_u64_array(n) & np.uint64(1)).astype(np.uint8)

    def next_index(self, n: int) -> int:
        """Uniform integer in [0, n). Bias is O(n/2^53), negligible for n << 2^53."""
        return int(self.next_double() * n)
