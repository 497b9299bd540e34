"""Deterministic 64-bit PRNG shared by the SGD kernels.

The compiled and the pure-Python kernel must consume identical random
streams so that training runs can be cross-checked between them.  numpy
bit generators are not practical to replicate inside a C loop, so both
kernels use this splitmix64 generator; the Python class below is the
reference implementation and is also used by triple corruption outside
the kernels.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """splitmix64 stream; `state` is the full generator state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Modulo bias is negligible for n << 2^64."""
        return self.next_uint64() % n

    def shuffle(self, items) -> None:
        """In-place Fisher-Yates shuffle (descending index order)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
