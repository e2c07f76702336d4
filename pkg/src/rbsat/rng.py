"""Deterministic pseudo-randomness.

Every random choice in this package is drawn from a named substream so that
(seed, purpose tag, index) fully determines the output on any platform.

The generator is xoshiro256** (Blackman/Vigna), with its 256-bit state filled
by splitmix64 as the authors recommend.  The substream seed is
``seed XOR fnv1a64(tag) XOR index``, all 64-bit wrapping.  Bounded integers
use unbiased rejection sampling; permutations use Fisher-Yates.  Ports of the
reference C code are bit-for-bit (verified against it).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

PURPOSE_TAGS = ("scope", "perm", "planted", "harness")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> int:
    """FNV-1a 64-bit hash of the UTF-8 bytes of ``text``."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def splitmix64(state: int):
    """Infinite splitmix64 output stream starting from ``state``."""
    x = state & MASK64
    while True:
        x = (x + 0x9E3779B97F4A7C15) & MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Stream:
    """One xoshiro256** substream, identified by (seed, tag, index)."""

    __slots__ = ("seed", "tag", "index", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int, tag: str, index: int = 0):
        if tag not in PURPOSE_TAGS:
            raise ValueError(f"unknown purpose tag {tag!r}; expected one of {PURPOSE_TAGS}")
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must fit in 64 bits")
        if index < 0:
            raise ValueError("index must be nonnegative")
        self.seed = seed
        self.tag = tag
        self.index = index
        sm = splitmix64(seed ^ fnv1a64(tag) ^ (index & MASK64))
        self._s0 = next(sm)
        self._s1 = next(sm)
        self._s2 = next(sm)
        self._s3 = next(sm)

    def next_uint64(self) -> int:
        result = (_rotl((self._s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (self._s1 << 17) & MASK64
        self._s2 ^= self._s0
        self._s3 ^= self._s1
        self._s1 ^= self._s2
        self._s0 ^= self._s3
        self._s2 ^= t
        self._s3 = _rotl(self._s3, 45)
        return result

    def bounded(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # Reject the top partial block so every residue is equally likely.
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_uint64()
            if r < limit:
                return r % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.bounded(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, d: int) -> tuple[int, ...]:
        """Uniform random permutation of [0, d)."""
        arr = list(range(d))
        self.shuffle(arr)
        return tuple(arr)

    def ordered_subset(self, n: int, k: int) -> tuple[int, ...]:
        """Uniform random ordered k-tuple of distinct values from [0, n)."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        arr = list(range(n))
        for t in range(k):
            j = t + self.bounded(n - t)
            arr[t], arr[j] = arr[j], arr[t]
        return tuple(arr[:k])


def rng_stream(seed: int, purpose_tag: str, index: int = 0) -> Stream:
    """Independent deterministic substream for (seed, purpose_tag, index)."""
    return Stream(seed, purpose_tag, index)
