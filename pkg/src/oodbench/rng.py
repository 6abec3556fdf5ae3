"""Portable seeded random stream.

SplitMix64 expands a 64-bit seed into the initial state and stream
selector of a PCG32 (XSH RR 64/32) generator; every random quantity in
the toolkit derives from that one stream, so a (seed, call sequence)
pair pins the output bit for bit on every platform.

Gaussians use Box-Muller: each pair of variates consumes exactly two
uniforms, and when a single variate is requested the second of the pair
is cached and handed out by the next request before new uniforms are
drawn.  Bulk fills go through the active kernel backend.
"""

import math

import numpy as np

from . import _backend

_MASK64 = (1 << 64) - 1
_PCG_MULT = 6364136223846793005
_U32_SCALE = 2.0**-32
_TWO_PI = 6.283185307179586


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


class Prng:
    """Single-owner deterministic generator; never share across threads."""

    __slots__ = ("_state", "_inc", "_have_cache", "_cache")

    def __init__(self, seed: int):
        sm = seed & _MASK64
        initstate, sm = _splitmix64(sm)
        initseq, sm = _splitmix64(sm)
        self._inc = ((initseq << 1) | 1) & _MASK64
        self._state = (0 * _PCG_MULT + self._inc) & _MASK64
        self._state = (self._state + initstate) & _MASK64
        self._state = (self._state * _PCG_MULT + self._inc) & _MASK64
        self._have_cache = False
        self._cache = 0.0

    def next_u32(self) -> int:
        old = self._state
        self._state = (old * _PCG_MULT + self._inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & 0xFFFFFFFF

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return self.next_u32() * _U32_SCALE

    def uniforms(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.float64)
        self._state = _backend.kernels.uniform_fill(self._state, self._inc, out)
        return out

    def gaussian(self) -> float:
        if self._have_cache:
            self._have_cache = False
            return self._cache
        u1 = (self.next_u32() + 1) * _U32_SCALE
        u2 = self.next_u32() * _U32_SCALE
        r = math.sqrt(-2.0 * math.log(u1))
        a = _TWO_PI * u2
        self._cache = r * math.sin(a)
        self._have_cache = True
        return r * math.cos(a)

    def gaussians(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.float64)
        self._state, have, cache = _backend.kernels.gaussian_fill(
            self._state, self._inc, int(self._have_cache), self._cache, out
        )
        self._have_cache = bool(have)
        self._cache = cache
        return out

    def poisson(self, rates: np.ndarray) -> np.ndarray:
        """Per-element Poisson counts for an array of rates (as float64)."""
        rates = np.ascontiguousarray(rates, dtype=np.float64)
        out = np.empty(rates.shape, dtype=np.float64)
        self._state = _backend.kernels.poisson_fill(self._state, self._inc, rates, out)
        return out

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        limit = (1 << 32) - ((1 << 32) % n)
        while True:
            r = self.next_u32()
            if r < limit:
                return r % n

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), partial Fisher-Yates order."""
        if k > n:
            raise ValueError("sample larger than population")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
