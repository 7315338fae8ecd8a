"""Portable seeded PRNG used by clustering init and the synthetic learner.

The generator is xorshift64* (Vigna's 64-bit xorshift with a multiplicative
output scramble), chosen so the exact draw sequence can be reproduced from
any language with 64-bit integers:

    state ^= state >> 12
    state ^= state << 25        (mod 2^64)
    state ^= state >> 27
    output = state * 0x2545F4914F6CDD1D  (mod 2^64)

A zero state would be a fixed point, so seed 0 is replaced by a fixed
nonzero constant. Derived draws are documented on each method; README
"Determinism" repeats the full recipe.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15


class Xorshift64Star:
    """Deterministic xorshift64* stream seeded from a u64."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self._state = (seed & _MASK64) or _ZERO_SEED_SUBSTITUTE

    def next_u64(self) -> int:
        s = self._state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK64
        s ^= s >> 27
        self._state = s
        return (s * _MULT) & _MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1): top 53 bits of one u64 draw."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via Lemire's multiply-shift on one draw."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def gauss(self) -> float:
        """Standard normal via Box-Muller; consumes exactly two uniforms.

        The cosine branch only; the paired sine draw is discarded to keep
        the consumption rate fixed at two u64 per call. A zero first
        uniform is redrawn (log(0) is undefined).
        """
        u1 = self.uniform()
        while u1 == 0.0:
            u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
