"""Seeded randomness helpers.

Every stochastic routine in the package takes an explicit integer seed and
builds its generator through :func:`philox`, a counter-based bit generator,
so a (seed, arguments) pair fully determines the output stream.  Seeds for
derived streams (per trial, per draw) are produced with :func:`mix_seed`,
a splitmix64 chain, so that nearby cell coordinates map to unrelated keys.
"""

import numpy as np

_MASK64 = (1 << 64) - 1

# splitmix64 constants (Steele, Lea & Flood; public domain reference code).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One splitmix64 step: a bijective 64-bit mix of ``x``."""
    x = (x + _GAMMA) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(base: int, *parts: int) -> int:
    """Derive a 64-bit seed from a base seed and integer coordinates.

    The mixing is a documented splitmix64 chain: fold each coordinate into
    the running hash, then advance.  Distinct coordinate tuples give
    distinct streams with overwhelming probability.
    """
    h = splitmix64(base & _MASK64)
    for p in parts:
        h = splitmix64(h ^ (p & _MASK64))
    return h


def philox(seed: int) -> np.random.Generator:
    """Counter-based generator for the given seed (same seed, same stream)."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
