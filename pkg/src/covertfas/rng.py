"""Deterministic counter-based random numbers (SplitMix64).

Every stochastic routine in this package draws from the generator defined
here, so results are reproducible bit-for-bit across runs and platforms.
The algorithm is SplitMix64 run in counter mode:

    out(key, i) = finalize((key + GAMMA * (i + 1)) mod 2**64)

where GAMMA = 0x9E3779B97F4A7C15 and ``finalize`` is the usual xor-shift /
multiply avalanche (constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
Uniform doubles take the top 53 bits; normal deviates come from Box-Muller
on consecutive counter pairs.  Substreams are split by hashing an index
path into the key, so chunk c of a simulation always sees the same values
no matter how the chunks are scheduled.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

_INV_2_53 = 2.0 ** -53


def _finalize(z: np.ndarray) -> np.ndarray:
    # SplitMix64 avalanche; operates elementwise on uint64 arrays.
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def counter_words(key: int, start: int, count: int) -> np.ndarray:
    """Raw 64-bit outputs for counters ``start .. start + count - 1``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _finalize(np.uint64(key & 0xFFFFFFFFFFFFFFFF) + _GAMMA * idx)


def uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles in [0, 1) from the counter stream."""
    return (counter_words(key, start, count) >> np.uint64(11)) * _INV_2_53


def normals(key: int, start: int, count: int) -> np.ndarray:
    """Standard normal deviates via Box-Muller.

    Consumes counters ``start .. start + 2*count - 1``; deviate j uses the
    pair (start + 2j, start + 2j + 1), so disjoint counter ranges give
    independent, order-insensitive blocks.
    """
    w = counter_words(key, start, 2 * count)
    # u1 in (0, 1] so the log is finite; u2 in [0, 1).
    u1 = ((w[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (w[1::2] >> np.uint64(11)) * _INV_2_53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def complex_normals(key: int, start: int, count: int) -> np.ndarray:
    """Circularly-symmetric complex normals with unit variance.

    Real and imaginary parts each have variance 1/2.  Deviate j consumes
    counters (start + 2j, start + 2j + 1): one Box-Muller pair yields both
    quadrature components.
    """
    w = counter_words(key, start, 2 * count)
    u1 = ((w[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (w[1::2] >> np.uint64(11)) * _INV_2_53
    r = np.sqrt(-np.log(u1))  # Rayleigh(sigma=1/sqrt(2)) envelope
    phase = 2.0 * np.pi * u2
    return r * np.cos(phase) + 1j * (r * np.sin(phase))


def derive_seed(seed: int, *path: int) -> int:
    """Split a master seed along an index path.

    Each path component advances the state by GAMMA and finalizes with the
    component folded in, so (seed, 0) and (seed, 1) give unrelated streams
    and nested derivations stay independent.
    """
    s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        for ix in path:
            s = s + _GAMMA
            s = _finalize(s ^ (np.uint64(ix & 0xFFFFFFFFFFFFFFFF) * _MIX1))
    return int(s)


class CounterStream:
    """Stateful cursor over one counter stream; used for one-at-a-time draws."""

    def __init__(self, key: int, position: int = 0):
        self.key = int(key) & 0xFFFFFFFFFFFFFFFF
        self.position = int(position)

    def take_uniforms(self, count: int) -> np.ndarray:
        out = uniforms(self.key, self.position, count)
        self.position += count
        return out

    def take_complex_normals(self, count: int) -> np.ndarray:
        out = complex_normals(self.key, self.position, count)
        self.position += 2 * count
        return out
