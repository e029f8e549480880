"""SplitMix64, the portable generator behind every seeded instance.

SplitMix64 (Steele, Lea, Flood 2014; reference code by S. Vigna) keeps a
64-bit state, adds the golden-ratio increment ``0x9E3779B97F4A7C15`` each
step and returns a bijective mix of the new state.  Because the k-th state
is just ``seed + k * gamma``, whole streams are produced in one vectorized
pass.  Seed 0 starts ``0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...``.
"""

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset+count-1`` of the stream started at ``seed``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    start = (seed + (offset + 1) * GAMMA) & _MASK
    k = np.arange(count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        states = np.uint64(start) + k * np.uint64(GAMMA)
        return _mix(states)


def uniform01(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits of each output."""
    return (splitmix64(seed, count, offset) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, *parts: int) -> int:
    """Deterministic child seed for a tuple of non-negative labels."""
    state = seed & _MASK
    for part in parts:
        state = int(splitmix64((state ^ (part & _MASK)) & _MASK, 1)[0])
    return state
