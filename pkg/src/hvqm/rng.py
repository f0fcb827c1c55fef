"""Counter-based randomness.

Every draw is a pure function of (seed, counter, substream): no generator
state is carried between trials, so trial i's randomness is identical no
matter how the trial range is chunked across workers or in what order the
chunks run.  The mixing function is the SplitMix64 finalizer applied twice,
which is enough avalanche to decorrelate the linearly-spaced inputs.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)       # 2^64 / golden ratio, odd
_SUBSTREAM_SALT = np.uint64(0xD1B54A32D192ED03)

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def uniforms(seed: int, counters, substream: int = 0) -> np.ndarray:
    """Uniform [0, 1) doubles for an array of counters.

    `counters` is typically a range of trial indices; `substream` separates
    independent draws belonging to the same trial (e.g. one per beamline
    stage).
    """
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed {seed} outside the 64-bit unsigned range")
    c = np.asarray(counters, dtype=np.uint64)
    # scalar part in Python ints: wrapping uint64 scalars would warn in numpy
    base = (seed * int(_GOLDEN) + (substream + 1) * int(_SUBSTREAM_SALT)) & 0xFFFFFFFFFFFFFFFF
    z = np.uint64(base) + (c + np.uint64(1)) * _M1
    z = _mix(_mix(z))
    # top 53 bits -> [0, 1)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def uniform(seed: int, counter: int, substream: int = 0) -> float:
    """Scalar convenience wrapper; bit-identical to the vector path."""
    return float(uniforms(seed, np.array([counter], dtype=np.uint64), substream)[0])


def categorical(cum_probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Map uniforms to category indices via the inverse CDF.

    `cum_probs` is the cumulative sum of the category probabilities.
    Zero-probability categories occupy empty intervals and are never hit.
    """
    return np.searchsorted(cum_probs, u, side="right")
