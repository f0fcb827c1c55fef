"""Sum-then-square vs square-then-sum.

The single distinction that separates coherent from which-path statistics,
shared verbatim by the spin-table and slit-experiment code paths: summing
amplitudes over indistinguishable alternatives before squaring produces the
interference term; squaring first removes it.
"""

from __future__ import annotations

import numpy as np


def coherent_intensity(amplitudes: np.ndarray, axis: int = -1) -> np.ndarray:
    """|sum over alternatives|^2 (alternatives not distinguished)."""
    total = np.sum(amplitudes, axis=axis)
    return np.abs(total) ** 2


def incoherent_intensity(amplitudes: np.ndarray, axis: int = -1) -> np.ndarray:
    """sum over alternatives of |.|^2 (alternatives distinguished)."""
    return np.sum(np.abs(amplitudes) ** 2, axis=axis)
