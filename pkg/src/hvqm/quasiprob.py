"""Signed quasi-probability tables over hidden spin states.

For N planar directions, a table assigns one real weight to each of the 2^N
sign patterns such that every pairwise marginal reproduces
P(s_i, s_j) = (1 + s_i s_j cos(theta_j - theta_i)) / 4 and the weights sum
to one.  Such tables exist for any angles, but at Bell-violating angles
some weights are necessarily negative, which is exactly what rules out a
classical distribution.  The Born table |total amplitude|^2 (suitably
normalized) is the nonnegative object that carries the same pairwise
statistics via interference instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from io import StringIO
from pathlib import Path

import numpy as np

from .errors import SolverError, ValidationError
from .interference import coherent_intensity, incoherent_intensity
from .spin import (DirectionSet, SignPattern, check_pattern, pattern_from_index,
                   sign_matrix)

MARGINAL_TOL = 1e-10
MAX_SOLVE_N = 12
MAX_BORN_N = 20
NEGATIVITY_TOL = 1e-12


@dataclass(frozen=True)
class QuasiProbTable:
    """Signed weights over all 2^N sign patterns, row k = pattern integer k."""

    directions: DirectionSet
    weights: np.ndarray

    def __post_init__(self):
        n = len(self.directions)
        if self.weights.shape != (1 << n,):
            raise ValidationError(
                f"expected {1 << n} weights for N={n}, got {self.weights.shape}")
        total = float(self.weights.sum())
        if abs(total - 1.0) > MARGINAL_TOL:
            raise ValidationError(f"weights sum to {total!r}, expected 1")

    def weight(self, pattern) -> float:
        p = check_pattern(pattern, len(self.directions))
        return float(self.weights[_index(p)])


@dataclass(frozen=True)
class BornTable:
    """Normalized |amplitude|^2 per sign pattern; entries are true probabilities."""

    directions: DirectionSet
    probabilities: np.ndarray

    def __post_init__(self):
        if np.any(self.probabilities < 0):
            raise ValidationError("Born table entries must be nonnegative")
        total = float(self.probabilities.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"Born table sums to {total!r}, expected 1")

    def probability(self, pattern) -> float:
        p = check_pattern(pattern, len(self.directions))
        return float(self.probabilities[_index(p)])


def _index(pattern: SignPattern) -> int:
    return sum(1 << j for j, s in enumerate(pattern) if s == 1)


def pair_marginal_probability(s_i: int, s_j: int, theta_i: float, theta_j: float) -> float:
    """Target pairwise law (1 + s_i s_j cos(theta_j - theta_i)) / 4."""
    return 0.25 * (1.0 + s_i * s_j * math.cos(theta_j - theta_i))


def closed_form_w3(pattern, angles) -> float:
    """Exact 3-direction planar weight.

    W(s1,s2,s3) = [1 + s1 s2 cos(t2-t1) + s1 s3 cos(t3-t1) + s2 s3 cos(t3-t2)] / 8
    """
    if len(angles) != 3:
        raise ValidationError("closed form is specific to N=3")
    s1, s2, s3 = check_pattern(pattern, 3)
    t1, t2, t3 = angles
    return (1.0
            + s1 * s2 * math.cos(t2 - t1)
            + s1 * s3 * math.cos(t3 - t1)
            + s2 * s3 * math.cos(t3 - t2)) / 8.0


def _constraint_system(dirs: DirectionSet) -> tuple[np.ndarray, np.ndarray]:
    """Normalization plus all C(N,2) x 4 pairwise-marginal rows."""
    n = len(dirs)
    signs = sign_matrix(n)
    angles = dirs.angles
    rows = [np.ones(1 << n)]
    rhs = [1.0]
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1, -1):
                for sj in (1, -1):
                    mask = (signs[:, i] == si) & (signs[:, j] == sj)
                    rows.append(mask.astype(float))
                    rhs.append(pair_marginal_probability(si, sj, angles[i], angles[j]))
    return np.array(rows), np.array(rhs)


def solve_weights(dirs: DirectionSet) -> QuasiProbTable:
    """Solve the pairwise-marginal system for a signed weight table.

    N = 2 is exactly determined (the marginals are the table); N = 3 has the
    unique closed-form solution; for N > 3 the system is underdetermined and
    the minimum-Euclidean-norm solution is returned.  A residual above
    MARGINAL_TOL raises SolverError, which cannot happen for marginals that
    come from a single consistent pairwise law.
    """
    n = len(dirs)
    if not dirs.is_planar:
        raise ValidationError("quasi-probability tables are built for planar directions")
    if n < 2:
        raise ValidationError("need at least two directions")
    if n > MAX_SOLVE_N:
        raise ValidationError(f"N={n} exceeds the solver cap of {MAX_SOLVE_N}")
    a, b = _constraint_system(dirs)
    w, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = np.abs(a @ w - b)
    if residual.max() > MARGINAL_TOL:
        raise SolverError(
            "marginal constraints not met: max residual "
            f"{residual.max():.3e} over {len(b)} rows (tol {MARGINAL_TOL:.0e})")
    return QuasiProbTable(dirs, w)


def marginal(table: QuasiProbTable, indices) -> dict[tuple[int, ...], float]:
    """Sum the table over every index not listed; keys are sign tuples."""
    n = len(table.directions)
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValidationError("marginal indices must be distinct")
    for i in idx:
        if not 0 <= i < n:
            raise ValidationError(f"index {i} out of range for N={n}")
    signs = sign_matrix(n)
    out: dict[tuple[int, ...], float] = {}
    for k in range(1 << len(idx)):
        kept = pattern_from_index(k, len(idx))
        mask = np.ones(1 << n, dtype=bool)
        for pos, i in enumerate(idx):
            mask &= signs[:, i] == kept[pos]
        out[kept] = float(table.weights[mask].sum())
    return out


def marginal_pair(table: QuasiProbTable, i: int, j: int) -> dict[tuple[int, int], float]:
    """Four observable pair probabilities P(s_i, s_j); sums to 1."""
    if i == j:
        raise ValidationError("pair marginal needs two distinct indices")
    return marginal(table, (i, j))  # type: ignore[return-value]


def marginal_single(table: QuasiProbTable, i: int) -> dict[int, float]:
    return {k[0]: v for k, v in marginal(table, (i,)).items()}


def born_table(dirs: DirectionSet) -> BornTable:
    """Normalized |total amplitude|^2 over all sign patterns.

    Works for arbitrary (not only planar) direction sets; the sum over all
    patterns is 2^N * N, so normalization never divides by zero.
    """
    n = len(dirs)
    if n > MAX_BORN_N:
        raise ValidationError(f"N={n} exceeds the Born-table cap of {MAX_BORN_N}")
    signs = sign_matrix(n)                       # (2^N, N)
    vec = signs @ dirs.as_matrix()               # (2^N, 3) summed spin vectors
    intensity = np.einsum("ij,ij->i", vec, vec)
    return BornTable(dirs, intensity / intensity.sum())


def born_pair_marginal(dirs: DirectionSet, i: int, j: int) -> dict[tuple[int, int], float]:
    """Born pairwise law via sum-then-square over the unobserved indices.

    The amplitudes of all completions sharing (s_i, s_j) are summed before
    squaring (coherent_intensity); normalizing the four cells reproduces
    (1 + s_i s_j cos(theta_j - theta_i)) / 4.  Planar backend.
    """
    n = len(dirs)
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"bad index pair ({i}, {j}) for N={n}")
    if not dirs.is_planar:
        raise ValidationError("planar directions required")
    phases = np.exp(1j * np.array(dirs.angles))
    signs = sign_matrix(n)
    amps = signs @ phases                        # (2^N,) complex amplitudes
    cells = {}
    for si in (1, -1):
        for sj in (1, -1):
            mask = (signs[:, i] == si) & (signs[:, j] == sj)
            cells[(si, sj)] = coherent_intensity(amps[mask])
    total = sum(cells.values())
    return {k: float(v / total) for k, v in cells.items()}


def interference_gap(dirs: DirectionSet, i: int, j: int) -> float:
    """Max difference between sum-then-square and square-then-sum pair tables.

    Nonzero in general: the cross terms in the coherent sum are what let the
    Born route reproduce the pairwise law that forces signed weights.
    """
    n = len(dirs)
    phases = np.exp(1j * np.array(dirs.angles))
    signs = sign_matrix(n)
    amps = signs @ phases
    coh, inc = {}, {}
    for si in (1, -1):
        for sj in (1, -1):
            mask = (signs[:, i] == si) & (signs[:, j] == sj)
            coh[(si, sj)] = coherent_intensity(amps[mask])
            inc[(si, sj)] = incoherent_intensity(amps[mask])
    coh_total = sum(coh.values())
    inc_total = sum(inc.values())
    return max(abs(coh[k] / coh_total - inc[k] / inc_total) for k in coh)


@dataclass(frozen=True)
class NegativityReport:
    min_weight: float
    negative_patterns: tuple[SignPattern, ...]

    @property
    def has_negative(self) -> bool:
        return bool(self.negative_patterns)


def negativity_report(table: QuasiProbTable, tol: float = NEGATIVITY_TOL) -> NegativityReport:
    """Exact scan: minimum weight and every pattern with weight < -tol."""
    n = len(table.directions)
    negatives = tuple(pattern_from_index(k, n)
                      for k in range(1 << n) if table.weights[k] < -tol)
    return NegativityReport(float(table.weights.min()), negatives)


def table_csv(table: QuasiProbTable) -> str:
    """CSV rows in ascending pattern-integer order: s1..sN as +1/-1, weight."""
    n = len(table.directions)
    buf = StringIO()
    buf.write(",".join(f"s{j + 1}" for j in range(n)) + ",weight\n")
    for k in range(1 << n):
        p = pattern_from_index(k, n)
        buf.write(",".join(f"{s:+d}" for s in p))
        buf.write(f",{float(table.weights[k])!r}\n")
    return buf.getvalue()


def write_table_csv(table: QuasiProbTable, path) -> None:
    Path(path).write_text(table_csv(table), encoding="utf-8")


def born_csv(table: BornTable) -> str:
    n = len(table.directions)
    buf = StringIO()
    buf.write(",".join(f"s{j + 1}" for j in range(n)) + ",probability\n")
    for k in range(1 << n):
        p = pattern_from_index(k, n)
        buf.write(",".join(f"{s:+d}" for s in p))
        buf.write(f",{float(table.probabilities[k])!r}\n")
    return buf.getvalue()
