"""Singlet-pair ensembles, trial sampling, correlators and the CHSH harness.

A generated pair carries opposite hidden sign patterns: when Alice's
particle reads s at direction n, Bob's reads -s at the same direction.  The
joint outcome law for settings (n_a, n_b) is therefore the pair Born rule
with Bob's sign negated:

    P(alpha, beta) = (1 - alpha beta n_a . n_b) / 4

Four interchangeable modes:

* born_analytic      -- expectation values straight from the law above
* born_sampling      -- per-trial draws of (alpha, beta) for the settings
                        actually chosen; only measured pairs are realized
* classical_lhv      -- draws a full sign pattern from a supplied positive
                        distribution, outcomes read off deterministically
* quasiprob_analytic -- correlators from the signed weight table; refuses
                        to sample (negative weights cannot be drawn from)

Randomness is counter-based: trial i uses uniforms(seed, i), so logs are
bit-identical for any worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import quasiprob
from .errors import NotSampleableError, ValidationError
from .rng import categorical, uniforms
from .spin import Direction, DirectionSet, born_pair_probability, sign_matrix

LHV_SUM_TOL = 1e-12

# fixed outcome-pair order used by the inverse-CDF sampler and the logs
OUTCOME_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
_A_OUT = np.array([1, 1, -1, -1], dtype=np.int8)
_B_OUT = np.array([1, -1, 1, -1], dtype=np.int8)


class Mode(Enum):
    BORN_ANALYTIC = "born_analytic"
    BORN_SAMPLING = "born_sampling"
    CLASSICAL_LHV = "classical_lhv"
    QUASIPROB_ANALYTIC = "quasiprob_analytic"

    @property
    def is_sampling(self) -> bool:
        return self in (Mode.BORN_SAMPLING, Mode.CLASSICAL_LHV)


@dataclass(frozen=True, eq=False)
class SingletEnsemble:
    """Direction set plus the statistical mode used to answer queries."""

    directions: DirectionSet
    mode: Mode
    lhv_weights: np.ndarray | None = None

    def __post_init__(self):
        if self.mode is Mode.CLASSICAL_LHV:
            n = len(self.directions)
            w = self.lhv_weights
            if w is None or w.shape != (1 << n,):
                raise ValidationError(
                    f"classical mode needs {1 << n} pattern weights for N={n}")
            if np.any(w < 0):
                raise ValidationError("classical distribution entries must be >= 0")
            if abs(float(w.sum()) - 1.0) > LHV_SUM_TOL:
                raise ValidationError(
                    f"classical distribution sums to {float(w.sum())!r}, expected 1")
        elif self.lhv_weights is not None:
            raise ValidationError("lhv_weights only apply to classical_lhv mode")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    a_setting: int
    b_setting: int
    a_out: int
    b_out: int
    mode: str


def trial_record_json(rec: TrialRecord) -> str:
    """One JSONL line; key order is part of the log format."""
    return json.dumps({
        "trial": rec.trial,
        "a_setting": rec.a_setting,
        "b_setting": rec.b_setting,
        "a_out": rec.a_out,
        "b_out": rec.b_out,
        "mode": rec.mode,
    }, separators=(",", ":"))


def pair_joint_probability(n_a: Direction, n_b: Direction, alpha: int, beta: int) -> float:
    """(1 - alpha beta n_a . n_b) / 4: Bob carries the negated hidden sign."""
    return born_pair_probability(alpha, -beta, n_a, n_b)


def joint_outcome_probs(n_a: Direction, n_b: Direction) -> np.ndarray:
    """The four joint probabilities in OUTCOME_PAIRS order."""
    return np.array([pair_joint_probability(n_a, n_b, a, b) for a, b in OUTCOME_PAIRS])


def _check_setting(e: SingletEnsemble, idx: int) -> Direction:
    if not 0 <= idx < len(e.directions):
        raise ValidationError(f"setting index {idx} out of range for N={len(e.directions)}")
    return e.directions[idx]


def _sampling_cdf(e: SingletEnsemble, a_idx: int, b_idx: int) -> np.ndarray:
    if e.mode is Mode.BORN_SAMPLING:
        cum = np.cumsum(joint_outcome_probs(e.directions[a_idx], e.directions[b_idx]))
    elif e.mode is Mode.CLASSICAL_LHV:
        cum = np.cumsum(e.lhv_weights)
    else:
        raise NotSampleableError(
            f"mode {e.mode.value} is analytic only; signed or implicit weights "
            "cannot be drawn from")
    cum[-1] = 1.0  # guard the last inverse-CDF boundary against rounding
    return cum


def _outcomes_for_counters(e: SingletEnsemble, a_idx: int, b_idx: int,
                           seed: int, counters: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cum = _sampling_cdf(e, a_idx, b_idx)
    u = uniforms(seed, counters, substream=0)
    k = categorical(cum, u)
    if e.mode is Mode.BORN_SAMPLING:
        return _A_OUT[k], _B_OUT[k]
    a_out = (2 * ((k >> a_idx) & 1) - 1).astype(np.int8)
    b_out = (-(2 * ((k >> b_idx) & 1) - 1)).astype(np.int8)
    return a_out, b_out


def sample_trial(e: SingletEnsemble, a_idx: int, b_idx: int,
                 seed: int, trial: int) -> TrialRecord:
    """Draw a single trial; bit-identical to the batched path."""
    _check_setting(e, a_idx)
    _check_setting(e, b_idx)
    a, b = _outcomes_for_counters(e, a_idx, b_idx, seed,
                                  np.array([trial], dtype=np.uint64))
    return TrialRecord(trial, a_idx, b_idx, int(a[0]), int(b[0]), e.mode.value)


def sample_trials(e: SingletEnsemble, a_idx: int, b_idx: int, seed: int,
                  n_trials: int, start: int = 0, workers: int = 1
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Outcome arrays for trials [start, start + n_trials).

    Worker count only partitions the counter range; results are identical
    for any value because each trial is a pure function of (seed, index).
    """
    _check_setting(e, a_idx)
    _check_setting(e, b_idx)
    if n_trials < 1:
        raise ValidationError("n_trials must be >= 1")
    _sampling_cdf(e, a_idx, b_idx)  # raise early for analytic modes
    bounds = np.linspace(start, start + n_trials, max(1, workers) + 1, dtype=np.int64)
    chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

    def run(lo_hi):
        lo, hi = lo_hi
        return _outcomes_for_counters(e, a_idx, b_idx, seed,
                                      np.arange(lo, hi, dtype=np.uint64))

    if len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(chunks[0])]
    a = np.concatenate([p[0] for p in parts])
    b = np.concatenate([p[1] for p in parts])
    return a, b


@dataclass(frozen=True)
class CorrelationEstimate:
    value: float
    stderr: float | None = None   # None for analytic modes
    trials: int | None = None


def _analytic_correlation(e: SingletEnsemble, a_idx: int, b_idx: int) -> float:
    n_a, n_b = e.directions[a_idx], e.directions[b_idx]
    if e.mode is Mode.BORN_ANALYTIC:
        return sum(a * b * pair_joint_probability(n_a, n_b, a, b)
                   for a, b in OUTCOME_PAIRS)
    if e.mode is Mode.QUASIPROB_ANALYTIC:
        table = quasiprob.solve_weights(e.directions)
        signs = sign_matrix(len(e.directions))
        return float(-(signs[:, a_idx] * signs[:, b_idx]) @ table.weights)
    if e.mode is Mode.CLASSICAL_LHV:
        signs = sign_matrix(len(e.directions))
        return float(-(signs[:, a_idx] * signs[:, b_idx]) @ e.lhv_weights)
    raise ValidationError(f"no analytic correlator for mode {e.mode.value}")


def correlation(e: SingletEnsemble, a_idx: int, b_idx: int,
                trials: int | None = None, seed: int | None = None,
                start: int = 0, workers: int = 1) -> CorrelationEstimate:
    """E(a, b).  Analytic modes are exact; sampling modes need trials+seed."""
    _check_setting(e, a_idx)
    _check_setting(e, b_idx)
    if trials is None:
        return CorrelationEstimate(_analytic_correlation(e, a_idx, b_idx))
    if seed is None:
        raise ValidationError("sampling requires a seed")
    a, b = sample_trials(e, a_idx, b_idx, seed, trials, start=start, workers=workers)
    value = float(np.mean(a.astype(np.float64) * b.astype(np.float64)))
    stderr = math.sqrt(max(0.0, 1.0 - value * value) / trials)
    return CorrelationEstimate(value, stderr, trials)


# CHSH setting-pair order: (alice index, bob index) into a 4-direction set
# laid out as [a1, a2, b1, b2]
CHSH_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))


@dataclass(frozen=True)
class CHSHResult:
    """S = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)."""

    correlators: dict[tuple[int, int], float]
    s: float
    stderrs: dict[tuple[int, int], float] | None
    s_stderr: float | None
    trials_per_correlator: int | None
    mode: str


def chsh_ensemble(mode: Mode, a1: Direction, a2: Direction,
                  b1: Direction, b2: Direction,
                  lhv_weights: np.ndarray | None = None) -> SingletEnsemble:
    return SingletEnsemble(DirectionSet.of(a1, a2, b1, b2), mode, lhv_weights)


def chsh(e: SingletEnsemble, trials: int | None = None, seed: int | None = None,
         workers: int = 1) -> CHSHResult:
    """Combine the four correlators of a 4-direction ensemble into S.

    Monte Carlo blocks use disjoint global trial-counter ranges so a full
    run replays from (seed, trials) alone.
    """
    if len(e.directions) != 4:
        raise ValidationError("CHSH needs exactly four directions [a1, a2, b1, b2]")
    correlators: dict[tuple[int, int], float] = {}
    stderrs: dict[tuple[int, int], float] = {}
    for block, (ai, bi) in enumerate(CHSH_PAIRS):
        est = correlation(e, ai, bi, trials=trials, seed=seed,
                          start=(block * trials if trials else 0), workers=workers)
        correlators[(ai, bi)] = est.value
        if est.stderr is not None:
            stderrs[(ai, bi)] = est.stderr
    s = (correlators[(0, 2)] + correlators[(0, 3)]
         + correlators[(1, 2)] - correlators[(1, 3)])
    if stderrs:
        s_stderr = math.sqrt(sum(v * v for v in stderrs.values()))
        return CHSHResult(correlators, s, stderrs, s_stderr, trials, e.mode.value)
    return CHSHResult(correlators, s, None, None, None, e.mode.value)


def tsirelson_settings() -> tuple[Direction, Direction, Direction, Direction]:
    """Planar settings reaching |S| = 2 sqrt(2) with this S combination.

    Angles: a1 = pi/2, a2 = 0, b1 = pi/4, b2 = 3 pi/4.
    """
    return (Direction.from_planar_angle(math.pi / 2),
            Direction.from_planar_angle(0.0),
            Direction.from_planar_angle(math.pi / 4),
            Direction.from_planar_angle(3 * math.pi / 4))


def conditional_update(e: SingletEnsemble, a_idx: int, alpha: int,
                       b_idx: int) -> dict[int, float]:
    """Bob's predictive table given Alice's observed outcome.

    P(beta | alpha) = (1 - alpha beta n_a . n_b) / 2.  This is a filter on
    the recorded information: Bob's unconditional marginal stays (1/2, 1/2).
    """
    if e.mode not in (Mode.BORN_ANALYTIC, Mode.BORN_SAMPLING):
        raise ValidationError("conditional update is defined for Born modes")
    n_a = _check_setting(e, a_idx)
    n_b = _check_setting(e, b_idx)
    if alpha not in (1, -1):
        raise ValidationError("alpha must be +1 or -1")
    joint = {beta: pair_joint_probability(n_a, n_b, alpha, beta) for beta in (1, -1)}
    total = joint[1] + joint[-1]
    return {beta: joint[beta] / total for beta in (1, -1)}


def bob_marginal(e: SingletEnsemble, a_idx: int, b_idx: int) -> dict[int, float]:
    """Bob's outcome distribution with Alice's outcome summed out.

    Exactly (1/2, 1/2) for every setting pair: the no-signaling surface.
    """
    n_a = _check_setting(e, a_idx)
    n_b = _check_setting(e, b_idx)
    return {beta: sum(pair_joint_probability(n_a, n_b, alpha, beta)
                      for alpha in (1, -1))
            for beta in (1, -1)}
