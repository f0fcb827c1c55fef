"""Sequential Stern-Gerlach beamlines with optional branch blocking.

A split device separates the beam into the two eigenbranches of its axis;
an unblocked split followed by a matching recombine restores the input
state exactly (no projection happens), while a block absorbs one branch,
multiplying the survival weight by the kept branch's norm and renormalizing
the conditional state.  The final device is an analyzer returning Born
probabilities on whatever survived.

Monte Carlo trials draw one uniform per blocked stage plus one for the
analyzer, all counter-based, so event logs replay bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SequenceError, ValidationError
from .rng import uniforms
from .spin import Direction

AXIS_MATCH_TOL = 1e-9

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_ID = np.eye(2, dtype=complex)


def pauli_dot(n: Direction) -> np.ndarray:
    return n.nx * _SIGMA_X + n.ny * _SIGMA_Y + n.nz * _SIGMA_Z


def projector(n: Direction, s: int) -> np.ndarray:
    """(1 + s n.sigma) / 2 projects onto the s branch of axis n."""
    if s not in (1, -1):
        raise ValidationError("branch sign must be +1 or -1")
    return 0.5 * (_ID + s * pauli_dot(n))


@dataclass(frozen=True)
class SGDevice:
    axis: Direction
    role: str                 # "split" | "recombine" | "analyze"
    block: int | None = None  # +1 blocks the + branch, -1 the - branch

    def __post_init__(self):
        if self.role not in ("split", "recombine", "analyze"):
            raise ValidationError(f"unknown device role {self.role!r}")
        if self.block is not None:
            if self.role != "split":
                raise ValidationError("blocking is only meaningful on split stages")
            if self.block not in (1, -1):
                raise ValidationError("block must be +1 or -1")


def split(axis: Direction, block: int | None = None) -> SGDevice:
    return SGDevice(axis, "split", block)


def recombine(axis: Direction) -> SGDevice:
    return SGDevice(axis, "recombine")


def analyze(axis: Direction) -> SGDevice:
    return SGDevice(axis, "analyze")


@dataclass(frozen=True, eq=False)
class BeamState:
    """Two complex amplitudes in the z reference basis plus a survival weight."""

    amplitudes: np.ndarray
    survival: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (2,):
            raise ValidationError("beam state needs exactly two amplitudes")
        object.__setattr__(self, "amplitudes", a)
        if not 0.0 <= self.survival <= 1.0 + 1e-12:
            raise ValidationError("survival weight must lie in [0, 1]")

    @classmethod
    def eigenstate(cls, axis: Direction, s: int) -> "BeamState":
        """Normalized s eigenvector of axis.sigma, built from the projector."""
        p = projector(axis, s)
        col = p[:, 0] if abs(p[0, 0]) >= abs(p[1, 1]) else p[:, 1]
        return cls(col / np.linalg.norm(col))

    @classmethod
    def plus_x(cls) -> "BeamState":
        return cls.eigenstate(Direction(1.0, 0.0, 0.0), +1)

    @classmethod
    def plus_z(cls) -> "BeamState":
        return cls.eigenstate(Direction(0.0, 0.0, 1.0), +1)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class SequenceResult:
    probabilities: dict[int, float] | None   # None when the beam is extinguished
    survival: float
    extinguished: bool
    stage_survivals: tuple[tuple[int, float], ...]  # (device index, conditional p)


def _born_probs(psi: np.ndarray, axis: Direction) -> dict[int, float]:
    probs = {}
    for s in (1, -1):
        p = float(np.vdot(psi, projector(axis, s) @ psi).real)
        probs[s] = max(0.0, p)
    total = probs[1] + probs[-1]
    return {s: p / total for s, p in probs.items()}


def _axes_aligned(a: Direction, b: Direction) -> bool:
    return abs(abs(a.dot(b)) - 1.0) <= AXIS_MATCH_TOL


def run_sequence(devices: Sequence[SGDevice], beam: BeamState) -> SequenceResult:
    """Walk the device list analytically.

    Raises SequenceError for malformed lists: no analyzer at the end, a
    recombine without a matching preceding split, nested unblocked splits,
    or analyzing while the beam is still separated.
    """
    if not devices:
        raise SequenceError("empty device sequence")
    if devices[-1].role != "analyze":
        raise SequenceError("the final device must be an analyzer")
    if any(d.role == "analyze" for d in devices[:-1]):
        raise SequenceError("analyzer before the end of the sequence")

    psi = beam.amplitudes / np.sqrt(beam.norm_sq())
    survival = beam.survival
    extinguished = False
    stage_survivals: list[tuple[int, float]] = []

    branches: tuple[np.ndarray, np.ndarray] | None = None
    open_axis: Direction | None = None   # most recent split not yet recombined

    for idx, dev in enumerate(devices[:-1]):
        if extinguished:
            break
        if dev.role == "split":
            if branches is not None:
                raise SequenceError("split while the beam is already separated")
            if dev.block is None:
                branches = (projector(dev.axis, +1) @ psi,
                            projector(dev.axis, -1) @ psi)
                open_axis = dev.axis
            else:
                kept = projector(dev.axis, -dev.block) @ psi
                p_keep = float(np.vdot(kept, kept).real)
                stage_survivals.append((idx, p_keep))
                survival *= p_keep
                if p_keep <= 0.0:
                    extinguished = True
                else:
                    psi = kept / np.sqrt(p_keep)
                open_axis = dev.axis
        elif dev.role == "recombine":
            if open_axis is None:
                raise SequenceError("recombine without a matching split")
            if not _axes_aligned(dev.axis, open_axis):
                raise SequenceError(
                    "recombine axis does not match the open split axis")
            if branches is not None:
                psi = branches[0] + branches[1]
                branches = None
            open_axis = None

    if extinguished:
        return SequenceResult(None, 0.0, True, tuple(stage_survivals))
    if branches is not None:
        raise SequenceError("cannot analyze a beam that is still separated")
    return SequenceResult(_born_probs(psi, devices[-1].axis), survival,
                          False, tuple(stage_survivals))


@dataclass(frozen=True)
class TrialEvent:
    trial: int
    absorbed_at: int | None   # device index of the absorbing block, if any
    outcome: int | None       # analyzer outcome for surviving trials


def event_json(e: TrialEvent) -> str:
    return json.dumps({
        "trial": e.trial,
        "absorbed_at": e.absorbed_at,
        "outcome": e.outcome,
    }, separators=(",", ":"))


def monte_carlo_sequence(devices: Sequence[SGDevice], beam: BeamState,
                         trials: int, seed: int, start: int = 0
                         ) -> tuple[dict[int, float], float, list[TrialEvent]]:
    """Per-trial stochastic walk; blocked branches absorb the particle.

    Returns (empirical outcome distribution among survivors, survivor
    fraction, event log).  Stage thresholds come from the analytic walk,
    since the conditional state is deterministic given survival.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    analytic = run_sequence(devices, beam)   # also validates the sequence

    counters = np.arange(start, start + trials, dtype=np.uint64)
    alive = np.ones(trials, dtype=bool)
    absorbed_at = np.full(trials, -1, dtype=np.int64)

    for idx, p_keep in analytic.stage_survivals:
        u = uniforms(seed, counters, substream=idx)
        hit = alive & (u >= p_keep)
        absorbed_at[hit] = idx
        alive &= ~hit

    outcome = np.zeros(trials, dtype=np.int64)
    if analytic.probabilities is not None and alive.any():
        u = uniforms(seed, counters, substream=len(devices) - 1)
        p_plus = analytic.probabilities[1]
        outcome[alive] = np.where(u[alive] < p_plus, 1, -1)

    events = [TrialEvent(int(start + i),
                         int(absorbed_at[i]) if absorbed_at[i] >= 0 else None,
                         int(outcome[i]) if alive[i] else None)
              for i in range(trials)]
    n_alive = int(alive.sum())
    if n_alive == 0:
        return {}, 0.0, events
    dist = {s: float(np.sum(outcome[alive] == s)) / n_alive for s in (1, -1)}
    return dist, n_alive / trials, events
