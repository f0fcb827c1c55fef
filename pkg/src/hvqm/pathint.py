"""Discretized free-particle path amplitudes for slit and hole experiments.

Each piecewise-linear path contributes exp(i S / hbar) with the free action
S = sum_segments m (dx)^2 / (2 dt); segment times are fixed by a constant
longitudinal speed v, so the transverse displacements carry all the phase
variation.  Screen patterns are built from two-segment paths
source -> aperture point -> screen bin, with midpoint quadrature across the
aperture.

Internal units hbar = m = 1; the de Broglie wavelength is
lambda = 2 pi hbar / (m v).  Default geometries put well over five fringes
on the screen while keeping the slit-width phase span small enough for the
K = 64 midpoint rule to be converged to ~1e-7.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .interference import coherent_intensity, incoherent_intensity

PATTERN_NORM_TOL = 1e-9


def path_amplitude(points: Sequence[Sequence[float]], times: Sequence[float],
                   mass: float = 1.0, hbar: float = 1.0) -> complex:
    """exp(i S / hbar) for a piecewise-linear path; |result| = 1.

    `points` is a sequence of >= 2 positions (any fixed dimension), `times`
    the positive duration of each segment.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dt = np.asarray(times, dtype=float)
    if len(pts) < 2 or len(dt) != len(pts) - 1:
        raise ValidationError("need >= 1 segment and one duration per segment")
    if np.any(dt <= 0):
        raise ValidationError("segment durations must be positive")
    disp_sq = np.sum(np.diff(pts, axis=0) ** 2, axis=1)
    action = float(np.sum(mass * disp_sq / (2.0 * dt)))
    return complex(np.exp(1j * action / hbar))


def _speed_from(v: float | None, wavelength: float | None,
                mass: float, hbar: float) -> float:
    if (v is None) == (wavelength is None):
        raise ValidationError("give exactly one of speed v or wavelength")
    if v is None:
        if wavelength <= 0:
            raise ValidationError("wavelength must be positive")
        return 2.0 * math.pi * hbar / (mass * wavelength)
    if v <= 0:
        raise ValidationError("speed must be positive")
    return v


@dataclass(frozen=True)
class Geometry2Slit:
    """Two slits of width w centered at +/- d/2, source at distance l1, screen at l2."""

    slit_separation: float = 1.0
    slit_width: float = 0.01
    l1: float = 400.0
    l2: float = 100.0
    mass: float = 1.0
    hbar: float = 1.0
    v: float = field(default=200.0 * math.pi)   # wavelength 0.01
    screen_half_width: float = 2.56
    bins: int = 512
    quadrature_points: int = 64

    def __post_init__(self):
        for name in ("slit_separation", "slit_width", "l1", "l2",
                     "mass", "hbar", "v", "screen_half_width"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if self.bins < 16:
            raise ValidationError("need at least 16 screen bins")
        if self.slit_width >= self.slit_separation:
            raise ValidationError("slit width must be smaller than the separation")
        if self.quadrature_points < 1:
            raise ValidationError("need at least one quadrature point")

    @classmethod
    def from_wavelength(cls, wavelength: float, **kw) -> "Geometry2Slit":
        mass = kw.get("mass", 1.0)
        hbar = kw.get("hbar", 1.0)
        return cls(v=_speed_from(None, wavelength, mass, hbar), **kw)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.mass * self.v)

    @property
    def fringe_spacing(self) -> float:
        return self.wavelength * self.l2 / self.slit_separation

    def bin_centers(self) -> np.ndarray:
        width = 2.0 * self.screen_half_width / self.bins
        return -self.screen_half_width + (np.arange(self.bins) + 0.5) * width

    @property
    def bin_width(self) -> float:
        return 2.0 * self.screen_half_width / self.bins


def _slit_center(g: Geometry2Slit, slit: str) -> float:
    if slit == "L":
        return -g.slit_separation / 2.0
    if slit == "R":
        return +g.slit_separation / 2.0
    raise ValidationError(f"slit must be 'L' or 'R', got {slit!r}")


def slit_wave(g: Geometry2Slit, slit: str, quadrature_points: int | None = None
              ) -> np.ndarray:
    """Complex amplitude per screen bin from one slit.

    Midpoint quadrature across the slit width; two-segment paths with
    times l1/v and l2/v.  The returned array carries the quadrature weight
    w/K so doubling K converges to the width integral.
    """
    k = quadrature_points or g.quadrature_points
    c = _slit_center(g, slit)
    y = c - g.slit_width / 2.0 + (np.arange(k) + 0.5) * (g.slit_width / k)
    x = g.bin_centers()
    # free action of source->(l1, y) and (l1, y)->(l1+l2, x) at speed v
    s1 = g.mass * (g.l1 ** 2 + y ** 2) * (g.v / (2.0 * g.l1))
    s2 = g.mass * (g.l2 ** 2 + (x[:, None] - y[None, :]) ** 2) * (g.v / (2.0 * g.l2))
    phases = np.exp(1j * (s1[None, :] + s2) / g.hbar)
    return (g.slit_width / k) * phases.sum(axis=1)


@dataclass(frozen=True)
class ScreenPattern:
    """Binned, normalized screen intensities."""

    bin_centers: np.ndarray
    probabilities: np.ndarray
    mode: str

    def __post_init__(self):
        if self.bin_centers.shape != self.probabilities.shape:
            raise ValidationError("bin grid and probabilities differ in length")
        if np.any(self.probabilities < 0):
            raise ValidationError("probabilities must be nonnegative")
        total = float(self.probabilities.sum())
        if abs(total - 1.0) > PATTERN_NORM_TOL:
            raise ValidationError(f"pattern sums to {total!r}, expected 1")


def screen_pattern(g: Geometry2Slit, mode: str) -> ScreenPattern:
    """Coherent |L + R|^2 or which-path |L|^2 + |R|^2, normalized per bin."""
    amp_l = slit_wave(g, "L")
    amp_r = slit_wave(g, "R")
    stacked = np.stack([amp_l, amp_r], axis=-1)
    if mode == "coherent":
        intensity = coherent_intensity(stacked)
    elif mode == "which-path":
        intensity = incoherent_intensity(stacked)
    else:
        raise ValidationError(f"mode must be 'coherent' or 'which-path', got {mode!r}")
    return ScreenPattern(g.bin_centers(), intensity / intensity.sum(), mode)


def dark_region_finder(p_coherent: ScreenPattern, p_whichpath: ScreenPattern,
                       eps: float) -> list[int]:
    """Bins where the coherent pattern is eps-suppressed against which-path.

    A bin qualifies when coherent < eps * which-path and the which-path
    value is above 10% of its own maximum (rules out the dim pattern edge).
    An undetected arrival in such a bin is the certifiable state-change
    event: it was forbidden while the paths were indistinguishable.
    """
    if (p_coherent.bin_centers.shape != p_whichpath.bin_centers.shape
            or np.any(p_coherent.bin_centers != p_whichpath.bin_centers)):
        raise ValidationError("patterns are binned on different grids")
    wp = p_whichpath.probabilities
    mask = (p_coherent.probabilities < eps * wp) & (wp > 0.1 * wp.max())
    return [int(i) for i in np.nonzero(mask)[0]]


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle on the final screen."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise ValidationError("region bounds must satisfy min < max")

    def overlaps(self, other: "Region") -> bool:
        return (self.x_min < other.x_max and other.x_min < self.x_max
                and self.y_min < other.y_max and other.y_min < self.y_max)

    def grid(self, n: int) -> tuple[np.ndarray, np.ndarray, float]:
        """Midpoint quadrature nodes (X, Y flattened) and the cell area."""
        hx = (self.x_max - self.x_min) / n
        hy = (self.y_max - self.y_min) / n
        xs = self.x_min + (np.arange(n) + 0.5) * hx
        ys = self.y_min + (np.arange(n) + 0.5) * hy
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return gx.ravel(), gy.ravel(), hx * hy


@dataclass(frozen=True)
class GeometryFourHole:
    """Four point holes at (+/-x0, +/-y0) and two detector regions +/-A.

    For product rectangles the path phase separates in x and y, so regions
    that share a y-range (or are y-mirrors) give every cell the same
    unobserved-hole interference factor, which then cancels under
    normalization.  The default -A region is therefore shifted in y rather
    than mirrored: generic geometry, visibly different coherent and
    which-path tables.
    """

    x0: float = 0.5
    y0: float = 0.5
    l1: float = 400.0
    l2: float = 100.0
    mass: float = 1.0
    hbar: float = 1.0
    v: float = field(default=200.0 * math.pi)
    region_plus: Region = field(default_factory=lambda: Region(1.0, 2.0, 0.25, 1.25))
    region_minus: Region = field(default_factory=lambda: Region(-2.0, -1.0, -0.55, 0.45))
    region_grid: int = 24

    def __post_init__(self):
        for name in ("x0", "y0", "l1", "l2", "mass", "hbar", "v"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if self.region_plus.overlaps(self.region_minus):
            raise ValidationError("detector regions must be disjoint")
        if self.region_grid < 2:
            raise ValidationError("region quadrature grid too coarse")

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.mass * self.v)


def _hole_region_amplitude(g: GeometryFourHole, sx: int, sy: int, region: Region) -> complex:
    """Coherent endpoint integral of the path amplitude through one hole."""
    hole = np.array([sx * g.x0, sy * g.y0])
    gx, gy, cell = region.grid(g.region_grid)
    s1 = g.mass * (g.l1 ** 2 + hole @ hole) * (g.v / (2.0 * g.l1))
    d2 = (gx - hole[0]) ** 2 + (gy - hole[1]) ** 2
    s2 = g.mass * (g.l2 ** 2 + d2) * (g.v / (2.0 * g.l2))
    return cell * complex(np.exp(1j * (s1 + s2) / g.hbar).sum())


def four_hole_amplitudes(g: GeometryFourHole) -> dict[tuple[int, int, int], complex]:
    """Amplitude table over (s_x, s_y, s_A): hole (s_x x0, s_y y0) into region s_A."""
    out = {}
    for sx in (1, -1):
        for sy in (1, -1):
            for sa, region in ((1, g.region_plus), (-1, g.region_minus)):
                out[(sx, sy, sa)] = _hole_region_amplitude(g, sx, sy, region)
    return out


def four_hole_table(g: GeometryFourHole, y_coherent: bool) -> dict[tuple[int, int], float]:
    """Joint table P(s_x, s_A), normalized over the four cells.

    With y-coherence on, the amplitudes through the unobserved +/-y0 holes
    are summed before squaring; off, they are squared first.  Same
    distinction as the two-slit coherent/which-path patterns, via the same
    helper functions.
    """
    amps = four_hole_amplitudes(g)
    combine = coherent_intensity if y_coherent else incoherent_intensity
    raw = {}
    for sx in (1, -1):
        for sa in (1, -1):
            pair = np.array([amps[(sx, 1, sa)], amps[(sx, -1, sa)]])
            raw[(sx, sa)] = float(combine(pair))
    total = sum(raw.values())
    return {k: v / total for k, v in raw.items()}


def four_hole_x_marginal(g: GeometryFourHole, y_coherent: bool) -> dict[int, float]:
    """P(s_x) recomputed from scratch, aggregating over both regions."""
    amps = four_hole_amplitudes(g)
    combine = coherent_intensity if y_coherent else incoherent_intensity
    raw = {}
    for sx in (1, -1):
        raw[sx] = sum(float(combine(np.array([amps[(sx, 1, sa)], amps[(sx, -1, sa)]])))
                      for sa in (1, -1))
    total = raw[1] + raw[-1]
    return {sx: v / total for sx, v in raw.items()}


def pattern_csv(p: ScreenPattern) -> str:
    buf = StringIO()
    buf.write("bin_center,probability\n")
    for c, v in zip(p.bin_centers, p.probabilities):
        buf.write(f"{float(c)!r},{float(v)!r}\n")
    return buf.getvalue()


def write_pattern_csv(p: ScreenPattern, path) -> None:
    Path(path).write_text(pattern_csv(p), encoding="utf-8")


def pattern_json(p: ScreenPattern) -> str:
    return json.dumps({
        "mode": p.mode,
        "bin_centers": [float(c) for c in p.bin_centers],
        "probabilities": [float(v) for v in p.probabilities],
    })
