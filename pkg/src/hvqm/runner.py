"""Config-driven experiment execution, trial logs, reports and replay.

Every Monte Carlo kind writes a JSON-lines log whose first line is a header
carrying the canonical config hash; rerunning with the same seed produces a
byte-identical log for any worker count.  `replay` recomputes the summary
statistics from the log and checks them against the stored report.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, beamline, epr, pathint, phasespace, quasiprob
from .config import (ExperimentConfig, KINDS, config_hash, parse_direction,
                     parse_lhv_weights)
from .errors import ValidationError
from .spin import Direction, DirectionSet

_SETTING_NAMES = {0: "a1", 1: "a2", 2: "b1", 3: "b2"}


@dataclass(frozen=True)
class RunReport:
    kind: str
    config_hash: str
    results: dict
    duration_s: float
    outputs: tuple[str, ...]
    seed: int | None = None
    trials: int | None = None
    mode: str | None = None
    config: dict | None = None   # effective config echo, overrides applied

    def to_json(self) -> str:
        return json.dumps({
            "kind": self.kind,
            "version": __version__,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "trials": self.trials,
            "mode": self.mode,
            "config": self.config,
            "results": self.results,
            "duration_s": self.duration_s,
            "outputs": list(self.outputs),
        }, indent=2)


def _require_kind(cfg: ExperimentConfig) -> str:
    if not cfg.kind:
        raise ValidationError("missing required field [experiment] kind")
    if cfg.kind not in KINDS:
        raise ValidationError(
            f"unknown experiment kind {cfg.kind!r}; expected one of {', '.join(KINDS)}")
    return cfg.kind


def _seed_of(cfg: ExperimentConfig) -> int:
    seed = cfg.get_int("experiment", "seed")
    if not 0 <= seed < 2 ** 64:
        raise ValidationError(f"seed {seed} outside the 64-bit unsigned range")
    return seed


def _trials_of(cfg: ExperimentConfig) -> int:
    trials = cfg.get_int("experiment", "trials")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    return trials


def _mode_of(cfg: ExperimentConfig, default: str = "born_analytic") -> epr.Mode:
    raw = cfg.get("experiment", "mode", default)
    try:
        return epr.Mode(raw)
    except ValueError:
        raise ValidationError(
            f"unknown mode {raw!r}; expected one of "
            + ", ".join(m.value for m in epr.Mode))


def _chsh_ensemble(cfg: ExperimentConfig) -> epr.SingletEnsemble:
    mode = _mode_of(cfg)
    dirs = [parse_direction(cfg.require("directions", k), f"[directions] {k}")
            for k in ("a1", "a2", "b1", "b2")]
    lhv = None
    if mode is epr.Mode.CLASSICAL_LHV:
        lhv = np.array(parse_lhv_weights(cfg, 4))
    return epr.chsh_ensemble(mode, *dirs, lhv_weights=lhv)


def _epr_ensemble(cfg: ExperimentConfig) -> epr.SingletEnsemble:
    mode = _mode_of(cfg, default="born_sampling")
    dirs = DirectionSet.of(
        parse_direction(cfg.require("directions", "a"), "[directions] a"),
        parse_direction(cfg.require("directions", "b"), "[directions] b"))
    lhv = None
    if mode is epr.Mode.CLASSICAL_LHV:
        lhv = np.array(parse_lhv_weights(cfg, 2))
    return epr.SingletEnsemble(dirs, mode, lhv)


def _quasiprob_directions(cfg: ExperimentConfig) -> DirectionSet:
    section = cfg.sections.get("directions", {})
    keyed = []
    for key, raw in section.items():
        if not key.startswith("theta"):
            raise ValidationError(f"[directions] keys look like theta<k>, got {key!r}")
        try:
            keyed.append((int(key[5:]), raw))
        except ValueError:
            raise ValidationError(f"[directions] keys look like theta<k>, got {key!r}")
    if len(keyed) < 2:
        raise ValidationError("quasiprob needs at least [directions] theta1, theta2")
    angles = []
    for k, raw in sorted(keyed):
        try:
            angles.append(float(raw))
        except ValueError:
            raise ValidationError(f"[directions] theta{k} = {raw!r} is not a number")
    return DirectionSet.from_planar_angles(angles)


def _twoslit_geometry(cfg: ExperimentConfig) -> pathint.Geometry2Slit:
    g = cfg.sections.get("geometry", {})
    default = pathint.Geometry2Slit()
    kwargs = dict(
        slit_separation=cfg.get_float("geometry", "d", default.slit_separation),
        slit_width=cfg.get_float("geometry", "w", default.slit_width),
        l1=cfg.get_float("geometry", "l1", default.l1),
        l2=cfg.get_float("geometry", "l2", default.l2),
        mass=cfg.get_float("geometry", "mass", default.mass),
        hbar=cfg.get_float("geometry", "hbar", default.hbar),
        screen_half_width=cfg.get_float("geometry", "screen_half_width",
                                        default.screen_half_width),
        bins=cfg.get_int("geometry", "bins", default.bins),
        quadrature_points=cfg.get_int("geometry", "quadrature_points",
                                      default.quadrature_points),
    )
    if "wavelength" in g and "v" in g:
        raise ValidationError("give either [geometry] v or wavelength, not both")
    if "wavelength" in g:
        wavelength = cfg.get_float("geometry", "wavelength")
        if wavelength <= 0:
            raise ValidationError("wavelength must be positive")
        kwargs["v"] = 2.0 * math.pi * kwargs["hbar"] / (kwargs["mass"] * wavelength)
    elif "v" in g:
        kwargs["v"] = cfg.get_float("geometry", "v")
    return pathint.Geometry2Slit(**kwargs)


def _region_of(cfg: ExperimentConfig, key: str, default: pathint.Region) -> pathint.Region:
    raw = cfg.get("geometry", key)
    if raw is None:
        return default
    parts = raw.split(",")
    if len(parts) != 4:
        raise ValidationError(f"[geometry] {key} needs 'x_min,x_max,y_min,y_max'")
    try:
        return pathint.Region(*(float(p) for p in parts))
    except ValueError:
        raise ValidationError(f"[geometry] {key} = {raw!r} is not four numbers")


def _fourhole_geometry(cfg: ExperimentConfig) -> pathint.GeometryFourHole:
    default = pathint.GeometryFourHole()
    kwargs = dict(
        x0=cfg.get_float("geometry", "x0", default.x0),
        y0=cfg.get_float("geometry", "y0", default.y0),
        l1=cfg.get_float("geometry", "l1", default.l1),
        l2=cfg.get_float("geometry", "l2", default.l2),
        mass=cfg.get_float("geometry", "mass", default.mass),
        hbar=cfg.get_float("geometry", "hbar", default.hbar),
        region_grid=cfg.get_int("geometry", "region_grid", default.region_grid),
        region_plus=_region_of(cfg, "region_plus", default.region_plus),
        region_minus=_region_of(cfg, "region_minus", default.region_minus),
    )
    if "wavelength" in cfg.sections.get("geometry", {}):
        wavelength = cfg.get_float("geometry", "wavelength")
        if wavelength <= 0:
            raise ValidationError("wavelength must be positive")
        kwargs["v"] = 2.0 * math.pi * kwargs["hbar"] / (kwargs["mass"] * wavelength)
    else:
        kwargs["v"] = cfg.get_float("geometry", "v", default.v)
    return pathint.GeometryFourHole(**kwargs)


_INPUT_STATES = {
    "+x": ((1.0, 0.0, 0.0), 1), "-x": ((1.0, 0.0, 0.0), -1),
    "+y": ((0.0, 1.0, 0.0), 1), "-y": ((0.0, 1.0, 0.0), -1),
    "+z": ((0.0, 0.0, 1.0), 1), "-z": ((0.0, 0.0, 1.0), -1),
}


def _sg_input(cfg: ExperimentConfig) -> beamline.BeamState:
    raw = cfg.get("experiment", "input", "+z").strip().lower()
    if raw not in _INPUT_STATES:
        raise ValidationError(
            f"unknown input state {raw!r}; expected one of {', '.join(_INPUT_STATES)}")
    (nx, ny, nz), s = _INPUT_STATES[raw]
    return beamline.BeamState.eigenstate(Direction(nx, ny, nz), s)


def _sg_devices(cfg: ExperimentConfig) -> list[beamline.SGDevice]:
    section = cfg.sections.get("sequence")
    if not section:
        raise ValidationError("sterngerlach needs a [sequence] section")
    keyed = []
    for key, raw in section.items():
        if not key.startswith("stage"):
            raise ValidationError(f"[sequence] keys look like stage<k>, got {key!r}")
        try:
            keyed.append((int(key[5:]), raw))
        except ValueError:
            raise ValidationError(f"[sequence] keys look like stage<k>, got {key!r}")
    devices = []
    for k, raw in sorted(keyed):
        tokens = raw.split()
        if not tokens:
            raise ValidationError(f"[sequence] stage{k} is empty")
        role = tokens[0]
        if role not in ("split", "recombine", "analyze"):
            raise ValidationError(
                f"[sequence] stage{k}: unknown role {role!r}")
        if len(tokens) < 2:
            raise ValidationError(f"[sequence] stage{k}: missing axis")
        axis = parse_direction(tokens[1], f"[sequence] stage{k} axis")
        block = None
        rest = tokens[2:]
        if rest:
            if role != "split" or len(rest) != 2 or rest[0] != "block" or rest[1] not in ("+", "-"):
                raise ValidationError(
                    f"[sequence] stage{k}: trailing tokens {' '.join(rest)!r} "
                    "(only 'block +' or 'block -' on split stages)")
            block = 1 if rest[1] == "+" else -1
        devices.append(beamline.SGDevice(axis, role, block))
    return devices


def _phasespace_setup(cfg: ExperimentConfig) -> phasespace.WaveFunction:
    m = cfg.get_int("grid", "m", 256)
    dr = cfg.get_float("grid", "dr", 1.0)
    hbar = cfg.get_float("grid", "hbar", 1.0)
    kind = cfg.get("state", "kind", "gaussian")
    if kind == "gaussian":
        return phasespace.gaussian_wavefunction(
            m, dr,
            center=cfg.get_float("state", "center", 0.0),
            width=cfg.get_float("state", "width", 8.0),
            momentum=cfg.get_float("state", "momentum", 0.0),
            hbar=hbar)
    if kind == "plane_wave":
        return phasespace.plane_wave(
            m, dr, cfg.get_int("state", "mode_index", 4), hbar=hbar)
    raise ValidationError(f"unknown [state] kind {kind!r}")


def validate_experiment(cfg: ExperimentConfig) -> list[str]:
    """Full schema and physics validation without running; returns diagnostics."""
    kind = _require_kind(cfg)
    notes = [f"kind: {kind}"]
    if kind == "chsh":
        e = _chsh_ensemble(cfg)
        notes.append(f"mode: {e.mode.value}")
        if e.mode.is_sampling:
            notes.append(f"seed: {_seed_of(cfg)}")
            notes.append(f"trials per correlator: {_trials_of(cfg)}")
    elif kind == "epr":
        e = _epr_ensemble(cfg)
        notes.append(f"mode: {e.mode.value}")
        if e.mode.is_sampling:
            notes.append(f"seed: {_seed_of(cfg)}")
            notes.append(f"trials: {_trials_of(cfg)}")
    elif kind == "quasiprob":
        dirs = _quasiprob_directions(cfg)
        notes.append(f"directions: {len(dirs)} planar angles")
    elif kind == "twoslit":
        g = _twoslit_geometry(cfg)
        notes.append(f"wavelength: {g.wavelength!r}")
        notes.append(f"fringe spacing lambda*l2/d: {g.fringe_spacing!r}")
        notes.append(
            f"fringes on screen: {2 * g.screen_half_width / g.fringe_spacing:.1f}")
    elif kind == "fourhole":
        g = _fourhole_geometry(cfg)
        notes.append(f"wavelength: {g.wavelength!r}")
    elif kind == "sterngerlach":
        devices = _sg_devices(cfg)
        beamline.run_sequence(devices, _sg_input(cfg))  # raises on malformed sequence
        notes.append(f"devices: {len(devices)}")
        notes.append(f"seed: {_seed_of(cfg)}")
        notes.append(f"trials: {_trials_of(cfg)}")
    elif kind == "phasespace":
        wf = _phasespace_setup(cfg)
        notes.append(f"grid: M={wf.m}, dr={wf.dr!r}")
    return notes


def _correlator_stats(a_out: np.ndarray, b_out: np.ndarray) -> float:
    """Shared by run and replay so recomputed values match bit for bit."""
    prod = a_out.astype(np.float64) * b_out.astype(np.float64)
    return float(np.mean(prod))


def _write_log(path: Path, header: dict, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for line in lines:
            fh.write(line + "\n")


def _log_header(kind: str, cfg_hash: str, seed: int) -> dict:
    return {"kind": kind, "config_hash": cfg_hash, "seed": seed,
            "version": __version__}


def _run_chsh(cfg, out_dir: Path, workers: int, cfg_hash: str):
    e = _chsh_ensemble(cfg)
    outputs = []
    seed = trials = None
    if e.mode.is_sampling:
        seed, trials = _seed_of(cfg), _trials_of(cfg)
        correlators, stderrs = {}, {}
        log = out_dir / "trials.jsonl"
        with open(log, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(_log_header("chsh", cfg_hash, seed),
                                separators=(",", ":")) + "\n")
            for block, (ai, bi) in enumerate(epr.CHSH_PAIRS):
                start = block * trials
                a_out, b_out = epr.sample_trials(e, ai, bi, seed, trials,
                                                 start=start, workers=workers)
                value = _correlator_stats(a_out, b_out)
                name = f"E({_SETTING_NAMES[ai]},{_SETTING_NAMES[bi]})"
                correlators[name] = value
                stderrs[name] = math.sqrt(max(0.0, 1.0 - value * value) / trials)
                for i in range(trials):
                    fh.write(epr.trial_record_json(epr.TrialRecord(
                        start + i, ai, bi, int(a_out[i]), int(b_out[i]),
                        e.mode.value)) + "\n")
        s = (correlators["E(a1,b1)"] + correlators["E(a1,b2)"]
             + correlators["E(a2,b1)"] - correlators["E(a2,b2)"])
        s_stderr = math.sqrt(sum(v * v for v in stderrs.values()))
        outputs.append(log.name)
        results = {"correlators": correlators, "stderrs": stderrs,
                   "S": s, "S_stderr": s_stderr,
                   "trials_per_correlator": trials}
    else:
        res = epr.chsh(e)
        correlators = {f"E({_SETTING_NAMES[a]},{_SETTING_NAMES[b]})": v
                       for (a, b), v in res.correlators.items()}
        results = {"correlators": correlators, "stderrs": None,
                   "S": res.s, "S_stderr": None, "trials_per_correlator": None}
    return results, outputs, seed, trials, e.mode.value


def _run_epr(cfg, out_dir: Path, workers: int, cfg_hash: str):
    e = _epr_ensemble(cfg)
    outputs = []
    seed = trials = None
    if e.mode.is_sampling:
        seed, trials = _seed_of(cfg), _trials_of(cfg)
        a_out, b_out = epr.sample_trials(e, 0, 1, seed, trials, workers=workers)
        value = _correlator_stats(a_out, b_out)
        counts = {"++": int(np.sum((a_out == 1) & (b_out == 1))),
                  "+-": int(np.sum((a_out == 1) & (b_out == -1))),
                  "-+": int(np.sum((a_out == -1) & (b_out == 1))),
                  "--": int(np.sum((a_out == -1) & (b_out == -1)))}
        log = out_dir / "trials.jsonl"
        _write_log(log, _log_header("epr", cfg_hash, seed),
                   (epr.trial_record_json(epr.TrialRecord(
                       i, 0, 1, int(a_out[i]), int(b_out[i]), e.mode.value))
                    for i in range(trials)))
        outputs.append(log.name)
        results = {"E": value,
                   "stderr": math.sqrt(max(0.0, 1.0 - value * value) / trials),
                   "counts": counts, "trials": trials}
    else:
        est = epr.correlation(e, 0, 1)
        results = {"E": est.value, "stderr": None, "counts": None, "trials": None}
    return results, outputs, seed, trials, e.mode.value


def _run_quasiprob(cfg, out_dir: Path, workers: int, cfg_hash: str):
    dirs = _quasiprob_directions(cfg)
    table = quasiprob.solve_weights(dirs)
    born = quasiprob.born_table(dirs)
    report = quasiprob.negativity_report(table)
    quasiprob.write_table_csv(table, out_dir / "weights.csv")
    (out_dir / "born.csv").write_text(quasiprob.born_csv(born), encoding="utf-8")
    results = {
        "n_directions": len(dirs),
        "min_weight": report.min_weight,
        "negative_patterns": ["(" + ",".join("+" if s > 0 else "-" for s in p) + ")"
                              for p in report.negative_patterns],
    }
    return results, ["weights.csv", "born.csv"], None, None, None


def _run_twoslit(cfg, out_dir: Path, workers: int, cfg_hash: str):
    g = _twoslit_geometry(cfg)
    eps = cfg.get_float("experiment", "dark_eps", 1e-3)
    coherent = pathint.screen_pattern(g, "coherent")
    whichpath = pathint.screen_pattern(g, "which-path")
    dark = pathint.dark_region_finder(coherent, whichpath, eps)
    pathint.write_pattern_csv(coherent, out_dir / "coherent.csv")
    pathint.write_pattern_csv(whichpath, out_dir / "whichpath.csv")
    centers = g.bin_centers()
    (out_dir / "dark_regions.json").write_text(json.dumps({
        "eps": eps,
        "bins": dark,
        "bin_centers": [float(centers[i]) for i in dark],
    }, indent=2), encoding="utf-8")
    results = {
        "fringe_spacing": g.fringe_spacing,
        "wavelength": g.wavelength,
        "n_dark_bins": len(dark),
        "coherent_max": float(coherent.probabilities.max()),
        "whichpath_max": float(whichpath.probabilities.max()),
    }
    return results, ["coherent.csv", "whichpath.csv", "dark_regions.json"], None, None, None


def _run_fourhole(cfg, out_dir: Path, workers: int, cfg_hash: str):
    g = _fourhole_geometry(cfg)
    coherent = pathint.four_hole_table(g, y_coherent=True)
    whichpath = pathint.four_hole_table(g, y_coherent=False)
    gap = max(abs(coherent[k] - whichpath[k]) for k in coherent)

    def cells(t):
        return {f"({'+' if sx > 0 else '-'}x0,{'+' if sa > 0 else '-'}A)": v
                for (sx, sa), v in t.items()}

    results = {"coherent": cells(coherent), "whichpath": cells(whichpath),
               "max_cell_gap": gap}
    (out_dir / "fourhole.json").write_text(json.dumps(results, indent=2),
                                           encoding="utf-8")
    return results, ["fourhole.json"], None, None, None


def _run_sterngerlach(cfg, out_dir: Path, workers: int, cfg_hash: str):
    devices = _sg_devices(cfg)
    beam = _sg_input(cfg)
    seed, trials = _seed_of(cfg), _trials_of(cfg)
    analytic = beamline.run_sequence(devices, beam)
    dist, fraction, events = beamline.monte_carlo_sequence(devices, beam, trials, seed)
    log = out_dir / "events.jsonl"
    _write_log(log, _log_header("sterngerlach", cfg_hash, seed),
               (beamline.event_json(ev) for ev in events))
    results = {
        "analytic": {
            "probabilities": (None if analytic.probabilities is None
                              else {str(s): p for s, p in analytic.probabilities.items()}),
            "survival": analytic.survival,
            "extinguished": analytic.extinguished,
        },
        "monte_carlo": {
            "distribution": {str(s): p for s, p in dist.items()},
            "survivor_fraction": fraction,
            "trials": trials,
        },
    }
    return results, [log.name], seed, trials, None


def _run_phasespace(cfg, out_dir: Path, workers: int, cfg_hash: str):
    wf = _phasespace_setup(cfg)
    lifted = phasespace.lift(wf)
    back = phasespace.project_r(lifted)
    xi = phasespace.to_momentum(wf)
    ray = phasespace.project_p(lifted)
    roundtrip = float(np.max(np.abs(back.values - wf.values)))
    parseval = abs(xi.norm_sq() - wf.norm_sq())
    overlap = phasespace.ray_overlap(ray.values, xi.values)
    phasespace.write_grid_csv(wf.values, out_dir / "wavefunction.csv")
    phasespace.write_grid_csv(xi.values, out_dir / "momentum.csv")
    results = {"m": wf.m, "dr": wf.dr,
               "roundtrip_error": roundtrip,
               "parseval_gap": parseval,
               "momentum_ray_overlap": overlap}
    return results, ["wavefunction.csv", "momentum.csv"], None, None, None


_RUNNERS = {
    "chsh": _run_chsh,
    "epr": _run_epr,
    "quasiprob": _run_quasiprob,
    "twoslit": _run_twoslit,
    "fourhole": _run_fourhole,
    "sterngerlach": _run_sterngerlach,
    "phasespace": _run_phasespace,
}


def run_experiment(cfg: ExperimentConfig, out_dir, workers: int = 1) -> RunReport:
    validate_experiment(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg_hash = config_hash(cfg)
    t0 = time.perf_counter()
    results, outputs, seed, trials, mode = _RUNNERS[cfg.kind](cfg, out, workers, cfg_hash)
    report = RunReport(cfg.kind, cfg_hash, results, time.perf_counter() - t0,
                       tuple(outputs), seed, trials, mode,
                       config={k: dict(v) for k, v in cfg.sections.items()})
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    return report


# --- replay ---------------------------------------------------------------

def _read_log(path: Path) -> tuple[dict, list[dict]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValidationError(f"log {path} is empty")
    header = json.loads(lines[0])
    return header, [json.loads(line) for line in lines[1:]]


@dataclass(frozen=True)
class ReplayVerdict:
    ok: bool
    hash_ok: bool
    mismatches: tuple[str, ...]

    @property
    def verdict(self) -> str:
        if not self.hash_ok:
            return "HASH_MISMATCH"
        return "OK" if self.ok else "MISMATCH"


def replay_run(log_path, cfg: ExperimentConfig) -> ReplayVerdict:
    """Check a trial log against its config hash and stored report."""
    log = Path(log_path)
    header, records = _read_log(log)
    if header.get("config_hash") != config_hash(cfg):
        return ReplayVerdict(False, False, ("config_hash",))
    report = json.loads((log.parent / "report.json").read_text(encoding="utf-8"))
    results = report["results"]
    mismatches: list[str] = []

    kind = header.get("kind")
    if kind == "chsh":
        groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for rec in records:
            groups.setdefault((rec["a_setting"], rec["b_setting"]), []).append(
                (rec["a_out"], rec["b_out"]))
        for (ai, bi), outs in groups.items():
            arr = np.array(outs, dtype=np.int8)
            value = _correlator_stats(arr[:, 0], arr[:, 1])
            name = f"E({_SETTING_NAMES[ai]},{_SETTING_NAMES[bi]})"
            if results["correlators"].get(name) != value:
                mismatches.append(name)
        s = (results["correlators"]["E(a1,b1)"] + results["correlators"]["E(a1,b2)"]
             + results["correlators"]["E(a2,b1)"] - results["correlators"]["E(a2,b2)"])
        if not mismatches and results["S"] != s:
            mismatches.append("S")
    elif kind == "epr":
        arr = np.array([(r["a_out"], r["b_out"]) for r in records], dtype=np.int8)
        value = _correlator_stats(arr[:, 0], arr[:, 1])
        if results["E"] != value:
            mismatches.append("E")
        counts = {"++": int(np.sum((arr[:, 0] == 1) & (arr[:, 1] == 1))),
                  "+-": int(np.sum((arr[:, 0] == 1) & (arr[:, 1] == -1))),
                  "-+": int(np.sum((arr[:, 0] == -1) & (arr[:, 1] == 1))),
                  "--": int(np.sum((arr[:, 0] == -1) & (arr[:, 1] == -1)))}
        if results["counts"] != counts:
            mismatches.append("counts")
    elif kind == "sterngerlach":
        alive = [r for r in records if r["absorbed_at"] is None]
        fraction = len(alive) / len(records) if records else 0.0
        mc = results["monte_carlo"]
        if mc["survivor_fraction"] != fraction:
            mismatches.append("survivor_fraction")
        if alive:
            dist = {str(s): sum(1 for r in alive if r["outcome"] == s) / len(alive)
                    for s in (1, -1)}
            if mc["distribution"] != dist:
                mismatches.append("distribution")
    else:
        raise ValidationError(f"cannot replay log of kind {kind!r}")

    return ReplayVerdict(not mismatches, True, tuple(mismatches))
