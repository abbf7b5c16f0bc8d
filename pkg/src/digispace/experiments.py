"""Experiment configuration, run diagnostics and the two preset experiments
(Moebius strip and projective plane)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import catalog, io
from .parabolic import (
    CoefficientMatrix,
    Field,
    Trajectory,
    check_conservation,
    check_stability,
    final_field,
    is_irreducible,
    is_primitive,
    is_symmetric,
    lazy_uniform,
    run,
    spectral_solve,
    validate,
    InvalidCoefficients,
)
from .space import DigitalSpace

EXTENDED_STEPS = 10**4


@dataclass
class ExperimentConfig:
    space: str
    coeffs: dict | str
    init: dict[int, float] | str
    steps: int
    out: str | None = None
    conservation: bool = True
    stability: bool = True
    stationary: bool = True
    spectral: bool = True
    seed_order: str = "lex"
    highlight: tuple[int, ...] = ()
    extended_steps: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.init, dict):
            d["init"] = {str(p): v for p, v in sorted(self.init.items())}
        d["highlight"] = list(self.highlight)
        return d

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        if isinstance(doc.get("init"), dict):
            doc["init"] = {int(p): float(v) for p, v in doc["init"].items()}
        if "highlight" in doc:
            doc["highlight"] = tuple(doc["highlight"])
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        return cls(**doc)


PRESETS = {
    "moebius": ExperimentConfig(
        space="moebius12", coeffs={"scheme": "lazy_uniform", "w": 0.03},
        init={1: 12.0}, steps=100, highlight=(3, 10), extended_steps=EXTENDED_STEPS,
    ),
    "projective": ExperimentConfig(
        space="projective-plane-11", coeffs={"scheme": "lazy_uniform", "w": 0.1},
        init={1: 11.0}, steps=30, highlight=(3, 10), extended_steps=EXTENDED_STEPS,
    ),
}


def resolve_space(ref: str, seed_order: str = "lex") -> DigitalSpace:
    """A space file path, or a catalog name."""
    p = Path(ref)
    if p.exists():
        return io.load_space(p)
    if ref == "projective-plane-11":
        return catalog.find_projective_plane_11(catalog.SearchSpec(order=seed_order)).renamed(ref)
    return catalog.build(ref)


def resolve_coefficients(G: DigitalSpace, ref: dict | str) -> CoefficientMatrix:
    doc = io.load_coefficients_doc(ref) if isinstance(ref, str) else ref
    if doc.get("scheme") == "lazy_uniform":
        return lazy_uniform(G, float(doc["w"]))
    if "entries" in doc:
        return CoefficientMatrix(G, {(p, k): v for p, k, v in doc["entries"]})
    raise InvalidCoefficients(f"cannot resolve coefficients from {doc!r}")


def resolve_initial(G: DigitalSpace, ref) -> Field:
    values = io.load_initial(ref) if isinstance(ref, str) else ref
    return Field.from_map(G, values)


@dataclass
class RunReport:
    trajectory: str | None
    steps: int
    initial_total: float
    max_conservation_drift: float | None = None
    conserved: bool | None = None
    stable: bool | None = None
    first_norm_violation: int | None = None
    stationary_distance: float | None = None
    spectral_max_deviation: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def diagnose(C: CoefficientMatrix, traj: Trajectory, cfg: ExperimentConfig,
             trajectory_path: str | None = None) -> RunReport:
    """Metrics that depend only on the trajectory values and ``C``."""
    f0 = traj.field(0)
    rep = RunReport(trajectory_path, len(traj) - 1, f0.total)
    if cfg.conservation:
        cons = check_conservation(traj)
        rep.conserved, rep.max_conservation_drift = cons.ok, cons.max_drift
    if cfg.stability:
        st = check_stability(traj)
        rep.stable, rep.first_norm_violation = st.ok, st.first_violation
    if cfg.stationary and is_irreducible(C) and is_primitive(C):
        limit = final_field(C, f0)
        rep.stationary_distance = float(np.abs(traj.values[-1] - limit.values).max())
    if cfg.spectral and is_symmetric(C):
        sol = spectral_solve(C, f0)
        rep.spectral_max_deviation = float(max(
            np.abs(sol.evaluate(t).values - traj.values[t]).max() for t in range(len(traj))
        ))
    return rep


def load_trajectory(path) -> Trajectory:
    points, _, values = io.read_trajectory_csv(path)
    return Trajectory(tuple(points), values)


def shape_checks(traj: Trajectory, source: int, watch, horizon: int = 10) -> dict:
    """Qualitative profile over ``t = 0..horizon``: the source point decays
    strictly; each watched point never decreases and rises strictly once it
    has become positive."""
    out = {}
    s = traj.series(source)[: horizon + 1]
    out[f"f{source}_strictly_decreasing"] = bool(np.all(np.diff(s) < 0))
    for p in watch:
        x = traj.series(p)[: horizon + 1]
        start = int(np.argmax(x > 0)) if np.any(x > 0) else len(x)
        ok = x[0] == 0 and np.all(np.diff(x) >= 0) and np.all(np.diff(x[start:]) > 0)
        out[f"f{p}_rising_from_zero"] = bool(ok and start < len(x))
    return out


def solve(cfg: ExperimentConfig) -> tuple[RunReport, Trajectory, CoefficientMatrix]:
    G = resolve_space(cfg.space, cfg.seed_order)
    C = resolve_coefficients(G, cfg.coeffs)
    v = validate(C)
    if not v.ok:
        raise InvalidCoefficients("; ".join(v.messages()))
    f0 = resolve_initial(G, cfg.init)
    traj = run(C, f0, T=cfg.steps)
    path = None
    if cfg.out:
        path = str(io.write_trajectory_csv(traj.points, traj.times, traj.values, cfg.out))
    return diagnose(C, traj, cfg, path), traj, C


def run_experiment(name: str, outdir, seed_order: str = "lex", **overrides) -> RunReport:
    """Run a preset and write ``<name>_trajectory.csv``, one two-column file
    per highlighted point and ``<name>_report.json`` into ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = replace(PRESETS[name], seed_order=seed_order,
                  out=str(outdir / f"{name}_trajectory.csv"), **overrides)
    report, traj, C = solve(cfg)
    for p in cfg.highlight:
        io.write_series(traj.times, traj.series(p), outdir / f"{name}_point{p}.dat")
    src = max(cfg.init, key=lambda p: cfg.init[p])
    report.extra["shape"] = shape_checks(traj, src, cfg.highlight)
    if cfg.extended_steps:
        long = run(C, traj.field(0), T=cfg.extended_steps)
        limit = final_field(C, traj.field(0))
        report.extra["extended_steps"] = cfg.extended_steps
        report.extra["extended_stationary_distance"] = float(
            np.abs(long.values[-1] - limit.values).max())
    io.write_json(report.to_dict(), outdir / f"{name}_report.json")
    return report


def config_json(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)
