"""Command-line interface.

Exit status: 0 success or passing verdict, 1 failing verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import catalog, io
from .experiments import (
    PRESETS,
    ExperimentConfig,
    config_json,
    resolve_coefficients,
    resolve_initial,
    resolve_space,
    run_experiment,
    solve,
)
from .parabolic import (
    InvalidCoefficients,
    UnsupportedSpectralCase,
    run,
    spectral_solve,
    validate,
)
from .space import SpaceError
from .topology import surface_report

OK, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _emit(doc, out):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.catalog():
            print(name)
        return OK
    if args.action == "selftest":
        rep = catalog.catalog_selftest()
        for r in rep.results:
            print(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']} {r['mismatches'] or ''}".rstrip())
        return OK if rep.ok else FAIL
    if not args.name:
        raise InputError("catalog build needs a space name")
    if args.name == "projective-plane-11":
        G = catalog.find_projective_plane_11(catalog.SearchSpec(order=args.seed_order))
        G = G.renamed(args.name)
    else:
        try:
            G = catalog.build(args.name)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    if args.out:
        io.save_space(G, args.out)
        print(f"wrote {args.name}: {len(G)} points, {G.n_edges} edges -> {args.out}")
    else:
        sys.stdout.write(io.dumps_space(G))
    return OK


def cmd_validate(args) -> int:
    G = resolve_space(args.space, args.seed_order)
    rep = surface_report(G, args.dim, allow_boundary=args.allow_boundary)
    _emit(rep.to_dict(), args.out)
    return OK if rep.is_surface else FAIL


def _solve_config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text())
    flags = {"space": args.space, "coeffs": args.coeffs, "init": args.init,
             "steps": args.steps, "out": args.out}
    for k, v in flags.items():
        if v is not None:
            base[k] = v
    if args.seed_order:
        base["seed_order"] = args.seed_order
    missing = [k for k in ("space", "coeffs", "init", "steps") if k not in base]
    if missing:
        raise InputError(f"missing settings: {', '.join('--' + m for m in missing)}")
    return ExperimentConfig.from_dict(base)


def cmd_solve(args) -> int:
    cfg = _solve_config(args)
    if args.dump_config:
        print(config_json(cfg))
        return OK
    report, _, _ = solve(cfg)
    _emit(report.to_dict(), args.report)
    good = report.conserved is not False and report.stable is not False
    return OK if good else FAIL


def cmd_experiment(args) -> int:
    cfg = replace(PRESETS[args.name], seed_order=args.seed_order)
    if args.dump_config:
        print(config_json(cfg))
        return OK
    report = run_experiment(args.name, args.out, seed_order=args.seed_order)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return OK if report.conserved and report.stable else FAIL


def parse_times(spec: str) -> list[int]:
    """``"0,5,10"`` or ranges ``"0:100"`` (inclusive), mixed freely."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b = part.split(":")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    if any(t < 0 for t in out):
        raise InputError("times must be >= 0")
    return out


def cmd_spectral(args) -> int:
    G = resolve_space(args.space, args.seed_order)
    C = resolve_coefficients(G, args.coeffs)
    f0 = resolve_initial(G, args.init)
    times = parse_times(args.times)
    sol = spectral_solve(C, f0)
    values = [sol.evaluate(t).values for t in times]
    if args.out:
        io.write_trajectory_csv(C.points, times, values, args.out)
    doc = {"times": len(times), "eigenvalues": [float(x) for x in sol.eigenvalues]}
    if args.compare:
        traj = run(C, f0, T=max(times, default=0))
        doc["max_deviation"] = float(max(
            (np.abs(v - traj.values[t]).max() for t, v in zip(times, values)), default=0.0))
    print(json.dumps(doc, indent=2, sort_keys=True))
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="digispace", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list, build or self-test catalog spaces")
    p.add_argument("action", choices=["list", "build", "selftest"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.add_argument("--seed-order", default="lex", choices=["lex", "revlex"])
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("validate", help="classify a space as a digital n-surface")
    p.add_argument("space", help="space file or catalog name")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--allow-boundary", action="store_true")
    p.add_argument("--out", help="write the surface report here")
    p.add_argument("--seed-order", default="lex", choices=["lex", "revlex"])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="iterate the parabolic equation")
    p.add_argument("--config", help="JSON config; flags override its fields")
    p.add_argument("--space")
    p.add_argument("--coeffs")
    p.add_argument("--init")
    p.add_argument("--steps", type=int)
    p.add_argument("--out", help="trajectory CSV")
    p.add_argument("--report", help="write the run report here")
    p.add_argument("--seed-order", choices=["lex", "revlex"])
    p.add_argument("--dump-config", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="run a preset experiment")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed-order", default="lex", choices=["lex", "revlex"])
    p.add_argument("--dump-config", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("spectral", help="closed-form solution for symmetric C")
    p.add_argument("--space", required=True)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--times", required=True, help="e.g. 0,1,2 or 0:100")
    p.add_argument("--out", help="CSV of closed-form values")
    p.add_argument("--compare", action="store_true")
    p.add_argument("--seed-order", default="lex", choices=["lex", "revlex"])
    p.set_defaults(func=cmd_spectral)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InputError, io.FormatError, SpaceError, InvalidCoefficients,
            UnsupportedSpectralCase, catalog.InconsistentSearchSpec,
            FileNotFoundError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
