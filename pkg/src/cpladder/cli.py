"""Command-line entry point: ``cpladder {ladder,verify,geometry,surface}``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import ConfigError, CPLadderError, ParseError
from .geometry import QUAD_TOL
from .ladder import build_ladder
from .reports import (
    DEFAULT_TOL,
    _write,
    export_mesh,
    parse_lambda_panel,
    parse_rungs,
    resolve_seed,
    run_geometry,
    run_verify,
    sample_points,
    to_json,
)
from .spectral import DEFAULT_LAMBDA_PANEL

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser():
    p = argparse.ArgumentParser(prog="cpladder", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--seed", required=True, help="seed JSON path or veronese:N")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        return sp

    sp = common(sub.add_parser("ladder", help="projector ladder at sample points"))
    sp.add_argument("--rungs", default="all")

    sp = common(sub.add_parser("verify", help="run the identity suite"))
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--lambda", dest="lam", default=None, help="comma list of complex values")

    sp = common(sub.add_parser("geometry", help="curvatures and global invariants"))
    sp.add_argument("--rungs", default="all")
    sp.add_argument("--quad-tol", type=float, default=QUAD_TOL)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = common(sub.add_parser("surface", help="export an ASCII PLY mesh of X_k"))
    sp.add_argument("--rungs", default="0", help="single rung")
    sp.add_argument("--grid", type=int, default=32)
    sp.add_argument("--project", default="0,1,2")
    return p


def _emit(text, out):
    _write(text, out)
    if out is None:
        sys.stdout.write(text)


def _ladder(args):
    seed = resolve_seed(args.seed)
    rungs = parse_rungs(args.rungs, seed.dim)
    pts = sample_points()
    ladder = build_ladder(seed, pts, 1)
    data = {
        "seed": seed.label,
        "N": seed.dim,
        "points": [complex(p) for p in pts],
        "projectors": {str(k): [np.asarray(m) for m in ladder[k].value] for k in rungs},
    }
    _emit(to_json(data) + "\n", args.out)
    return EXIT_OK


def _verify(args):
    panel = DEFAULT_LAMBDA_PANEL if args.lam is None else parse_lambda_panel(args.lam)
    report = run_verify(args.seed, args.tol, panel)
    _emit(report.to_json(), args.out)
    if any(c["check"] == "seed_load" for c in report.checks):
        return EXIT_CONFIG
    return EXIT_OK if report.passed else EXIT_FAIL


def _geometry(args):
    seed = resolve_seed(args.seed)
    report = run_geometry(seed, parse_rungs(args.rungs, seed.dim), args.quad_tol)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return EXIT_FAIL if report.errors else EXIT_OK


def _surface(args):
    if args.out is None:
        raise ConfigError("surface needs --out")
    seed = resolve_seed(args.seed)
    rungs = parse_rungs(args.rungs, seed.dim)
    if len(rungs) != 1:
        raise ConfigError("surface takes a single rung")
    try:
        proj = tuple(int(t) for t in args.project.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse projection {args.project!r}") from None
    mesh = export_mesh(seed, rungs[0], proj, args.grid, args.out)
    print(f"wrote {len(mesh.vertices)} vertices, {len(mesh.faces)} faces to {args.out}")
    return EXIT_OK


def main(argv=None):
    args = _parser().parse_args(argv)
    handler = {"ladder": _ladder, "verify": _verify, "geometry": _geometry, "surface": _surface}[args.verb]
    try:
        return handler(args)
    except (ParseError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CPLadderError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
