"""Command-line front end: reference spectra, solves, sweeps, validation.

Subcommands
-----------
reference    exact Bessel-zero spectra for disks, balls, and sectors
solve        one discrete solve, with reference values and errors when known
convergence  error-versus-degree sweeps as CSV (with fitted slope rows)
validate     run the oracle suites; nonzero exit on any failure

CSV output is deterministic for a fixed configuration and seed; wall time is
reported on stderr and in JSON metadata only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .ball import BallProblem, assemble_mode, solve_ball
from .eiglin import NotPositiveDefiniteError
from .mortar import build_mesh, solve_msem
from .refvalues import LSHAPE_BENCHMARK, SQUARE_BENCHMARK, msem_reference
from .sector import SectorProblem, solve_sector
from .specfun import reference_spectrum
from .validate import MODULE_SUITES, run_all

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return "" if x is None else str(x)


def _write_rows(args, header, rows, meta):
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.format == "csv":
            out.write(",".join(header) + "\n")
            for row in rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
        else:
            payload = {
                "meta": meta,
                "rows": [dict(zip(header, row)) for row in rows],
            }
            json.dump(payload, out, indent=2, default=float)
            out.write("\n")
    finally:
        if args.out is not None:
            out.close()


def _meta(args, t0):
    return {
        "command": args.command,
        "config": {k: v for k, v in vars(args).items() if k not in ("func",)},
        "version": __version__,
        "wall_time_s": time.perf_counter() - t0,
    }


def _parse_geometry(args):
    g = args.geometry
    if g == "disk":
        return ("ball", 2)
    if g == "ball3":
        return ("ball", 3)
    if g.startswith("balld:"):
        return ("ball", int(g.split(":", 1)[1]))
    if g == "sector":
        return ("sector", args.gamma)
    if g in ("square", "lshape"):
        return (g,)
    raise ValueError(f"unknown geometry {args.geometry!r}")


def _grouped_rows(values, tags):
    """Group repeated eigenvalues: (first_index, value, mode, multiplicity)."""
    rows = []
    i = 0
    while i < len(values):
        j = i + 1
        while j < len(values) and values[j] - values[i] <= 1e-9 * (1 + abs(values[i])):
            j += 1
        mode = tags[i][0] if tags is not None else None
        rows.append((i + 1, float(values[i]), mode, j - i))
        i = j
    return rows


def cmd_reference(args):
    geom = _parse_geometry(args)
    if geom[0] not in ("ball", "sector"):
        raise ValueError("reference spectra exist for disk/ball/sector geometries only")
    spec = reference_spectrum(geom, args.c, args.count)
    rows = [
        (idx, lam, mode, mult)
        for idx, lam, mode, mult in _grouped_rows(spec.values, spec.tags)
    ]
    return ["index", "lambda", "mode_n", "multiplicity"], rows


def _msem_mesh_from_args(args, domain):
    base = SQUARE_BENCHMARK if domain == "square" else LSHAPE_BENCHMARK
    R = args.R if args.R is not None else base["R"]
    if args.quad_degrees:
        vals = [int(v) for v in args.quad_degrees.split(",")]
        if len(vals) == 4:
            disk_k, disk_n, K1, N1 = vals
            quads = [(K1, N1)] * 4
        elif len(vals) == 10:
            disk_k, disk_n = vals[0], vals[1]
            quads = [(vals[2 * i], vals[2 * i + 1]) for i in range(1, 5)]
        else:
            raise ValueError("--quad-degrees takes 4 or 10 comma-separated integers")
    else:
        disk_k, disk_n = base["disk_k"], base["disk_n"]
        quads = base["quad_degrees"]
    return build_mesh(domain, R, args.c, disk_k, disk_n, quads)


def _solve_dispatch(args):
    """Run one solve; returns (values, tags, dof, reference list or None)."""
    geom = _parse_geometry(args)
    if geom[0] == "ball":
        d = geom[1]
        if args.method == "msem":
            raise ValueError("msem applies to square/lshape geometries")
        problem = BallProblem(d, args.c, args.K, args.N, args.method)
        spec = solve_ball(problem, args.count)
        dof = 0
        for n in range(args.N + 1):
            mode = assemble_mode(args.method, n, args.c, d, args.K)
            dof += mode.A.order * mode.multiplicity
        ref = reference_spectrum(geom, args.c, args.count).values.tolist()
        return spec.values, spec.tags, dof, ref
    if geom[0] == "sector":
        if args.method not in ("I", "II"):
            raise ValueError("sector methods are 'I' and 'II'")
        problem = SectorProblem(args.gamma, args.c, args.K, args.N, args.method)
        spec = solve_sector(problem, args.count)
        ref = reference_spectrum(geom, args.c, args.count).values.tolist()
        return spec.values, spec.tags, args.K * args.N, ref
    domain = geom[0]
    if args.method != "msem":
        raise ValueError(f"geometry {domain} requires --method msem")
    mesh = _msem_mesh_from_args(args, domain)
    res = solve_msem(mesh, args.count)
    ref = msem_reference(domain, args.c, args.count)
    return res.spectrum.values, res.spectrum.tags, res.dof, ref


def cmd_solve(args):
    values, tags, dof, ref = _solve_dispatch(args)
    header = [
        "index", "lambda", "lambda_ref", "abs_error", "mode_n", "multiplicity", "dof",
    ]
    rows = []
    for idx, lam, mode, mult in _grouped_rows(values, tags):
        lam_ref = ref[idx - 1] if ref is not None and len(ref) >= idx else None
        err = abs(lam - lam_ref) if lam_ref is not None else None
        rows.append((idx, lam, lam_ref, err, mode, mult, dof))
    return header, rows


def _parse_sweep(text):
    try:
        name, rng = text.split("=")
        a, b, step = (int(v) for v in rng.split(":"))
    except ValueError:
        raise ValueError("--sweep must look like K=4:16:2") from None
    if step <= 0 or b < a:
        raise ValueError("--sweep bounds must satisfy a <= b with positive step")
    return name, list(range(a, b + 1, step))


def _fit_slope(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        return math.nan
    return float(np.polyfit(xs, ys, 1)[0])


ERROR_FLOOR = 1e-13


def cmd_convergence(args):
    geom = _parse_geometry(args)
    name, sweep = _parse_sweep(args.sweep)
    if geom[0] in ("square", "lshape"):
        return _convergence_msem(args, geom[0], sweep)
    if name != "K":
        raise ValueError("ball/sector sweeps vary K (use --sweep K=a:b:step)")
    ref = reference_spectrum(geom, args.c, args.count)
    header = ["K", "eig_index", "n", "abs_error"]
    rows = []
    per_mode = {}
    for K in sweep:
        if geom[0] == "ball":
            spec = solve_ball(BallProblem(geom[1], args.c, K, args.N, args.method), args.count)
        else:
            spec = solve_sector(SectorProblem(args.gamma, args.c, K, args.N, args.method), args.count)
        for i, lam in enumerate(spec.values):
            err = abs(lam - ref.values[i])
            n_mode = ref.tags[i][0]
            rows.append((K, i + 1, n_mode, err))
            if err > ERROR_FLOOR:
                per_mode.setdefault((i + 1, n_mode), []).append((K, err))
    loglog = args.method in ("classic", "poly")
    for (idx, n_mode), pts in sorted(per_mode.items()):
        xs = [math.log10(K) if loglog else K for K, _ in pts]
        ys = [math.log10(err) for _, err in pts]
        rows.append(("slope", idx, n_mode, _fit_slope(xs, ys)))
    return header, rows


def _convergence_msem(args, domain, sweep):
    base = SQUARE_BENCHMARK if domain == "square" else LSHAPE_BENCHMARK
    R = args.R if args.R is not None else base["R"]
    ref = msem_reference(domain, args.c, args.count)
    if ref is None:
        raise ValueError(f"no reference spectrum tabulated for {domain} with c={args.c}")
    header = ["sqrtDoF", "eig_index", "abs_error"]
    rows = []
    for K0 in sweep:
        t = K0 / base["disk_k"]
        disk_n = max(2, round(base["disk_n"] * t))
        quads = [
            (max(3, round(K * t)), max(3, round(N * t)))
            for K, N in base["quad_degrees"]
        ]
        mesh = build_mesh(domain, R, args.c, K0, disk_n, quads)
        res = solve_msem(mesh, args.count)
        for i, lam in enumerate(res.spectrum.values):
            rows.append((math.sqrt(res.dof), i + 1, abs(lam - ref[i])))
    return header, rows


def cmd_validate(args):
    modules = None if args.module is None else [args.module]
    results = run_all(seed=args.seed, modules=modules)
    header = ["check", "passed", "detail"]
    rows = [(r.name, r.passed, r.detail) for r in results]
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return header, rows, ok


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schrodeig",
        description="Eigenvalues of -Lap u + (c^2/|x|^2) u on balls, sectors, and polygons",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--geometry", required=True,
                       help="disk | ball3 | balld:<d> | sector | square | lshape")
        p.add_argument("--c", type=float, default=0.0, help="potential strength")
        p.add_argument("--gamma", type=float, default=0.5,
                       help="sector angle parameter (opening pi/gamma)")
        p.add_argument("--R", type=float, default=None, help="mortar interface radius")
        p.add_argument("--K", type=int, default=16, help="radial degree")
        p.add_argument("--N", type=int, default=3, help="angular degree")
        p.add_argument("--quad-degrees", default=None,
                       help="mortar degrees: k0,n0,k1,n1 or all five pairs")
        p.add_argument("--count", type=int, default=5, help="number of eigenvalues")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p_ref = sub.add_parser("reference", help="exact Bessel-zero spectra")
    common(p_ref)

    p_solve = sub.add_parser("solve", help="solve one discrete eigenproblem")
    common(p_solve)
    p_solve.add_argument("--method", default="II",
                         choices=("I", "II", "classic", "poly", "msem"))

    p_conv = sub.add_parser("convergence", help="error sweeps versus degree")
    common(p_conv)
    p_conv.add_argument("--method", default="II",
                        choices=("I", "II", "classic", "poly", "msem"))
    p_conv.add_argument("--sweep", required=True, help="K=a:b:step")

    p_val = sub.add_parser("validate", help="run the oracle suites")
    p_val.add_argument("--module", default=None, choices=sorted(MODULE_SUITES))
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--format", choices=("csv", "json"), default="csv")
    p_val.add_argument("--out", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "reference":
            header, rows = cmd_reference(args)
            ok = True
        elif args.command == "solve":
            header, rows = cmd_solve(args)
            ok = True
        elif args.command == "convergence":
            header, rows = cmd_convergence(args)
            ok = True
        else:
            header, rows, ok = cmd_validate(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except (NotPositiveDefiniteError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_rows(args, header, rows, _meta(args, t0))
    print(f"done in {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
