"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Optional, Sequence

from .capacity import capacity_series
from .errors import CalibrationError, DomainError, SimulationFault
from .moments import moment_expansion, moment_mf1_oracle, stationary_moment
from .hypergeometric import moment_via_4f3
from .montecarlo import SimConfig, calibrate_clock, simulate_capacity, simulate_moment
from .numerics import format_rational
from .partitions import ModelParams
from .verify import McSettings, run_suite

ROUTES = {"closed": moment_expansion, "oracle": moment_mf1_oracle, "4f3": moment_via_4f3}


def _floats(text: str) -> list[float]:
    try:
        return [math.inf if v.strip() in ("inf", "infinity") else float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True, help="matrix size")
    p.add_argument("--p", type=int, required=True, help="rank of the column projection")
    p.add_argument("--d", type=int, required=True, help="dimension of the unitary group")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi-moments", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="exact expansion of M_n(t)")
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--times", type=_floats, default=[], help="comma-separated evaluation times")
    p.add_argument("--route", choices=sorted(ROUTES), default="closed")
    _add_format(p)

    p = sub.add_parser("stationary", help="exact stationary moment M_n(inf)")
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("capacity", help="capacity from the truncated moment series")
    _add_params(p)
    when = p.add_mutually_exclusive_group(required=True)
    when.add_argument("--t", type=_floats, help="comma-separated times")
    when.add_argument("--stationary", action="store_true")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--terms", type=int, default=40)
    _add_format(p)

    p = sub.add_parser("mc", help="Monte Carlo estimate of a moment (or capacity with --rho)")
    _add_params(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--paths", type=int, default=2000)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clock", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("calibrate", help="fit the simulator clock against the slowest decay rate d")
    _add_params(p)
    p.add_argument("--paths", type=int, default=4000)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-grid", type=_floats, default=[0.05, 0.1, 0.15, 0.2])
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument(
        "--suite",
        choices=["identity", "oracle", "determinant", "hyp", "quadrature", "mc", "all"],
        default="all",
    )
    p.add_argument("--paths", type=int, default=20_000, help="Monte Carlo paths for the mc suite")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _params(args) -> ModelParams:
    return ModelParams(args.m, args.p, args.d)


def _emit_rows(header: Sequence[str], rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def cmd_moments(args, out) -> int:
    expansion = ROUTES[args.route](args.n, _params(args))
    values = [(t, expansion.evaluate(t)) for t in args.times]
    if args.format == "json":
        obj = expansion.to_json()
        obj["values"] = [{"t": t, "value": v} for t, v in values]
        json.dump(obj, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        if values:
            _emit_rows(["t", "value"], [(repr(t), repr(v)) for t, v in values], out)
        else:
            rows = [(0, expansion.stationary.numerator, expansion.stationary.denominator)]
            rows += [(r, c.numerator, c.denominator) for r, c in expansion.terms]
            _emit_rows(["rate", "coeff_num", "coeff_den"], rows, out)
    else:
        p = expansion.params
        print(f"M_{args.n}(t) for m={p.m}, p={p.p}, d={p.d} (r={p.r}, s={p.s})", file=out)
        print(f"stationary  {expansion.stationary}  ({float(expansion.stationary):.12g})", file=out)
        print(f"{'rate':>6}  coefficient", file=out)
        for r, c in expansion.terms:
            print(f"{r:>6}  {c}  ({float(c):.12g})", file=out)
        for t, v in values:
            print(f"t={t:g}  M={v:.15g}", file=out)
    return 0


def cmd_stationary(args, out) -> int:
    params = _params(args)
    value = stationary_moment(args.n, params)
    if args.format == "json":
        json.dump({"params": params.to_json(), "n": args.n, "stationary": format_rational(value), "value": float(value)}, out)
        out.write("\n")
    elif args.format == "csv":
        _emit_rows(["n", "num", "den", "value"], [(args.n, value.numerator, value.denominator, repr(float(value)))], out)
    else:
        print(f"M_{args.n}(inf) = {value}  ({float(value):.15g})", file=out)
    return 0


def cmd_capacity(args, out) -> int:
    params = _params(args)
    times = [math.inf] if args.stationary else args.t
    results = [capacity_series(params, t, args.rho, args.terms) for t in times]
    if args.format == "json":
        payload = [r.to_json() for r in results]
        json.dump(payload[0] if len(payload) == 1 else payload, out)
        out.write("\n")
    elif args.format == "csv":
        _emit_rows(["t", "rho", "value", "bound"], [tuple(map(repr, r.csv_row())) for r in results], out)
    else:
        for r in results:
            note = "" if r.bound_convergent else "  (rho = 1: harmonic tail bound)"
            print(f"t={r.t:g}  rho={r.rho:g}  N={r.truncation_order}  C={r.value:.12g} nats  |tail|<={r.truncation_bound:.3g}{note}", file=out)
    return 0


def cmd_mc(args, out) -> int:
    params = _params(args)
    config = SimConfig(params, t=args.t, dt=args.dt, paths=args.paths, seed=args.seed, clock=args.clock)
    if args.rho is not None:
        est = simulate_capacity(config, args.rho, n_jobs=args.jobs)
    else:
        est = simulate_moment(args.n, config, n_jobs=args.jobs)
    obj = est.to_json(clock=args.clock, seed=args.seed)
    if args.format == "json":
        json.dump(obj, out)
        out.write("\n")
    elif args.format == "csv":
        _emit_rows(list(obj), [tuple(obj.values())], out)
    else:
        what = f"capacity(rho={args.rho})" if args.rho is not None else f"M_{args.n}"
        if args.rho is None:
            exact = moment_expansion(args.n, params).evaluate(args.t)
        elif args.rho < 1:
            exact = capacity_series(params, args.t, args.rho, 40).value
        else:
            exact = None
        line = f"{what} at t={args.t:g}: {est.mean:.6f} +/- {est.stderr:.6f} ({est.paths} paths, dt={est.dt:g})"
        if exact is not None:
            line += f"; exact {exact:.6f}"
        print(line, file=out)
    return 0


def cmd_calibrate(args, out) -> int:
    params = _params(args)
    clock = calibrate_clock(params, args.t_grid, args.paths, args.dt, args.seed, n_jobs=args.jobs)
    obj = {"clock": clock, "paths": args.paths, "dt": args.dt, "seed": args.seed, "t_grid": args.t_grid}
    if args.format == "json":
        json.dump(obj, out)
        out.write("\n")
    elif args.format == "csv":
        _emit_rows(["clock", "paths", "dt", "seed"], [(repr(clock), args.paths, args.dt, args.seed)], out)
    else:
        print(f"clock = {clock:.6f}", file=out)
    return 0


def cmd_verify(args, out) -> int:
    settings = McSettings(paths=args.paths, calib_paths=args.paths, n_jobs=args.jobs)
    results = run_suite(args.suite, settings)
    for r in results:
        print(r.line(), file=out)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "moments": cmd_moments,
    "stationary": cmd_stationary,
    "capacity": cmd_capacity,
    "mc": cmd_mc,
    "calibrate": cmd_calibrate,
    "verify": cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (DomainError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationFault as exc:
        print(f"simulation fault: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
