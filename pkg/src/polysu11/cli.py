"""Command-line front end: ``polysu11 {verify,weights,states,spectrum}``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
argument or validation errors.  Outputs are deterministic: fixed
tolerances, a fixed sampling seed and no timestamps.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraError, AlgebraSpec
from .oscillator import OscillatorParams, cubic_algebra_spec, grid_spectrum, spectrum_general, validity
from .special import ConvergenceError
from .states import build_state
from .unity import weight_table
from .verify import default_tol, run_suite, weight_grid_checks

log = logging.getLogger("polysu11")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SPECTRUM_TOL = 1e-3


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complex(text: str) -> complex:
    parts = _floats(text)
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}")
    return complex(parts[0], parts[1])


def _fmt(x: float) -> str:
    return repr(float(x))


def _spec_from_args(args) -> AlgebraSpec:
    if args.alpha is None or args.k is None:
        raise UsageError("--alpha and --k are required")
    p = args.p if args.p is not None else len(args.alpha)
    return AlgebraSpec(p, tuple(args.alpha), args.k)


def _open_out(path):
    if path is None or str(path) == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def cmd_verify(args) -> int:
    spec = _spec_from_args(args)
    if args.gamma is not None:
        params = OscillatorParams.g_zero(args.gamma)
        if not validity(params).cubic_ok:
            raise UsageError(f"gamma must lie in (0, 1/2), got {args.gamma}")
    report = run_suite(spec, args.gamma, trunc=args.trunc, tol=args.tol,
                       progress=lambda s: log.info("running %s checks", s))
    text = report.to_json()
    if args.json:
        out, close = _open_out(args.json)
        out.write(text)
        if close:
            out.close()
    for c in report.checks:
        status = "skip" if c.passed is None else ("PASS" if c.passed else "FAIL")
        value = "-" if c.value is None else f"{c.value:.3e}"
        print(f"[{status}] c{c.criterion:<2d} {c.name:<34s} {value:>10s} <= {c.tolerance:.0e}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_weights(args) -> int:
    if args.steps < 2 or args.tmax <= 1e-3:
        raise UsageError("need --steps >= 2 and --tmax > 1e-3")
    t_grid = np.linspace(1e-3, args.tmax, args.steps)
    rows = weight_table(args.family, args.gamma, t_grid)
    out, close = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["gamma", "t", "rho"])
    for gamma, t, rho in rows:
        writer.writerow([_fmt(gamma), _fmt(t), _fmt(rho)])
    if close:
        out.close()
    if args.figure:
        from .plotting import plot_weight_table

        plot_weight_table(rows, args.family, args.figure)
    negativity, growth = weight_grid_checks(rows)
    if negativity > 0:
        log.error("weight function is negative somewhere on the grid (min %.3e)", -negativity)
        return EXIT_FAIL
    if growth > 0:
        log.error("weight function grows over the last quarter of the grid")
        return EXIT_FAIL
    return EXIT_OK


def cmd_states(args) -> int:
    if args.gamma is not None:
        spec = cubic_algebra_spec(OscillatorParams.g_zero(args.gamma))
    else:
        spec = _spec_from_args(args)
    tol = default_tol() if args.tol is None else args.tol
    state = build_state(spec, args.family, args.zeta, tol)
    out, close = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "re", "im", "abs2"])
    for n, c in enumerate(state.coeffs):
        writer.writerow([n, _fmt(c.real), _fmt(c.imag), _fmt(abs(c) ** 2)])
    if close:
        out.close()
    return EXIT_OK


def cmd_spectrum(args) -> int:
    eps = -args.gamma - 0.5 if args.epsilon is None else args.epsilon
    params = OscillatorParams(args.gamma, eps)
    if not validity(params).convergent:
        raise UsageError(f"eps + 2 eps gamma + 2 must be positive (gamma={args.gamma}, eps={eps})")
    n = np.arange(args.levels)
    analytic = spectrum_general(params, n)
    plus = grid_spectrum(params, "plus", args.r_max, args.points, args.levels)
    minus = grid_spectrum(params, "minus", args.r_max, args.points, args.levels)
    levels = [{"n": int(i), "analytic": float(a), "grid_plus": gp, "grid_minus": gm}
              for i, a, gp, gm in zip(n, analytic, plus, minus)]
    payload = {"gamma": args.gamma, "epsilon": eps, "levels": levels}
    out, close = _open_out(args.out)
    out.write(json.dumps(payload, indent=2) + "\n")
    if close:
        out.close()
    if args.figure:
        from .plotting import plot_spectrum

        plot_spectrum(levels, args.gamma, args.figure)
    worst = max(max(abs(lv["grid_plus"] - lv["analytic"]), abs(lv["grid_minus"] - lv["analytic"])) for lv in levels)
    if worst > SPECTRUM_TOL:
        log.error("grid levels deviate from the analytic spectrum by %.3e", worst)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polysu11", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_args(p, required):
        p.add_argument("--p", type=int, help="degree of the structure function (defaults to len(alpha))")
        p.add_argument("--alpha", type=_floats, required=required, help="coefficients alpha_1..alpha_p, comma separated")
        p.add_argument("--k", type=float, required=required, help="lowest-weight index")

    v = sub.add_parser("verify", help="run the invariant suite and write a JSON report")
    spec_args(v, True)
    v.add_argument("--gamma", type=float, help="also run the oscillator checks for this gamma in (0, 1/2)")
    v.add_argument("--trunc", type=int, default=64, help="matrix truncation order N (default 64)")
    v.add_argument("--tol", type=float, help="coherent-state truncation tolerance (default 1e-14 or POLYSU11_TOL)")
    v.add_argument("--json", help="report path ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("weights", help="tabulate the cubic-oscillator weight functions")
    w.add_argument("--family", choices=["bg", "p"], required=True)
    w.add_argument("--gamma", type=_floats, required=True, help="comma-separated gamma values in (0, 1/2)")
    w.add_argument("--tmax", type=float, default=20.0)
    w.add_argument("--steps", type=int, default=400)
    w.add_argument("--out", help="CSV path ('-' or omitted for stdout)")
    w.add_argument("--figure", help="optional figure path (.png, .pdf or .svg)")
    w.set_defaults(func=cmd_weights)

    s = sub.add_parser("states", help="dump coherent-state coefficients as CSV")
    s.add_argument("--family", choices=["bg", "p"], required=True)
    s.add_argument("--zeta", type=_complex, required=True, help="re,im (use --zeta=-1,0 for negative parts)")
    spec_args(s, False)
    s.add_argument("--gamma", type=float, help="use the cubic-oscillator algebra for this gamma")
    s.add_argument("--tol", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_states)

    sp = sub.add_parser("spectrum", help="analytic and grid spectra of both partner Hamiltonians")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--epsilon", type=float, help="defaults to -gamma - 1/2 (g = 0)")
    sp.add_argument("--levels", type=int, default=6)
    sp.add_argument("--r-max", type=float, default=12.0)
    sp.add_argument("--points", type=int, default=4000)
    sp.add_argument("--out")
    sp.add_argument("--figure")
    sp.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, AlgebraError, ValueError) as exc:
        print(f"polysu11 {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"polysu11 {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
