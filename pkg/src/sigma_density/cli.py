"""Command-line surface.

Every operation is exposed as a subcommand emitting a machine-readable
envelope: the command, the echoed parameters, the result payload, a flat
index of every interval value as a [lo, hi] pair, and provenance (tool
version, prime-table limit, tolerances).  JSON is the default format;
floats serialize with shortest round-trip representation, which is exact
to the double.  TSV flattens the same numbers to key/value lines, except
for the census where it emits one range value per line.

Exit codes: 0 success, 1 domain/precision error, 2 verification-suite
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__, density, explorer, primes, solver
from .brackets import Bracket
from .errors import SigmaDensityError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _convert(obj, path, brackets):
    """Recursively turn results into JSON-ready values, indexing brackets."""
    if isinstance(obj, Bracket):
        brackets[path] = [obj.lo, obj.hi]
        return [obj.lo, obj.hi]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _convert(getattr(obj, f.name), f"{path}.{f.name}" if path else f.name, brackets)
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): _convert(v, f"{path}.{k}" if path else str(k), brackets) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (list, tuple)):
        return [_convert(v, f"{path}[{i}]", brackets) for i, v in enumerate(obj)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _envelope(command, parameters, result, prime_limit, tolerances):
    brackets = {}
    payload = _convert(result, "", brackets)
    return {
        "command": command,
        "parameters": parameters,
        "result": payload,
        "brackets": brackets,
        "provenance": {
            "version": __version__,
            "prime_limit": prime_limit,
            "tolerances": tolerances,
        },
    }


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _emit(envelope, args):
    if args.format == "json":
        text = json.dumps(envelope, indent=2, allow_nan=False) + "\n"
    else:
        lines = [f"{key}\t{value}" for key, value in _flatten(envelope)]
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_census_tsv(census, args):
    lines = [f"{float(v)!r}" for v in census.values]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="sigma-density", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    parser.add_argument("--prime-limit", type=int, default=primes.DEFAULT_LIMIT)
    parser.add_argument("--out", default=None, help="write output to a file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta", help="density threshold for a given k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=solver.DEFAULT_EPS)

    p = sub.add_parser("eta-limit", help="the k -> infinity threshold")
    p.add_argument("--eps", type=float, default=solver.LIMIT_EPS)

    p = sub.add_parser("thresholds", help="per-m thresholds and the selector for k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=solver.DEFAULT_EPS)

    p = sub.add_parser("table", help="thresholds and constants for k = 1..kmax")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--eps", type=float, default=solver.DEFAULT_EPS)

    p = sub.add_parser("density", help="density verdict for (k, r)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eps", type=float, default=density.DEFAULT_EPS)

    p = sub.add_parser("approximate", help="greedy approximation of a log-range target")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("census", help="empirical range census up to a bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--resolution", type=float, default=None)

    p = sub.add_parser("verify", help="verification suites")
    p.add_argument(
        "--suite",
        choices=("gap-lemma", "inequalities", "monotonicity", "all"),
        required=True,
    )
    p.add_argument("--grid-step", type=float, default=1e-3)
    return parser


def _suite_gap_lemma(table):
    report = primes.verify_gap_lemma(table)
    return {
        "suite": "gap-lemma",
        "passed": report.passed,
        "report": report,
        "margin": 2**0.5 - report.max_ratio,
    }


def _suite_inequalities(grid_step):
    report = density.check_inequalities(grid_step)
    return {
        "suite": "inequalities",
        "passed": report.all_passed,
        "report": report,
        "margin": min(c.min_slack for c in report.checks),
    }


def _suite_monotonicity(table):
    """Grid monotonicity of T in r and of the 7-term comparison functions."""
    failures = []
    min_increment = float("inf")
    grid = [1.05 + 0.05 * i for i in range(26)]  # 1.05 .. 2.30
    for k in (1, 2, 5):
        for m in (1, 2, 4):
            mids = [density.t_func(table, k, m, r).mid for r in grid]
            for a, b in zip(mids, mids[1:]):
                min_increment = min(min_increment, b - a)
                if b <= a:
                    failures.append(f"T_{k}({m}, .) not increasing on grid")
    j_margin = float("inf")
    for m in (1, 2, 4):
        xs = [1.0 + 0.01 * i for i in range(1, 134)]  # up to 2.33 < 7/3
        js = [density.j_func(table, m, x) for x in xs]
        for a, b in zip(js, js[1:]):
            if b <= a:
                failures.append(f"J_{m} not increasing on grid")
                break
        end = density.j_func(table, m, 7.0 / 3.0)
        j_margin = min(j_margin, -end)
        if end >= 0:
            failures.append(f"J_{m}(7/3) = {end} is not negative")
    return {
        "suite": "monotonicity",
        "passed": not failures,
        "failures": sorted(set(failures)),
        "margin": min(min_increment, j_margin),
    }


def _run_verify(args, table):
    suites = []
    if args.suite in ("gap-lemma", "all"):
        suites.append(_suite_gap_lemma(table))
    if args.suite in ("inequalities", "all"):
        suites.append(_suite_inequalities(args.grid_step))
    if args.suite in ("monotonicity", "all"):
        suites.append(_suite_monotonicity(table))
    for suite in suites:
        status = "PASS" if suite["passed"] else "FAIL"
        print(f"{status} {suite['suite']} (margin {suite['margin']:.6g})", file=sys.stderr)
    return suites, all(s["passed"] for s in suites)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    table = primes.load_or_sieve(args.prime_limit)
    tolerances = {}
    try:
        if args.command == "eta":
            tolerances["eps"] = args.eps
            result = solver.eta(table, args.k, args.eps)
            params = {"k": args.k, "eps": args.eps}
        elif args.command == "eta-limit":
            tolerances["eps"] = args.eps
            result = solver.eta_limit(args.eps)
            params = {"eps": args.eps}
        elif args.command == "thresholds":
            tolerances["eps"] = args.eps
            result = {
                "thresholds": {m: solver.r_threshold(table, args.k, m, args.eps) for m in (1, 2, 4)},
                "m_min": solver.m_selector(table, args.k),
            }
            params = {"k": args.k, "eps": args.eps}
        elif args.command == "table":
            tolerances["eps"] = args.eps
            result = solver.eta_table(table, args.kmax, args.eps)
            params = {"kmax": args.kmax, "eps": args.eps}
        elif args.command == "density":
            tolerances["eps"] = args.eps
            result = density.density_report(table, args.k, args.r, args.eps)
            params = {"k": args.k, "r": args.r, "eps": args.eps}
        elif args.command == "approximate":
            result = explorer.greedy_approximate(table, args.k, args.r, args.x, args.steps)
            params = {"k": args.k, "r": args.r, "x": args.x, "steps": args.steps}
        elif args.command == "census":
            result = explorer.range_census(
                table, args.k, args.r, args.bound, args.resolution
            )
            params = {
                "k": args.k,
                "r": args.r,
                "bound": args.bound,
                "resolution": result.resolution,
            }
            if args.format == "tsv":
                _emit_census_tsv(result, args)
                return EXIT_OK
        elif args.command == "verify":
            tolerances["grid_step"] = args.grid_step
            suites, ok = _run_verify(args, table)
            envelope = _envelope(
                args.command,
                {"suite": args.suite, "grid_step": args.grid_step},
                {"suites": suites},
                table.limit,
                tolerances,
            )
            _emit(envelope, args)
            return EXIT_OK if ok else EXIT_VERIFY_FAILED
        else:  # pragma: no cover - argparse enforces the choices
            raise AssertionError(args.command)
    except SigmaDensityError as exc:
        print(f"sigma-density: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    envelope = _envelope(args.command, params, result, table.limit, tolerances)
    _emit(envelope, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
