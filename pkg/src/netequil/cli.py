"""Command-line surface.

Subcommands: classify, solve, probe, enumerate, keyplayer, rate, demo.
Reports go to stdout in json, csv or text form; diagnostics go to stderr
only.  Exit codes: 0 success, 1 usage or parse error, 2 solver error,
3 precondition error.  ``NETEQUIL_LOG`` (error|warn|info|debug) controls
diagnostic verbosity.
"""

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import __version__, keyplayer, oracle, solver
from .demos import DEMO_NAMES, run_demo
from .document import load_document_file
from .errors import NetequilError, PreconditionError, SolverError, UsageError
from .reporting import jsonable

LOG = logging.getLogger("netequil")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_PRECONDITION = 3

CSV_HEADER = "key,index,value"


def _configure_logging():
    level = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }.get(os.environ.get("NETEQUIL_LOG", "warn").lower(), logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    LOG.handlers[:] = [handler]
    LOG.setLevel(level)


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, rows)
    elif isinstance(value, list):
        if any(isinstance(v, (dict, list)) for v in value):
            for k, sub in enumerate(value, start=1):
                _flatten(f"{prefix}[{k}]", sub, rows)
        else:
            for k, sub in enumerate(value, start=1):
                rows.append((prefix, str(k), sub))
    else:
        rows.append((prefix, "", value))


def _emit(payload, fmt):
    if fmt == "json":
        print(json.dumps(payload, allow_nan=False))
        return
    rows = []
    _flatten("", payload, rows)
    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for key, index, value in rows:
            writer.writerow([key, index, value])
        return
    for key, index, value in rows:
        label = f"{key}[{index}]" if index else key
        print(f"{label}: {value}")


def _csv_floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _auto_method(net):
    if solver.classify(net).contracting:
        return "banach"
    if solver.algorithm1_eligible(net):
        return "algorithm1"
    return "tarski-above"


def _run_solve(net, args):
    method = args.method
    if method == "auto":
        method = _auto_method(net)
        LOG.info("auto method resolved to %s", method)
    x0 = np.array(_csv_floats(args.x0)) if args.x0 else None
    if method == "banach":
        return solver.solve_banach(net, x0=x0, tol=args.tol, kmax=args.max_iter)
    if method == "algorithm1":
        return solver.solve_algorithm1(net, tol=args.tol)
    direction = solver.ABOVE if method == "tarski-above" else solver.BELOW
    return solver.solve_tarski(net, direction, tol=args.tol, kmax=args.max_iter)


def cmd_classify(args):
    net = load_document_file(args.file)
    payload = {
        "classification": jsonable(solver.classify(net)),
        "certificate": jsonable(solver.uniqueness_certificate(net)),
    }
    _emit(payload, args.format)
    return EXIT_OK


def cmd_solve(args):
    net = load_document_file(args.file)
    report = _run_solve(net, args)
    _emit(jsonable(report), args.format)
    return EXIT_OK


def cmd_probe(args):
    net = load_document_file(args.file)
    report = _run_solve(net, args)
    outcome = solver.multiplicity_probe(net, report.x, tol=args.tol)
    payload = {"solve": jsonable(report)}
    if isinstance(outcome, solver.Unique):
        payload["probe"] = "unique"
    else:
        payload["probe"] = jsonable(outcome)
    _emit(payload, args.format)
    return EXIT_OK


def cmd_enumerate(args):
    net = load_document_file(args.file)
    found = oracle.enumerate_equilibria(net, tol=args.tol)
    payload = {
        "points": [p.tolist() for p in found.points],
        "patterns": [list(p) for p in found.patterns],
        "families": jsonable(found.families),
    }
    _emit(payload, args.format)
    return EXIT_OK


def cmd_keyplayer(args):
    net = load_document_file(args.file)
    report = _run_solve(net, args)
    impact = keyplayer.impact_measure(net, report.x)
    payload = {"solve": jsonable(report), "impact": jsonable(impact)}
    if args.alpha is not None:
        payload["katz_hub"] = keyplayer.katz_centrality(
            net.w, args.alpha, keyplayer.HUB).tolist()
        payload["katz_authority"] = keyplayer.katz_centrality(
            net.w, args.alpha, keyplayer.AUTHORITY).tolist()
    _emit(payload, args.format)
    return EXIT_OK


def cmd_rate(args):
    net = load_document_file(args.file)
    if args.sampler == "discrete":
        if not args.support:
            raise UsageError("--sampler discrete requires --support vectors")
        support = tuple(tuple(_csv_floats(s)) for s in args.support)
        sampler = oracle.DiscreteUniform(support=support)
    else:
        if args.box:
            lo, hi = (tuple(_csv_floats(part)) for part in args.box.split(";"))
        else:
            prof = net.clamped_profile()
            if prof is None:
                raise UsageError("--box is required for this network")
            lo, hi = tuple(prof[2]), tuple(prof[3])
        sampler = oracle.ContinuousUniform(lower=lo, upper=hi)
    rate = oracle.multiplicity_rate(net, sampler, args.trials, args.seed)
    payload = {
        "rate": rate,
        "trials": args.trials,
        "seed": args.seed,
        "sampler": args.sampler,
        "generator": "xorshift64*",
    }
    _emit(payload, args.format)
    return EXIT_OK


def cmd_demo(args):
    if args.name not in DEMO_NAMES:
        raise UsageError(f"unknown demo {args.name!r}; choose from "
                         f"{', '.join(DEMO_NAMES)}")
    payload = run_demo(args.name, tol=args.tol)
    _emit(payload, args.format)
    return EXIT_OK


def _add_common(sub, tol_default=1e-9):
    sub.add_argument("--format", choices=("json", "csv", "text"),
                     default="text")
    sub.add_argument("--tol", type=float, default=tol_default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netequil",
        description="Compute, certify and stress-test equilibria of "
                    "interactive networks x = f(xW + eps).")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("classify", help="classification + certificate")
    sub.add_argument("file")
    _add_common(sub)
    sub.set_defaults(handler=cmd_classify)

    for name, handler in (("solve", cmd_solve), ("probe", cmd_probe),
                          ("keyplayer", cmd_keyplayer)):
        sub = commands.add_parser(name)
        sub.add_argument("file")
        _add_common(sub)
        sub.add_argument("--method", default="auto",
                         choices=("auto", "banach", "tarski-above",
                                  "tarski-below", "algorithm1"))
        sub.add_argument("--max-iter", type=int, default=1000000)
        sub.add_argument("--x0", default=None,
                         help="comma-separated initial guess (banach only)")
        if name == "keyplayer":
            sub.add_argument("--alpha", type=float, default=None,
                             help="also report Katz centralities at alpha")
        sub.set_defaults(handler=handler)

    sub = commands.add_parser("enumerate", help="oracle enumeration (n <= 12)")
    sub.add_argument("file")
    _add_common(sub)
    sub.set_defaults(handler=cmd_enumerate)

    sub = commands.add_parser("rate", help="empirical multiplicity rate")
    sub.add_argument("file")
    _add_common(sub)
    sub.add_argument("--sampler", choices=("continuous", "discrete"),
                     required=True)
    sub.add_argument("--trials", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--support", action="append", default=[],
                     help="csv support point, repeatable; use --support=-1,1 for values starting with a minus")
    sub.add_argument("--box", default=None,
                     help="continuous box as 'lo1,..,lon;hi1,..,hin' "
                          "(defaults to the lattice bounds)")
    sub.set_defaults(handler=cmd_rate)

    sub = commands.add_parser("demo", help="run a built-in worked example")
    sub.add_argument("name", metavar="name",
                     help=f"one of: {', '.join(DEMO_NAMES)}")
    _add_common(sub)
    sub.set_defaults(handler=cmd_demo)

    return parser


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code 1
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except PreconditionError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NetequilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
