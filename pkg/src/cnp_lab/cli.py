"""``cnp-lab`` command line.

Exit codes: 0 every expected verdict matched, 1 a verdict did not match,
2 usage, schema or unknown-scenario errors, 3 numerical hard errors
(non-Hermitian input, vanishing kernel values).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .bindings import audit_bindings, render_markdown
from .cnp import PickProblem, cnp_sample_test, default_samples, pick_feasibility_report, witness_search
from .errors import CnpLabError, NumericalHardError, SchemaError, UnknownScenario, VanishingAtBasePoint
from .jsonio import dec_complex, dec_points, enc_real
from .kernels import parse_kernel
from .runner import (
    build_report,
    builtin_names,
    emit_csv,
    emit_report,
    load_scenario,
    resolve_seed,
    run_many,
    write_text,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if what == "kernel":
            return text
        raise SchemaError(f"--{what} is not valid JSON") from None


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_list(args) -> int:
    for name in builtin_names():
        scn = load_scenario(name)
        print(f"{name:22s} {scn.description}")
    return EXIT_OK


def cmd_show(args) -> int:
    scn = load_scenario(args.name)
    _print_json({"name": scn.name, "description": scn.description, "seed": scn.seed,
                 "tolerance": scn.tolerance, "truncation": scn.truncation,
                 "checks": list(scn.checks), "binding": scn.binding})
    return EXIT_OK


def cmd_run(args) -> int:
    names = list(args.names)
    if args.all:
        names = builtin_names()
    if not names and not args.file:
        raise SchemaError("run needs a scenario name, --all or --file")
    scenarios = [load_scenario(n) for n in names] + [load_scenario(path=p) for p in args.file or []]
    results = run_many(scenarios, parallel=args.parallel, seed=args.seed, tol=args.tol,
                       truncation=args.truncation)
    report = build_report(results)
    text = emit_report(report)
    if args.json:
        write_text(args.json, text)
    if args.csv:
        write_text(args.csv, emit_csv(results))
    if args.json:
        for r in results:
            for c in r.checks:
                mark = "ok " if c.matched else "BAD"
                print(f"{mark} {r.name}/{c.id}: {c.verdict} (expected {c.expect})")
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.matched for r in results) else EXIT_MISMATCH


def cmd_pick(args) -> int:
    K = parse_kernel(_json_arg(args.kernel, "kernel"))
    nodes = dec_points(_json_arg(args.nodes, "nodes"))
    targets = _json_arg(args.targets, "targets")
    if not isinstance(targets, list):
        raise SchemaError("--targets must be a JSON list")
    rep = pick_feasibility_report(PickProblem(K, nodes, np.array([dec_complex(w) for w in targets])),
                                  args.tol)
    _print_json(rep.to_dict())
    return EXIT_OK


def cmd_cnp_test(args) -> int:
    K = parse_kernel(_json_arg(args.kernel, "kernel"))
    seed = resolve_seed(0, args.seed)
    if args.grid:
        w = witness_search(K, args.levels, args.tol, seed, args.budget)
        out = {"verdict": "NoWitness"} if w is None else w.as_verdict().to_dict()
    else:
        out = cnp_sample_test(K, default_samples(K, seed, grid_levels=args.levels), args.tol).to_dict()
    out["seed"] = seed
    out["tolerance"] = enc_real(args.tol)
    _print_json(out)
    return EXIT_OK


def cmd_bindings(args) -> int:
    if args.markdown:
        sys.stdout.write(render_markdown())
        return EXIT_OK
    rep = audit_bindings()
    _print_json(rep.to_dict())
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cnp-lab", description="CNP tests for reproducing kernels")
    p.add_argument("--version", action="version", version=f"cnp-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run built-in or file scenarios")
    r.add_argument("names", nargs="*", help="built-in scenario names")
    r.add_argument("--all", action="store_true", help="run every built-in scenario")
    r.add_argument("--file", action="append", help="scenario JSON file (repeatable)")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--tol", type=float, default=None)
    r.add_argument("--truncation", type=int, default=None)
    r.add_argument("--json", metavar="OUT", help="write the JSON report here")
    r.add_argument("--csv", metavar="OUT", help="write eigenvalue tables here")
    r.add_argument("--parallel", action="store_true")
    r.set_defaults(func=cmd_run)

    sub.add_parser("list", help="list built-in scenarios").set_defaults(func=cmd_list)

    s = sub.add_parser("show", help="print a built-in scenario")
    s.add_argument("name")
    s.set_defaults(func=cmd_show)

    k = sub.add_parser("pick", help="Pick-matrix feasibility")
    k.add_argument("--kernel", required=True, help="kernel description (JSON or a name)")
    k.add_argument("--nodes", required=True, help="JSON list of points")
    k.add_argument("--targets", required=True, help="JSON list of complex targets")
    k.add_argument("--tol", type=float, default=1e-9)
    k.set_defaults(func=cmd_pick)

    c = sub.add_parser("cnp-test", help="sample test or witness search for 1 - 1/K")
    c.add_argument("--kernel", required=True)
    c.add_argument("--grid", action="store_true", help="run the witness search instead")
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--levels", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    c.add_argument("--budget", type=int, default=10_000)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_cnp_test)

    b = sub.add_parser("bindings", help="audit scenario bindings")
    b.add_argument("--markdown", action="store_true", help="print the binding table")
    b.set_defaults(func=cmd_bindings)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UnknownScenario as exc:
        print(f"cnp-lab: unknown scenario {exc.args[0]!r} (try `cnp-lab list`)", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalHardError, VanishingAtBasePoint) as exc:
        print(f"cnp-lab: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CnpLabError, OSError) as exc:
        print(f"cnp-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
