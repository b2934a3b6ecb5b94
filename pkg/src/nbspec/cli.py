"""Command line front end: ``nbspec spectrum | verify | sweep | matrix``.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 all checks pass,
1 usage or input error, 2 at least one verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from nbspec import linalg, oracles, suites
from nbspec.generators import parse_generator
from nbspec.graph import Graph, GraphError, from_edge_list, to_edge_list
from nbspec.operators import build_operators, to_matrix_market
from nbspec.report import dumps

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAIL = 2


class InputError(Exception):
    pass


def tolerance_from_env() -> float:
    raw = os.environ.get("NBSPEC_TOL")
    if raw is None or raw == "":
        return linalg.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"NBSPEC_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise InputError(f"NBSPEC_TOL must be positive, got {raw!r}")
    return tol


def load_graph(args) -> Graph:
    try:
        if args.gen is not None:
            return parse_generator(args.gen)
        if args.file == "-":
            return from_edge_list(sys.stdin.read())
        with open(args.file) as fh:
            return from_edge_list(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    except GraphError as exc:
        raise InputError(str(exc)) from None


def _target_matrix(g: Graph, target: str):
    ops = build_operators(g)
    return {"B": ops.B, "K": ops.K, "A": ops.A, "C": ops.C, "S": ops.S, "T": ops.T,
            "tau": ops.tau, "D": ops.D}[target]


def cmd_spectrum(args) -> int:
    tol = tolerance_from_env()
    g = load_graph(args)
    M = _target_matrix(g, args.target)
    s = linalg.eigenvalues(M, tol)
    eps = 1e-13 * s.scale
    vals = [complex(0.0 if abs(z.real) < eps else z.real, 0.0 if abs(z.imag) < eps else z.imag) for z in s.values]
    out = {
        "target": args.target,
        "graph": {"n": g.n, "m": g.m},
        "dimension": len(s),
        "eigenvalues": vals,
        "clusters": [{"value": z, "multiplicity": k} for z, k in linalg.Spectrum.from_values(vals, tol).clusters()],
        "spectral_radius": s.radius,
        "min_modulus": s.min_modulus if len(s) else None,
        "tol": tol,
    }
    print(dumps(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = tolerance_from_env()
    g = load_graph(args)
    reports = suites.run_suite(g, args.suite, tol)
    counts = suites.summary_counts(reports)
    print(dumps({"graph": {"n": g.n, "m": g.m}, "suite": args.suite, "summary": counts, "reports": reports}))
    for r in reports:
        if r.failed:
            print(f"FAIL {r.check}", file=sys.stderr)
    return EXIT_FAIL if counts["fail"] else EXIT_OK


def _sweep_one(job):
    g, suite, tol = job
    return g, suites.run_suite(g, suite, tol)


def cmd_sweep(args) -> int:
    tol = tolerance_from_env()
    if not 1 <= args.n <= oracles.MAX_SWEEP_N:
        raise InputError(f"--n must be between 1 and {oracles.MAX_SWEEP_N}")
    graphs = list(oracles.exhaustive_graph_sweep(
        args.n, n_min=1, connected=args.connected, up_to_isomorphism=not args.labeled,
    ))
    jobs = [(g, args.suite, tol) for g in graphs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_one, jobs, chunksize=16))
    else:
        results = [_sweep_one(j) for j in jobs]
    per_check: dict[str, dict[str, int]] = {}
    first_failure = None
    for g, reports in results:
        for r in reports:
            per_check.setdefault(r.check, {"pass": 0, "fail": 0, "not-applicable": 0})[r.status] += 1
            if r.failed and first_failure is None:
                first_failure = {"graph": to_edge_list(g), "report": r}
    failures = sum(c["fail"] for c in per_check.values())
    out = {
        "n_max": args.n,
        "suite": args.suite,
        "graphs": len(graphs),
        "enumeration": "labeled" if args.labeled else "isomorphism classes",
        "connected_only": args.connected,
        "checks": per_check,
        "failures": failures,
        "first_counterexample": first_failure,
    }
    print(dumps(out))
    return EXIT_FAIL if failures else EXIT_OK


def cmd_matrix(args) -> int:
    g = load_graph(args)
    M = _target_matrix(g, args.target)
    sys.stdout.write(to_matrix_market(M, comment=f"{args.target} of graph with n={g.n}, m={g.m}"))
    return EXIT_OK


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator spec, e.g. cycle:4, pinwheel:2,3, join:cycle:4@0+path:3@0")
    src.add_argument("--file", help="edge-list file ('-' for stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbspec", description="Non-backtracking spectra and their theorems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of B, K, A or C")
    _add_source(p)
    p.add_argument("--target", choices=["B", "K", "A", "C"], default="B")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a verification suite on one graph")
    _add_source(p)
    p.add_argument("--suite", choices=["all", *suites.SUITES], default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a suite over every graph with 1..n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--suite", choices=["all", *suites.SUITES], default="all")
    p.add_argument("--labeled", action="store_true", help="enumerate labelled graphs instead of isomorphism classes")
    p.add_argument("--connected", action="store_true", help="connected graphs only")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("matrix", help="export a matrix as dense MatrixMarket text")
    _add_source(p)
    p.add_argument("--target", choices=["B", "K", "A", "C", "S", "T", "tau", "D"], default="B")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, oracles.BudgetError, linalg.LinalgError) as exc:
        print(f"nbspec: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
