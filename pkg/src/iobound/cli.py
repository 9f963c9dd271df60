"""Command line interface: ``iobound {gen,spectrum,bound,closed-form,sweep,verify}``.

Exit codes: 0 success, 2 usage error, 3 invalid graph or graph file,
4 eigensolver convergence failure, 5 verify-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import closed_form as cf
from .bounds import DEFAULT_EIG_COUNT, METHODS, BoundQuery, bound
from .eigen import smallest_eigenvalues
from .exceptions import ConvergenceFailure, IOBoundError, ParseError, ValidationError
from .generators import FAMILIES, GeneratorSpec, generate
from .graph import LAPLACIAN_VARIANTS, laplacian, normalize_out_degree
from .serialization import fmt, format_report, read_graph, report_to_json, write_csv, write_graph
from .sweep import parse_range, sweep
from .verify import SUITES, run_suite

EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4
EXIT_VERIFY = 5


def _load(path):
    if path in (None, "-"):
        return read_graph(sys.stdin)
    return read_graph(path)


def _size_args(p, required=True, help_text="size parameter (l for hypercube/butterfly, n or m otherwise)"):
    p.add_argument("--size", "--l", "--n", "--m", dest="size", required=required, help=help_text)


def cmd_gen(args):
    spec = GeneratorSpec(args.family, int(args.size), args.p, args.seed)
    g = generate(spec)
    write_graph(g, args.output or sys.stdout, fmt=args.format)
    return 0


def cmd_spectrum(args):
    g = _load(args.graph)
    lap = laplacian(normalize_out_degree(g), args.laplacian)
    spec = smallest_eigenvalues(lap, args.eigs)
    for v in spec.eigenvalues:
        print(fmt(v))
    return 0


def cmd_bound(args):
    g = _load(args.graph)
    query = BoundQuery(memory=args.memory, eig_count=args.eigs, processors=args.processors,
                       method=args.method)
    report = bound(g, query)
    if "warning" in report.diagnostics:
        print(f"warning: {report.diagnostics['warning']}", file=sys.stderr)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(report))
    sys.stdout.write(report_to_json(report) if args.json else format_report(report))
    return 0


def cmd_closed_form(args):
    l = int(args.size)
    result = {"family": args.family, "l": l}
    if args.family == "hypercube":
        result["spectrum"] = cf.hypercube_spectrum(l)
        if args.memory is not None:
            alpha = args.alpha if args.alpha is not None else cf.best_hypercube_alpha(l, args.memory)[0]
            result.update(M=args.memory, alpha=alpha, bound=cf.hypercube_bound(l, args.memory, alpha))
    else:
        result["spectrum"] = cf.butterfly_spectrum(l)
        if args.memory is not None:
            alpha = args.alpha
            if alpha is None:
                m = args.memory
                if m >= 1 and not m & (m - 1) and 0 <= l - (m.bit_length() - 1) < l:
                    alpha = cf.butterfly_alpha_for_memory(l, m)
                else:
                    alpha = cf.best_butterfly_alpha(l, m)[0]
            result.update(M=args.memory, alpha=alpha, bound=cf.butterfly_bound(l, args.memory, alpha))
    spectrum = result.pop("spectrum")
    if args.json:
        if args.show_spectrum:
            result["spectrum"] = [[float(fmt(v)), m] for v, m in spectrum.entries]
        if "bound" in result:
            result["bound"] = float(fmt(result["bound"]))
        print(json.dumps(result, sort_keys=True))
        return 0
    if "bound" in result:
        print(" ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in result.items()))
    if args.show_spectrum or "bound" not in result:
        for v, m in spectrum.entries:
            print(f"{fmt(v)}\t{m}")
    return 0


def cmd_sweep(args):
    methods = [m.strip() for m in args.method.split(",")]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    rows = sweep(args.family, parse_range(args.size), parse_range(args.memory), methods,
                 parse_range(args.processors), args.eigs, args.p, args.seed, args.jobs, args.timing)
    write_csv(rows, args.csv or sys.stdout)
    return 0


def cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    any_failed = False
    for name in names:
        failed = 0
        for check in run_suite(name):
            status = "PASS" if check.passed else "FAIL"
            if not check.passed or args.verbose:
                print(f"{status} {name}: {check.name} {check.detail}".rstrip())
            failed += not check.passed
        print(f"{name}: {'FAIL' if failed else 'PASS'}")
        any_failed = any_failed or failed > 0
    return EXIT_VERIFY if any_failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iobound",
                                     description="Spectral I/O lower bounds for computation graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a built-in computation graph")
    p.add_argument("--family", required=True, choices=FAMILIES)
    _size_args(p)
    p.add_argument("--p", type=float, default=None, help="edge probability (erdos_renyi)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "edgelist"), default="json")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectrum", help="print the smallest Laplacian eigenvalues")
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("--eigs", type=int, default=DEFAULT_EIG_COUNT)
    p.add_argument("--laplacian", choices=LAPLACIAN_VARIANTS, default="tilde")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bound", help="spectral I/O lower bound of a graph file")
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("--memory", "-M", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="tight")
    p.add_argument("--eigs", type=int, default=DEFAULT_EIG_COUNT)
    p.add_argument("--processors", type=int, default=1)
    p.add_argument("--json", action="store_true", help="print the machine-readable report")
    p.add_argument("--report", default=None, help="also write the JSON report to this path")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("closed-form", help="analytic spectra and bounds")
    p.add_argument("--family", required=True, choices=("hypercube", "butterfly"))
    _size_args(p, help_text="dimension l")
    p.add_argument("--memory", "-M", type=int, default=None)
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--spectrum", dest="show_spectrum", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("sweep", help="bound sweep written as CSV")
    p.add_argument("--family", required=True, choices=FAMILIES)
    _size_args(p, help_text="sizes, e.g. 3:6 or 2,4,8")
    p.add_argument("--memory", "-M", required=True, help="memory sizes, e.g. 4,8 or 1:4")
    p.add_argument("--method", default="tight", help="comma-separated methods")
    p.add_argument("--processors", default="1", help="comma-separated processor counts")
    p.add_argument("--eigs", type=int, default=DEFAULT_EIG_COUNT)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record wall_ms (otherwise 0)")
    p.add_argument("--csv", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (IOBoundError, ValueError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
