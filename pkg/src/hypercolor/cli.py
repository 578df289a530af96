"""Command line interface.

Exit codes: 0 on success, 1 when the coloring algorithm fails (or a coloring
is not proper), 2 on usage, parse or I/O errors. Diagnostics go to stderr;
results go to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .coloring import ColorOutcome, color2, colorK
from .exceptions import HypercolorError
from .experiment import SweepSpec, run_sweep
from .hypergraph import read_coloring, read_hypergraph, verify_proper, write_coloring, write_hypergraph
from .nae import format_assignment, parse_dimacs, solve_nae
from .planted import (
    PlantedParams,
    density_coefficient,
    expected_edge_count,
    probs_for_density,
    sample,
)
from .spectral import moments

logger = logging.getLogger("hypercolor")

MAX_EXPLICIT_SIZE = 8
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return value


def _add_model_flags(parser, with_seed=True):
    parser.add_argument("--n", type=_positive_int, required=True, help="class size")
    parser.add_argument("--k", type=_positive_int, default=2, help="number of planted classes")
    parser.add_argument("--M", type=_positive_int, required=True, help="largest edge size")
    for m in range(2, MAX_EXPLICIT_SIZE + 1):
        parser.add_argument(f"--p{m}", type=_probability, default=None, metavar="P",
                            help=f"probability of each non-monochromatic {m}-subset")
    parser.add_argument("--density", type=float, default=None,
                        help="choose p_m for this density coefficient instead of --pM flags")
    parser.add_argument("--profile", choices=["equal", "pairs-only"], default="equal",
                        help="how --density is spread over edge sizes")
    if with_seed:
        parser.add_argument("--seed", type=int, default=0)


def _params_from_args(args) -> PlantedParams:
    explicit = {m: getattr(args, f"p{m}") for m in range(2, MAX_EXPLICIT_SIZE + 1)
                if getattr(args, f"p{m}") is not None}
    if args.M > MAX_EXPLICIT_SIZE and args.density is None:
        raise _UsageError(f"--M above {MAX_EXPLICIT_SIZE} needs --density")
    too_big = [m for m in explicit if m > args.M]
    if too_big:
        raise _UsageError(f"--p{too_big[0]} given but --M is {args.M}")
    seed = getattr(args, "seed", 0)
    if args.density is not None:
        if explicit:
            raise _UsageError("use either --density or explicit --pM flags, not both")
        probs = probs_for_density(args.n, args.M, args.density, args.profile, k=args.k)
        if probs.clamped:
            print(f"warning: density {args.density:g} unreachable; some p_m clamped to 1",
                  file=sys.stderr)
        return PlantedParams(args.n, args.M, probs.p, k=args.k, seed=seed)
    if not explicit:
        raise _UsageError("give --density or at least one --pM flag")
    return PlantedParams(args.n, args.M, explicit, k=args.k, seed=seed)


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_gen(args):
    params = _params_from_args(args)
    h, planted = sample(params)
    comments = [line for line in params.to_text().splitlines()]
    _emit(write_hypergraph(h, comments=comments), args.out)
    if args.planted_out:
        Path(args.planted_out).write_text(write_coloring(planted))
    print(f"{h.num_edges} edges on {h.num_vertices} vertices", file=sys.stderr)
    return EXIT_OK


def _trajectory_csv(outcome: ColorOutcome) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    k = outcome.coloring.k
    with_mismatch = bool(outcome.trajectory) and outcome.trajectory[0].mismatch is not None
    header = ["iteration"] + [f"size_{l}" for l in range(k)]
    if with_mismatch:
        header.append("mismatch")
    writer.writerow(header)
    for s in outcome.trajectory:
        row = [s.iteration, *s.part_sizes]
        if with_mismatch:
            row.append(s.mismatch)
        writer.writerow(row)
    return buf.getvalue()


def _run_coloring(args, k):
    h = read_hypergraph(_read_text(args.input))
    planted = read_coloring(_read_text(args.planted)) if args.planted else None
    if k == 2:
        outcome = color2(h, tol=args.tol, max_iter=args.max_iter, planted=planted)
    else:
        outcome = colorK(h, k, tol=args.tol, max_iter=args.max_iter, planted=planted)
    if args.trajectory:
        _emit(_trajectory_csv(outcome), args.trajectory)
    if not outcome.eigen_converged:
        print("warning: eigensolver did not converge; result uses its best iterate", file=sys.stderr)
    if outcome.success:
        _emit(write_coloring(outcome.coloring), args.out)
        return EXIT_OK
    witness = outcome.witness_edges
    print(f"FAIL ({outcome.status.value}): {len(witness)} monochromatic edges", file=sys.stderr)
    for idx in witness:
        print(f"edge {idx}: {' '.join(map(str, h.edges[idx]))}", file=sys.stderr)
    return EXIT_FAIL


def _cmd_color(args):
    return _run_coloring(args, 2)


def _cmd_kcolor(args):
    return _run_coloring(args, args.k)


def _cmd_nae(args):
    formula = parse_dimacs(_read_text(args.input))
    if formula.dropped_tautologies:
        print(f"c dropped {formula.dropped_tautologies} tautological clauses", file=sys.stderr)
    print("c best-effort spectral NAE solver; no guarantee outside the planted model", file=sys.stderr)
    assignment, _ = solve_nae(formula, tol=args.tol)
    if assignment is None:
        _emit("s UNKNOWN\n", args.out)
        return EXIT_FAIL
    _emit("s SATISFIABLE\n" + format_assignment(assignment), args.out)
    return EXIT_OK


def _cmd_expected(args):
    params = _params_from_args(args)
    if params.k != 2:
        raise _UsageError("expected supports the 2-class model only")
    mom = moments(params)
    fields = [
        ("alpha1", mom.alpha1),
        ("alpha2", mom.alpha2),
        ("alpha3", mom.alpha3),
        ("eta", mom.eta),
        ("lambda_min", mom.lambda_min),
        ("gap", mom.eigen_gap),
        ("expected_edges", expected_edge_count(params)),
    ]
    if params.n >= 2:
        fields.append(("d", density_coefficient(params)))
    print(" ".join(f"{name}={value:.6g}" for name, value in fields))
    return EXIT_OK


def _cmd_verify(args):
    h = read_hypergraph(_read_text(args.input))
    c = read_coloring(_read_text(args.coloring))
    verdict = verify_proper(h, c)
    print(f"proper={str(verdict.proper).lower()}")
    for idx in verdict.monochromatic_edges:
        print(f"monochromatic edge {idx}: {' '.join(map(str, h.edges[idx]))}")
    return EXIT_OK if verdict.proper else EXIT_FAIL


def _cmd_exper(args):
    spec = SweepSpec(args.n, args.M, args.d, k=args.k, profile=args.profile,
                     trials=args.trials, master_seed=args.seed)
    result = run_sweep(spec, out_dir=args.out, n_jobs=args.jobs)
    for s in result.summaries:
        print(f"n={s.cell.n} d={s.cell.d:g}: {s.successes}/{s.trials} success "
              f"[{s.wilson_low:.3f}, {s.wilson_high:.3f}]", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercolor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a planted hypergraph")
    _add_model_flags(p)
    p.add_argument("--out", default=None, help="hypergraph file (default stdout)")
    p.add_argument("--planted-out", default=None, help="write the planted coloring here")
    p.set_defaults(func=_cmd_gen)

    for name, func, help_text in (("color", _cmd_color, "spectral 2-coloring"),
                                  ("kcolor", _cmd_kcolor, "spectral k-coloring")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="input", required=True, help="hypergraph file or '-'")
        p.add_argument("--out", default=None, help="coloring file (default stdout)")
        p.add_argument("--trajectory", default=None, help="per-round part sizes as CSV")
        p.add_argument("--planted", default=None, help="planted coloring, adds mismatch to the trajectory")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--max-iter", type=_positive_int, default=None)
        if name == "kcolor":
            p.add_argument("--k", type=_positive_int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("nae", help="NAE-SAT via 2-coloring (DIMACS CNF input)")
    p.add_argument("--in", dest="input", required=True, help="CNF file or '-'")
    p.add_argument("--out", default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_nae)

    p = sub.add_parser("exper", help="Monte Carlo sweep over (n, d)")
    p.add_argument("--n", type=_positive_int, nargs="+", required=True)
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, default=2)
    p.add_argument("--d", type=float, nargs="+", required=True)
    p.add_argument("--profile", choices=["equal", "pairs-only"], default="equal")
    p.add_argument("--trials", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_exper)

    p = sub.add_parser("expected", help="analytic model quantities")
    _add_model_flags(p, with_seed=False)
    p.set_defaults(func=_cmd_expected)

    p = sub.add_parser("verify", help="check that a coloring is proper")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--coloring", required=True)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (_UsageError, HypercolorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
