"""Command-line entry point: ``lintest <subcommand> ...``.

Exit status: 0 success, 1 a verifier or search found a violation,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bounds, verifiers
from .analysis import analysis_to_dict, analyze_tree, format_fraction, report_rows
from .boolfn import (
    QuadraticFn,
    distance_to_linear,
    fourier_profile,
    parse_function,
    walsh_spectrum,
)
from .engine import (
    RandomizedTest,
    acceptance_exact,
    acceptance_monte_carlo,
    acceptance_on_function,
    blr_test,
    complete_graph_test,
    dumps,
    load_tree_file,
)
from .search import frontier, is_blr_shaped, search_optimal

DEFAULT_SEED = 2008
EXACT_TREE_LIMIT = 4096
LEMMAS = ("quadsum", "rank-ineq", "main-lemma", "low-rank-count", "farness", "reach")


class UsageError(Exception):
    pass


def _prob(p: Fraction) -> str:
    return f"{format_fraction(p)} ({float(p):.6g})"


def cmd_bound(args, out):
    try:
        rep = bounds.bound_report(args.c, args.q)
    except ValueError as e:
        raise UsageError(str(e))
    for line in rep.lines():
        print(line, file=out)
    return 0


def _family(tokens):
    if tokens[0] in ("linear", "quadratic") and len(tokens) == 1:
        return tokens[0], tokens[0]
    if tokens[0] == "fn" and len(tokens) == 2:
        return parse_function(tokens[1]), tokens[1]
    raise UsageError("--family expects 'linear', 'quadratic' or 'fn FNLITERAL'")


def cmd_run(args, out):
    family, family_name = _family(args.family)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if not isinstance(family, str) and family.n != args.n:
        raise UsageError(f"function has n={family.n} but --n is {args.n}")
    if args.test == "blr":
        gen = blr_test(args.n)
        n_trees = 4 ** args.n
    else:
        if args.k is None or args.k < 2:
            raise UsageError("--test kgraph needs --k >= 2")
        gen = complete_graph_test(args.n, args.k)
        n_trees = 2 ** (args.n * args.k)
    est = acceptance_monte_carlo(gen, family, args.trials, seed=args.seed)
    print(f"test: {gen.name}", file=out)
    print(f"n: {args.n}", file=out)
    print(f"family: {family_name}", file=out)
    print(f"trials: {args.trials}", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"accepts: {est.accepts}", file=out)
    print(f"estimate: {est.estimate:.6f}", file=out)
    print(f"stderr: {est.stderr:.6f}", file=out)
    print(f"max_depth_observed: {est.max_depth_seen}", file=out)
    if n_trees <= EXACT_TREE_LIMIT:
        if args.test == "blr":
            explicit = blr_test(args.n, explicit=True)
        else:
            explicit = complete_graph_test(args.n, args.k, explicit=True)
        if isinstance(family, str):
            exact = acceptance_exact(explicit, family)
        else:
            exact = acceptance_on_function(explicit, family)
        print(f"exact: {_prob(exact)}", file=out)
    return 0


def _load(path):
    try:
        return load_tree_file(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def cmd_analyze(args, out):
    doc = _load(args.tree)
    test = doc if isinstance(doc, RandomizedTest) else RandomizedTest.single(doc)
    status = 0
    for i, (w, t) in enumerate(test.trees):
        a = analyze_tree(t)
        print(f"tree {i}: weight {w} n={t.n} depth={t.depth()}", file=out)
        for row in report_rows(a):
            print("  " + row, file=out)
        if args.exhaustive_check:
            if t.n > 5:
                raise UsageError("--exhaustive-check supports n <= 5")
            problems = verifiers.check_reach(t, a)
            for p in problems:
                print(f"  MISMATCH {p}", file=out)
            print(f"  exhaustive check: {'pass' if not problems else 'FAIL'}", file=out)
            if problems:
                status = 1
    if len(test.trees) > 1:
        print(f"mixture lin_accept: {_prob(acceptance_exact(test, 'linear'))}", file=out)
        print(f"mixture quad_accept: {_prob(acceptance_exact(test, 'quadratic'))}", file=out)
    if args.json:
        import json
        docs = [analysis_to_dict(analyze_tree(t)) for _, t in test.trees]
        print(json.dumps(docs, sort_keys=True), file=out)
    return status


def cmd_spectrum(args, out):
    f = parse_function(args.fn)
    if f.n > 20:
        raise UsageError("spectrum supports n <= 20")
    spec = walsh_spectrum(f)
    print(f"function: {args.fn}", file=out)
    print(f"n: {f.n}", file=out)
    nonzero = {a: c for a, c in spec.items() if c != 0}
    print(f"support: {len(nonzero)}", file=out)
    print(f"distance_to_linear: {_prob(distance_to_linear(f))}", file=out)
    if isinstance(f, QuadraticFn):
        prof = fourier_profile(f)
        print(f"rank_B: {prof.rank_B}", file=out)
        print(f"profile_support: {prof.support}", file=out)
        print(f"profile_magnitude: {prof.magnitude}", file=out)
    shown = sorted(nonzero.items())[:64]
    for a, c in shown:
        bits = "".join(str((a >> i) & 1) for i in range(f.n))
        print(f"  coeff[{bits}] = {c}", file=out)
    if len(nonzero) > len(shown):
        print(f"  ... {len(nonzero) - len(shown)} more", file=out)
    return 0


def cmd_verify(args, out):
    seed = args.seed
    lemma = args.lemma
    if lemma == "quadsum":
        rep = verifiers.quadsum_report(trials=args.trials or 1000, seed=seed,
                                       max_k=args.k or 6, max_n=args.n or 4)
    elif lemma == "rank-ineq":
        rep = verifiers.rank_inequality_report(trials=args.trials or 10_000, seed=seed,
                                               max_n=args.n or 16)
    elif lemma == "main-lemma":
        rep = verifiers.main_lemma_report(random_trees=args.trials or 1000, seed=seed,
                                          max_n=args.n or 4)
    elif lemma == "low-rank-count":
        n = args.n or 4
        if n > 4:
            raise UsageError("low-rank-count enumerates all matrices; --n must be <= 4")
        rep = verifiers.low_rank_report(max_n=n)
    elif lemma == "farness":
        rep = verifiers.farness_verifier(args.n or 12, samples=args.trials or 10_000,
                                         seed=seed)
    else:
        rep = verifiers.reach_report(trials=args.trials or 1000, seed=seed,
                                     max_n=args.n or 4)
    for line in rep.lines():
        print(line, file=out)
    return 0 if rep.passed else 1


def cmd_search(args, out):
    try:
        if args.frontier:
            rows = frontier(args.n, args.depth, symmetry=args.symmetry)
            print(f"{'depth':>5} {'min_quad_accept':>16} {'bound':>12} holds", file=out)
            for r in rows:
                print(f"{r.depth:>5} {format_fraction(r.min_quad_accept):>16} "
                      f"{r.bound:>12.6f} {r.holds}", file=out)
            return 0 if all(r.holds for r in rows) else 1
        r = search_optimal(args.n, args.depth, symmetry=args.symmetry)
    except ValueError as e:
        raise UsageError(str(e))
    print(f"n: {r.n}", file=out)
    print(f"depth: {r.depth}", file=out)
    print(f"method: {r.method}", file=out)
    print(f"symmetry: {r.symmetry}", file=out)
    print(f"trees_examined: {r.trees_examined}", file=out)
    print(f"min_quad_accept: {_prob(r.min_quad_accept)}", file=out)
    print(f"bound: {r.bound:.12g}", file=out)
    print(f"holds: {r.holds}", file=out)
    if r.depth == 3:
        print(f"blr_shaped_witness: {is_blr_shaped(r.witness)}", file=out)
    print(f"witness: {dumps(r.witness)}", file=out)
    return 0 if r.holds else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lintest", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap; every subcommand currently runs in one thread")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate phi, psi and the soundness floor")
    b.add_argument("--c", type=float, required=True)
    b.add_argument("--q", type=float, required=True)
    b.set_defaults(func=cmd_bound)

    r = sub.add_parser("run", help="Monte Carlo acceptance of BLR / complete graph tests")
    r.add_argument("--test", choices=("blr", "kgraph"), required=True)
    r.add_argument("--k", type=int)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--family", nargs="+", required=True,
                   metavar="linear|quadratic|fn FNLITERAL")
    r.add_argument("--trials", type=int, default=10_000)
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("analyze", help="leaf-rank analysis of a stored tree or test")
    a.add_argument("--tree", required=True)
    a.add_argument("--exhaustive-check", action="store_true")
    a.add_argument("--json", action="store_true", help="also emit the analysis as JSON")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spectrum", help="Walsh spectrum of a function literal")
    s.add_argument("--fn", required=True)
    s.set_defaults(func=cmd_spectrum)

    v = sub.add_parser("verify", help="run a brute-force lemma check")
    v.add_argument("lemma", choices=LEMMAS)
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", help="exhaustive optimal-tree search")
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--depth", type=int, required=True)
    se.add_argument("--frontier", action="store_true")
    se.add_argument("--symmetry", action="store_true")
    se.set_defaults(func=cmd_search)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args, out)
    except (UsageError, ValueError) as e:
        print(f"lintest {args.command}: error: {e}", file=sys.stderr)
        return 2


def _entry():
    sys.exit(main())


if __name__ == "__main__":
    _entry()
