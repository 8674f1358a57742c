"""Batch front end.

Subcommands:

    check      decide whether a congruence tuple has the Chinese remainder
               property (every compatible target system solvable)
    gen-hard   compile a 3SAT' formula into a hard congruence-tuple instance
    classify2  place a two-element algebra in its complexity class
    conlat     survey the congruence lattice of an algebra

Verdicts and reports go to stdout, diagnostics to stderr. Exit codes:
0 for success (check: tuple is CR), 10 for check's NOT-CR verdict, 2 for
any error (bad files, non-congruences, method preconditions, budgets).
Identical inputs produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import postlattice
from .algebra import (
    FiniteAlgebra,
    Operation,
    all_congruences,
    congruence_lattice_is_distributive,
    congruence_lattice_is_permutable,
    congruence_violation,
    naive_meet_irreducibles,
    term_str,
)
from .dualdisc import is_cr_tuple_dualdisc
from .errors import CrtkitError, InputError
from .formats import (
    parse_algebra,
    parse_congruences,
    serialize_algebra,
    serialize_congruences,
)
from .nearlattice import is_cr_tuple_distlattice, is_cr_tuple_nearlattice, make_view
from .satgadget import (
    as_left_zero_semigroup,
    parse_dimacs,
    reduce_formula,
    u_embed,
    validate_3sat_prime,
)
from .systems import brute_force_is_cr_tuple
from .vectorspace import (
    congruence_to_subspace,
    coordinatize,
    is_cr_tuple_vs,
    vs_instance,
)

EXIT_CR = 0
EXIT_NOT_CR = 10
EXIT_ERROR = 2


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="ascii") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(args):
    alg = parse_algebra(_read(args.algebra))
    named = parse_congruences(_read(args.congs), size=alg.size)
    if not named:
        raise InputError(f"{args.congs} holds no congruences")
    for name, part in named:
        hit = congruence_violation(alg, part)
        if hit is not None:
            op_name, pos, argv, repl = hit
            raise InputError(
                f"{name} is not a congruence of {alg.name}: {op_name} at "
                f"arguments {' '.join(str(a) for a in argv)} separates the "
                f"related pair {argv[pos]} {repl} (position {pos + 1})"
            )
    return alg, named


def _print_brute(verdict) -> int:
    if verdict.is_cr:
        print("RESULT: CR")
        return EXIT_CR
    print("RESULT: NOT-CR")
    print("WITNESS: " + " ".join(str(a) for a in verdict.witness))
    return EXIT_NOT_CR


def _print_vs(verdict) -> int:
    if verdict.is_cr:
        print("RESULT: CR")
        return EXIT_CR
    print("RESULT: NOT-CR")
    print(
        f"REASON: solvable dimension {verdict.dim_solvable} < "
        f"compatible dimension {verdict.dim_compatible}"
    )
    return EXIT_NOT_CR


def _print_nearlattice(verdict) -> int:
    if verdict.is_cr:
        print("RESULT: CR")
        return EXIT_CR
    print("RESULT: NOT-CR")
    detail = " ".join(str(x) for x in verdict.detail)
    print(f"REASON: {verdict.reason} {detail}")
    return EXIT_NOT_CR


def _print_dualdisc(verdict) -> int:
    if verdict.is_cr:
        print("RESULT: CR")
        return EXIT_CR
    print("RESULT: NOT-CR")
    lam, mu = verdict.failing_pair
    left = " ".join(str(v) for v in lam.labels)
    right = " ".join(str(v) for v in mu.labels)
    print(f"REASON: non-permuting {left} / {right}")
    return EXIT_NOT_CR


def _check_vs(alg: FiniteAlgebra, parts) -> int:
    chart = coordinatize(alg, "add")
    bases = [congruence_to_subspace(chart, part) for part in parts]
    return _print_vs(is_cr_tuple_vs(vs_instance(chart.p, chart.dim, bases)))


def cmd_check(args) -> int:
    alg, named = _load_instance(args)
    parts = [part for _, part in named]
    if len(parts) == 1:
        # a single congruence admits every target: the block of the target
        # itself solves the system
        if args.method == "auto":
            print("ROUTE: trivial")
        print("RESULT: CR")
        return EXIT_CR
    if args.method == "brute":
        return _print_brute(brute_force_is_cr_tuple(parts))
    if args.method == "vs":
        return _check_vs(alg, parts)
    if args.method == "nearlattice":
        return _print_nearlattice(is_cr_tuple_nearlattice(make_view(alg), parts))
    if args.method == "distlat":
        return _print_nearlattice(is_cr_tuple_distlattice(alg, parts))
    if args.method == "dualdisc":
        return _print_dualdisc(is_cr_tuple_dualdisc(alg, parts))

    # auto: classify the provided two-element generator and take the route
    # its class supports; without a generator the only safe method is brute
    if args.generator is None:
        print("ROUTE: brute")
        return _print_brute(brute_force_is_cr_tuple(parts))
    gen = parse_algebra(_read(args.generator))
    result = postlattice.route_decide(alg, parts, generator=gen)
    print(f"ROUTE: {result.route}")
    if result.warning is not None:
        print(f"warning: {result.warning}", file=sys.stderr)
    printer = {
        "vs": _print_vs,
        "nearlattice": _print_nearlattice,
        "dualdisc": _print_dualdisc,
        "brute": _print_brute,
    }[result.route]
    return printer(result.verdict)


def _provenance_lines(inst, doubled: bool) -> list[str]:
    lines = [
        "# reduction-set elements: index, then the local models the element",
        "# joins; a model lists its variables as <variable>=<bit>",
    ]
    if doubled:
        lines.append(
            f"# the emitted algebra doubles the set: index i + {inst.size} "
            "is the primed copy of index i"
        )
    for idx, element in enumerate(inst.elements):
        rendered = []
        for a in sorted(element):
            ordered = sorted(inst.varsets[a.domain])
            rendered.append(" ".join(f"{v}={b}" for v, b in zip(ordered, a.values)))
        lines.append(f"{idx}: " + " | ".join(rendered))
    return lines


def cmd_gen_hard(args) -> int:
    phi = parse_dimacs(_read(args.cnf))
    violations = validate_3sat_prime(phi)
    if violations:
        for line in violations:
            print(f"not a 3SAT' formula: {line}", file=sys.stderr)
        return EXIT_ERROR
    inst = reduce_formula(phi)
    if args.u_embed:
        alg, parts = u_embed(inst.size, inst.thetas)
        if args.semigroup:
            mul = tuple(x for x in range(alg.size) for _ in range(alg.size))
            alg = FiniteAlgebra(
                alg.size,
                list(alg.ops) + [Operation("mul", 2, mul)],
                name=f"{alg.name}xLZ",
            )
    elif args.semigroup:
        alg, congs = as_left_zero_semigroup(inst)
        parts = tuple(c.partition for c in congs)
    else:
        alg = FiniteAlgebra(inst.size, [], name=f"S{inst.size}")
        parts = inst.thetas

    os.makedirs(args.out, exist_ok=True)
    named = [(f"theta{i + 1}", part) for i, part in enumerate(parts)]
    outputs = [
        ("instance.alg", serialize_algebra(alg)),
        ("instance.congs", serialize_congruences(named)),
        ("provenance.txt", "\n".join(_provenance_lines(inst, args.u_embed)) + "\n"),
    ]
    print(f"SIZE: {alg.size}")
    print(f"CONGRUENCES: {len(named)}")
    for filename, payload in outputs:
        path = os.path.join(args.out, filename)
        with open(path, "w", encoding="ascii") as handle:
            handle.write(payload)
        print(f"WROTE: {path}")
    return EXIT_CR


def cmd_classify2(args) -> int:
    alg = parse_algebra(_read(args.algebra))
    result = postlattice.classify(alg)
    if result.tag == postlattice.ESSENTIALLY_UNARY:
        print("CLASS: EssentiallyUnary  COMPLEXITY: coNP-complete")
    elif result.tag == postlattice.SEMILATTICE_FAMILY:
        print("CLASS: SemilatticeFamily  COMPLEXITY: open")
    else:
        print(f"CLASS: {result.tag}")
        print(f"WITNESS: {term_str(result.witness)}")
    return EXIT_CR


def cmd_conlat(args) -> int:
    alg = parse_algebra(_read(args.algebra))
    lattice = all_congruences(alg)
    parts = [c.partition for c in lattice]
    mi = {p.labels for p in naive_meet_irreducibles(alg.size, parts)}
    distributive = congruence_lattice_is_distributive(parts)
    permutable = congruence_lattice_is_permutable(parts)
    print(f"ALGEBRA: {alg.name}")
    print(f"SIZE: {alg.size}")
    print(f"CONGRUENCES: {len(parts)}")
    for idx, part in enumerate(parts):
        labels = " ".join(str(v) for v in part.labels)
        mark = "  MI" if part.labels in mi else ""
        print(f"CONG {idx}: {labels}{mark}")
    print(f"DISTRIBUTIVE: {'yes' if distributive else 'no'}")
    print(f"PERMUTABLE: {'yes' if permutable else 'no'}")
    print(f"ARITHMETIC: {'yes' if distributive and permutable else 'no'}")
    return EXIT_CR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crtkit",
        description="decide Chinese remainder properties of congruence tuples",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="decide whether a congruence tuple is CR")
    check.add_argument("--algebra", required=True, help="algebra file")
    check.add_argument("--congs", required=True, help="congruence file")
    check.add_argument(
        "--method",
        choices=["auto", "brute", "vs", "nearlattice", "distlat", "dualdisc"],
        default="auto",
        help="decision procedure (auto routes via --generator, else brute)",
    )
    check.add_argument(
        "--generator",
        help="two-element algebra file generating a variety containing the algebra",
    )
    check.set_defaults(func=cmd_check)

    gen = sub.add_parser("gen-hard", help="compile a 3SAT' formula to an instance")
    gen.add_argument("--cnf", required=True, help="DIMACS CNF file")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument(
        "--semigroup",
        action="store_true",
        help="equip the reduction set with the left-zero product",
    )
    gen.add_argument(
        "--u-embed",
        action="store_true",
        help="double the universe and add the involution with two constants",
    )
    gen.set_defaults(func=cmd_gen_hard)

    cls = sub.add_parser("classify2", help="classify a two-element algebra")
    cls.add_argument("--algebra", required=True, help="two-element algebra file")
    cls.set_defaults(func=cmd_classify2)

    con = sub.add_parser("conlat", help="survey the congruence lattice")
    con.add_argument("--algebra", required=True, help="algebra file")
    con.set_defaults(func=cmd_conlat)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CrtkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
