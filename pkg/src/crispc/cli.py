"""Command line entry point: ``crispc <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 semantic
rejection, 4 inconclusive bounded search.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from fractions import Fraction
from typing import Sequence

from . import bench
from .chain import Chain
from .crispify import CrispifyOptions, CutTable, crispify
from .errors import CrispcError, ValidationError
from .model import Ontology, occurrences
from .normalize import normalize
from .oracle import (
    default_budget, failing_axioms, fuzzy_degree, is_model, query_sat, scoring_best, search_model, with_signature,
)
from .queries import FuzzyCQ, ThresholdCQ, kappa_fuzzy, kappa_scoring, kappa_threshold
from .textio import (
    fmt_axiom, fmt_degree, parse_interp, parse_ontology, parse_query, print_cq, print_interp, print_ontology,
    print_ucq,
)

EXIT_USAGE, EXIT_INCONCLUSIVE = 1, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _ontology(path: str) -> Ontology:
    return parse_ontology(_read(path), path)


def _degree_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"degree {text!r} is not a number") from None


# -- subcommands ---------------------------------------------------------------


def cmd_normalize(a) -> int:
    _write(a.output, print_ontology(normalize(_ontology(a.input), skip_small=not a.no_skip_small)))
    return 0


def cmd_crispify(a) -> int:
    o = _ontology(a.input)
    opts = CrispifyOptions(
        normalize=not a.no_normalize,
        skip_small=not a.no_skip_small,
        split_unions=not a.no_split_unions,
        literal_role_inclusion=a.literal_role_inclusion,
        extended=a.extended_roles,
        legacy_qnr=a.legacy_qnr,
    )
    c = crispify(o, opts)
    _write(a.output, print_ontology(c))
    if a.provenance:
        _write(a.provenance, "".join(f"{i}\t{p}\n" for i, p in enumerate(c.provenance, 1)))
    return 0


def cmd_translate_query(a) -> int:
    o = _ontology(a.ontology)
    q = parse_query(_read(a.input), o.chain, a.input)
    cuts = CutTable.of(o)
    if isinstance(q, ThresholdCQ):
        if a.degree is not None or a.all_tuples:
            raise ValidationError("threshold queries take their degrees from the atoms")
        _write(a.output, print_cq(kappa_threshold(q, cuts)))
        return 0
    if a.degree is None:
        raise ValidationError(f"translating a {type(q).__name__} needs --degree")
    d = _degree_arg(a.degree)
    if isinstance(q, FuzzyCQ):
        u = kappa_fuzzy(q, o.chain.degree(d), o.chain, cuts, a.all_tuples)
    else:
        u = kappa_scoring(q, d, o.chain, cuts, a.all_tuples)
    if not u.members:
        print("note: the query cannot reach this degree; the union is empty", file=sys.stderr)
    _write(a.output, print_ucq(u))
    return 0


def _answers(o: Ontology, arity: int):
    return itertools.product(o.individuals, repeat=arity)


def cmd_eval(a) -> int:
    o = _ontology(a.ontology)
    I = with_signature(parse_interp(_read(a.interp), o.chain, a.interp), o)
    ok = is_model(I, o)
    print(f"model: {'yes' if ok else 'no'}")
    for ax in failing_axioms(I, o):
        print(f"  violated: {ax.loc + ': ' if ax.loc else ''}{fmt_axiom(ax, o.chain)}")
    if a.query:
        q = parse_query(_read(a.query), o.chain, a.query)
        answers = [tuple(a.answer.split(","))] if a.answer else list(_answers(o, len(q.head)))
        for ans in answers:
            label = f"({', '.join(ans)})" if ans else "()"
            if isinstance(q, ThresholdCQ):
                print(f"{label}: {'yes' if query_sat(I, q, ans) else 'no'}")
            elif isinstance(q, FuzzyCQ):
                v = fuzzy_degree(I, q, ans)
                if a.degree is not None:
                    d = o.chain.degree(_degree_arg(a.degree))
                    print(f"{label}: {'yes' if v >= d else 'no'} (degree {fmt_degree(o.chain, v)})")
                else:
                    print(f"{label}: {fmt_degree(o.chain, v)}")
            else:
                s = scoring_best(I, q, ans)
                if a.degree is not None:
                    print(f"{label}: {'yes' if s >= _degree_arg(a.degree) else 'no'} (score {s})")
                else:
                    print(f"{label}: {s}")
    return 0


def cmd_search_model(a) -> int:
    o = _ontology(a.ontology)
    r = search_model(o, a.max_domain, a.budget if a.budget is not None else default_budget())
    print(f"{r.status} (max domain {r.max_domain}, {r.nodes} nodes)")
    if r.model is not None:
        sys.stdout.write(print_interp(r.model))
    return EXIT_INCONCLUSIVE if r.status == "budget_exceeded" else 0


def cmd_gen(a) -> int:
    cfg = bench.BenchConfig(
        universities=a.units, chain_size=a.chain, crisp_pct=a.crisp, seed=a.seed,
        divisor=a.divisor, family=a.family,
    )
    _write(a.output, print_ontology(bench.gen_ontology(cfg)))
    return 0


def cmd_gen_nested(a) -> int:
    _write(a.output, print_ontology(bench.gen_nested_family(a.depth, a.chain, a.family)))
    return 0


def cmd_stats(a) -> int:
    o = _ontology(a.input)
    if a.chain is not None:
        o = bench.rechain(o, Chain(a.chain, o.chain.family))
    if a.crispify:
        rows = [bench.measure(o, normalized) for normalized in (True, False)]
        _write(a.output, bench.to_csv(rows))
    else:
        text = "tbox_occurrences,abox_occurrences\n"
        text += f"{occurrences(o.tbox + o.rbox)},{occurrences(o.abox)}\n"
        _write(a.output, text)
    return 0


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crispc", description="Reduce finitely valued fuzzy ontologies and queries to classical ones.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("normalize", help="abbreviate nested concepts and long role chains")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--no-skip-small", action="store_true", help="also normalize axioms with at most three fuzzy names")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("crispify", help="reduce to a classical ontology over cut names")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--no-normalize", action="store_true")
    s.add_argument("--no-skip-small", action="store_true")
    s.add_argument("--no-split-unions", action="store_true", help="keep unions on left-hand sides intact")
    s.add_argument("--extended-roles", action="store_true", help="allow role disjunctions in the output")
    s.add_argument("--legacy-qnr", action="store_true", help="use the unsound concept-partition encoding")
    s.add_argument("--literal-role-inclusion", action="store_true",
                   help="translate simple role inclusions through the universal role")
    s.add_argument("--provenance", metavar="F", help="write an index-to-source map")
    s.set_defaults(func=cmd_crispify)

    s = sub.add_parser("translate-query", help="translate a query into a classical (U)CQ")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--ontology", required=True)
    s.add_argument("--degree")
    s.add_argument("--all-tuples", action="store_true", help="keep non-minimal degree tuples")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_translate_query)

    s = sub.add_parser("eval", help="check an interpretation against an ontology and optionally a query")
    s.add_argument("--ontology", required=True)
    s.add_argument("--interp", required=True)
    s.add_argument("--query")
    s.add_argument("--degree")
    s.add_argument("--answer", help="comma-separated individuals for the distinguished variables")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("search-model", help="bounded search for a finite model")
    s.add_argument("--ontology", required=True)
    s.add_argument("--max-domain", type=int, required=True)
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_search_model)

    s = sub.add_parser("gen", help="generate a university-style benchmark ontology")
    s.add_argument("--units", type=int, default=1)
    s.add_argument("--chain", type=int, default=3)
    s.add_argument("--crisp", type=int, default=0, help="percentage of crisp names")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--divisor", type=int, default=10)
    s.add_argument("--family", default="lukasiewicz", choices=("goedel", "lukasiewicz"))
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("gen-nested", help="generate the nested blow-up family")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--chain", type=int, default=4)
    s.add_argument("--family", default="lukasiewicz", choices=("goedel", "lukasiewicz"))
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_gen_nested)

    s = sub.add_parser("stats", help="occurrence counts as CSV")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--crispify", action="store_true", help="measure the crispified output instead")
    s.add_argument("--chain", type=int, help="reinterpret the degrees on a chain of this size first")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CrispcError as e:
        print(f"crispc: error: {e}", file=sys.stderr)
        return e.exit_code
