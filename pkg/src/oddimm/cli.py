"""Command-line entry point: ``oddimm <command> [options]``.

Verdicts print one word (and a reason) on the first line and, when there is
structured detail, a JSON object on the second.

Exit codes: 0 affirmative, 1 negative result, 2 usage or parse error,
3 budget exhausted. A positive integer in ``ODDMORPH_BUDGET`` overrides the
default step budget of the searching commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import BudgetExhausted, GraphError
from .extract import run_extraction
from .generators import from_name
from .homcount import FamilyKind, FamilySpec, distinguish, hom_count_bruteforce, hom_count_td
from .immersion import find_immersion, read_witness, verify_immersion, witness_to_json
from .multigraph import format_graph, read_graph
from .oddmorph import format_colouring, read_colouring, search_oddomorphism, verify_oddomorphism
from .twidth import exact_treewidth, format_decomposition, read_decomposition, verify_tree_decomposition
from .verdict import Verdict

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("ODDMORPH_BUDGET")
    if env is None:
        return None
    try:
        value = int(env)
    except ValueError:
        raise GraphError(f"ODDMORPH_BUDGET must be an integer, got {env!r}") from None
    if value <= 0:
        raise GraphError("ODDMORPH_BUDGET must be positive")
    return value


def _kw_budget(args) -> dict:
    b = _budget(args)
    return {} if b is None else {"budget": b}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report(v: Verdict) -> int:
    print("VALID" if v.ok else f"INVALID {v.reason}")
    if v.detail:
        print(json.dumps(v.detail, sort_keys=True))
    return EXIT_OK if v.ok else EXIT_NEGATIVE


# -- commands ---------------------------------------------------------------------------


def cmd_verify_odd(args) -> int:
    return _report(verify_oddomorphism(read_graph(args.graph), read_colouring(args.colouring)))


def cmd_search_odd(args) -> int:
    f = search_oddomorphism(read_graph(args.graph), args.t, **_kw_budget(args))
    if f is None:
        print("NONE")
        return EXIT_NEGATIVE
    _emit(format_colouring(f), args.out)
    return EXIT_OK


def cmd_verify_immersion(args) -> int:
    return _report(verify_immersion(read_witness(args.witness, read_graph(args.graph))))


def cmd_find_immersion(args) -> int:
    g = read_graph(args.graph)
    h = read_graph(args.pattern) if args.pattern else from_name(args.pattern_name)
    w = find_immersion(g, h, **_kw_budget(args))
    if w is None:
        print("NONE")
        return EXIT_NEGATIVE
    _emit(witness_to_json(w), args.out)
    return EXIT_OK


def cmd_extract_immersion(args) -> int:
    result = run_extraction(read_graph(args.graph), read_colouring(args.colouring), args.t, **_kw_budget(args))
    _emit(witness_to_json(result.witness), args.out)
    if args.trace:
        Path(args.trace).write_text(result.log.to_jsonl(), encoding="utf-8")
    return EXIT_OK


def cmd_treewidth(args) -> int:
    g = read_graph(args.graph)
    width, td = exact_treewidth(g, _budget(args), args.cap)
    print(f"treewidth {width}")
    if args.out:
        _emit(format_decomposition(td, g.num_vertices), args.out)
    return EXIT_OK


def cmd_verify_td(args) -> int:
    g = read_graph(args.graph)
    n, td = read_decomposition(args.td)
    if n != g.num_vertices:
        raise GraphError(f"decomposition declares {n} vertices, graph has {g.num_vertices}")
    return _report(verify_tree_decomposition(g, td))


def cmd_homcount(args) -> int:
    f, g = read_graph(args.source), read_graph(args.target)
    count = hom_count_bruteforce if args.method == "brute" else hom_count_td
    print(count(f, g, **_kw_budget(args)))
    return EXIT_OK


def cmd_distinguish(args) -> int:
    g, h = read_graph(args.g), read_graph(args.h)
    kind = FamilyKind(args.family)
    members = tuple(read_graph(p) for p in args.member) if kind is FamilyKind.FILE_LIST else ()
    if kind is FamilyKind.FILE_LIST and not members:
        raise GraphError("the file-list family needs at least one --member")
    fam = FamilySpec(kind, args.max_size, members)
    f = distinguish(g, h, fam, jobs=args.jobs)
    if f is None:
        print(f"INDISTINGUISHABLE (bound={args.max_size})")
        return EXIT_NEGATIVE
    counts = [hom_count_td(f, g), hom_count_td(f, h)]
    doc = {"counts": counts, "edges": [list(p) for _, p in sorted(f.edges.items())], "n": f.num_vertices}
    print("DISTINGUISHED")
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_check_tw_bound(args) -> int:
    g, f = read_graph(args.graph), read_colouring(args.colouring)
    v = verify_oddomorphism(g, f)
    if not v:
        return _report(v)
    width, _ = exact_treewidth(g, _budget(args), args.cap)
    holds = width >= f.t - 1
    doc = {"t": f.t, "treewidth": width, "tight": width == f.t - 1}
    print("HOLDS" if holds else "VIOLATED")
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_generate(args) -> int:
    try:
        g = from_name(args.name)
    except ValueError as exc:
        raise GraphError(str(exc)) from None
    _emit(format_graph(g), args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oddimm", description="Oddomorphisms, immersions, treewidth and homomorphism counts.")
    p.add_argument("--version", action="version", version=f"oddimm {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, budget=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        if budget:
            sp.add_argument("--budget", type=int, default=None, help="step budget (overrides ODDMORPH_BUDGET)")
        return sp

    sp = add("verify-odd", cmd_verify_odd, "check that a colouring is an oddomorphism")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--colouring", required=True)

    sp = add("search-odd", cmd_search_odd, "search for a t-oddomorphism", budget=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("-t", type=int, required=True)
    sp.add_argument("--out")

    sp = add("verify-immersion", cmd_verify_immersion, "check an immersion witness")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--witness", required=True)

    sp = add("find-immersion", cmd_find_immersion, "exact immersion search", budget=True)
    sp.add_argument("--graph", required=True)
    pat = sp.add_mutually_exclusive_group(required=True)
    pat.add_argument("--pattern", help="pattern graph file")
    pat.add_argument("--pattern-name", help="named pattern such as K3")
    sp.add_argument("--out")

    sp = add("extract-immersion", cmd_extract_immersion, "extract a K_t immersion from an oddomorphism", budget=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--colouring", required=True)
    sp.add_argument("-t", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--trace", help="write the operation log as JSON lines")

    sp = add("treewidth", cmd_treewidth, "exact treewidth", budget=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cap", type=int, default=18, help="largest component size attempted")
    sp.add_argument("--out", help="write the decomposition here")

    sp = add("verify-td", cmd_verify_td, "check a tree decomposition")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--td", required=True)

    sp = add("homcount", cmd_homcount, "count homomorphisms", budget=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--method", choices=("td", "brute"), default="td")

    sp = add("distinguish", cmd_distinguish, "search a family for a distinguishing pattern")
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--family", required=True, choices=[k.value for k in FamilyKind])
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--member", action="append", default=[], help="graph file (file-list family)")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("check-tw-bound", cmd_check_tw_bound, "compare treewidth with t - 1", budget=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--colouring", required=True)
    sp.add_argument("--cap", type=int, default=18)

    sp = add("generate", cmd_generate, "write a named graph")
    sp.add_argument("name", help="e.g. K5, C6, P4, K3,3, E2, 2K3+K1")
    sp.add_argument("--out")
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"BUDGET-EXHAUSTED {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
