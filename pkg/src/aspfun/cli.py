"""Command-line front-end: ``aspfun <command> FILE [options]``.

Exit codes: 0 success or consistent, 1 inconsistent or no answer set,
2 budget exhausted, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from .consistency import Budget, BudgetExhausted, Consistent, is_consistent
from .forbidden import ForbiddenBudget, SignedPair, forbidden_oracle, is_forbidden
from .ground import ground_with_terms, herbrand_terms, sorted_rules
from .ground_nf import ground_not_forbidden
from .solve import enumerate_answer_sets
from .syntax import format_program, parse_atom, parse_program
from .reductions import parse_tiling, parse_tm, tiling_to_program, tm_to_program
from .terms import AspError, ResourceExceeded, sorted_atoms

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-iter", type=_positive, default=100, metavar="N",
                        help="level iterations (default 100)")
    common.add_argument("--max-atoms", type=_positive, default=10**5, metavar="N")
    common.add_argument("--max-rules", type=_positive, default=Budget().max_ground_rules,
                        metavar="N", help="ground rule cap")
    common.add_argument("--max-nodes", type=_positive, default=Budget().max_nodes,
                        metavar="N", help="solver search nodes")
    common.add_argument("--max-depth", type=_positive, default=ForbiddenBudget().max_depth,
                        metavar="N", help="forbidden-test recursion depth")
    common.add_argument("--max-calls", type=_positive, default=ForbiddenBudget().max_calls,
                        metavar="N", help="forbidden-test calls per query")

    ap = _Parser(prog="aspfun", description="Answer set programs with function symbols.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="echo the canonical program")
    p.add_argument("file")

    p = sub.add_parser("ground", parents=[common], help="ground a program")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--depth", type=_nonneg, default=None, metavar="D",
                      help="naive grounding over terms of depth <= D (default 3)")
    mode.add_argument("--not-forbidden", action="store_true",
                      help="level grounding with forbidden heads turned into constraints")

    p = sub.add_parser("solve", parents=[common], help="answer sets of the depth-D grounding")
    p.add_argument("file")
    p.add_argument("--depth", type=_nonneg, default=3, metavar="D")
    p.add_argument("--limit", type=_positive, default=None, metavar="K")

    p = sub.add_parser("check", parents=[common], help="search for a finite answer set")
    p.add_argument("file")
    p.add_argument("--prune-forbidden", action="store_true")

    p = sub.add_parser("forbidden", parents=[common], help="test whether an atom is forbidden")
    p.add_argument("file")
    p.add_argument("--atom", required=True, action="append",
                   help="ground atom; repeat for several")
    p.add_argument("--neg", action="append", default=[], metavar="ATOM",
                   help="atom required false")
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("gen", parents=[common], help="emit a reduction program")
    p.add_argument("kind", choices=("tiling", "tm"))
    p.add_argument("file", metavar="SPEC")
    p.add_argument("--input", default=None, metavar="W",
                   help="fixed input word over 0/1 (tm only)")
    return ap


def _budget(args) -> Budget:
    return Budget(max_iterations=args.max_iter, max_atoms=args.max_atoms,
                  max_ground_rules=args.max_rules, max_nodes=args.max_nodes,
                  forbidden=ForbiddenBudget(args.max_depth, args.max_calls))


def _budget_doc(args) -> dict:
    return {"max_iterations": args.max_iter, "max_atoms": args.max_atoms,
            "max_ground_rules": args.max_rules, "max_nodes": args.max_nodes,
            "max_depth": args.max_depth, "max_calls": args.max_calls}


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}")


def _atoms(atoms) -> list:
    return [str(a) for a in sorted_atoms(atoms)]


def _rules(rules) -> list:
    return [str(r) for r in sorted_rules(rules)]


def _set_text(atoms) -> str:
    return "{" + ", ".join(_atoms(atoms)) + "}"


def cmd_parse(args, report):
    p = parse_program(_read(args.file))
    report.update(outcome="ok", rules=len(p))
    return EXIT_OK, format_program(p).splitlines(), {"program": [str(r) for r in p]}


def cmd_ground(args, report):
    p = parse_program(_read(args.file))
    budget = _budget(args)
    if args.not_forbidden:
        g = ground_not_forbidden(p, forbidden_oracle(p, budget.forbidden), budget)
        rules = g.sorted()
        report.update(outcome="complete" if g.complete else "budget-exhausted",
                      iterations=g.levels, constraints_added=g.constraints_added)
        code = EXIT_OK if g.complete else EXIT_BUDGET
    else:
        depth = 3 if args.depth is None else args.depth
        try:
            rules = sorted_rules(ground_with_terms(p, herbrand_terms(p, depth), args.max_rules))
        except ResourceExceeded as e:
            report.update(outcome="budget-exhausted", reason=str(e), depth=depth)
            return EXIT_BUDGET, [f"% budget exhausted: {e}"], {"rules": []}
        report.update(outcome="complete", depth=depth)
        code = EXIT_OK
    text = [str(r) for r in rules]
    report["usage"]["rules"] = len(rules)
    if code != EXIT_OK:
        text.append(f"% budget exhausted after {report['iterations']} levels")
    return code, text, {"rules": text}


def cmd_solve(args, report):
    p = parse_program(_read(args.file))
    report["depth"] = args.depth
    try:
        g = ground_with_terms(p, herbrand_terms(p, args.depth), args.max_rules)
        found = enumerate_answer_sets(g, args.limit, args.max_nodes)
    except ResourceExceeded as e:
        report.update(outcome="budget-exhausted", reason=str(e))
        return EXIT_BUDGET, [f"budget exhausted: {e}"], {"answer_sets": []}
    report["usage"]["rules"] = len(g)
    report.update(outcome="satisfiable" if found else "unsatisfiable")
    text = [f"Answer {k}: {_set_text(a)}" for k, a in enumerate(found, 1)]
    text.append(f"answer sets: {len(found)}")
    return (EXIT_OK if found else EXIT_NEGATIVE), text, {
        "answer_sets": [_atoms(a) for a in found]}


def cmd_check(args, report):
    p = parse_program(_read(args.file))
    budget = _budget(args)
    pruning = forbidden_oracle(p, budget.forbidden) if args.prune_forbidden else None
    o = is_consistent(p, budget, pruning)
    report.update(outcome=o.name, iterations=o.iterations)
    text = [f"outcome: {o.name}", f"iterations: {o.iterations}"]
    if isinstance(o, Consistent):
        report["witness"] = _atoms(o.witness)
        report["usage"]["atoms"] = len(o.witness)
        text.append(f"witness: {_set_text(o.witness)}")
        return EXIT_OK, text, {}
    if isinstance(o, BudgetExhausted):
        report["reason"] = o.reason
        report["usage"]["atoms"] = len(o.last_level)
        text.append(f"reason: {o.reason}")
        return EXIT_BUDGET, text, {}
    return EXIT_NEGATIVE, text, {}


def cmd_forbidden(args, report):
    p = parse_program(_read(args.file))
    try:
        pos = [parse_atom(a) for a in args.atom]
        neg = [parse_atom(a) for a in args.neg]
    except AspError as e:
        raise UsageError(f"bad atom: {e}")
    for a in pos + neg:
        if not a.is_ground():
            raise UsageError(f"atom is not ground: {a}")
    budget = ForbiddenBudget(args.max_depth, args.max_calls)
    res = is_forbidden(p, SignedPair.of(pos, neg), budget, trace=args.trace)
    verdict = "true" if res.verdict else "false"
    report.update(outcome=verdict, calls=res.calls, exhausted=res.exhausted)
    text = [str(e) for e in res.trace]
    text.append(f"verdict: {verdict}")
    extra = {"verdict": res.verdict}
    if args.trace:
        extra["trace"] = [str(e) for e in res.trace]
    return EXIT_OK, text, extra


def cmd_gen(args, report):
    spec = _read(args.file)
    if args.kind == "tiling":
        if args.input is not None:
            raise UsageError("--input applies to tm only")
        p = tiling_to_program(parse_tiling(spec))
    else:
        p = tm_to_program(parse_tm(spec), args.input)
    report.update(outcome="ok", rules=len(p))
    lines = format_program(p).splitlines()
    return EXIT_OK, lines, {"program": lines}


COMMANDS = {"parse": cmd_parse, "ground": cmd_ground, "solve": cmd_solve,
            "check": cmd_check, "forbidden": cmd_forbidden, "gen": cmd_gen}


def run(argv: Sequence[str], out=None, err=None) -> int:
    """Execute one command; writes the report to ``out`` and returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    report = {"command": [args.command] + ([args.kind] if args.command == "gen" else [])
              + [args.file], "outcome": None, "witness": None, "iterations": None,
              "budget": _budget_doc(args), "usage": {}}
    start = time.perf_counter()
    try:
        code, text, extra = COMMANDS[args.command](args, report)
    except (UsageError, AspError, ValueError) as e:
        print(f"aspfun: error: {e}", file=err)
        return EXIT_USAGE
    report["usage"]["wall_time"] = round(time.perf_counter() - start, 6)
    if args.format == "json":
        report.update(extra)
        report["exit_code"] = code
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for line in text:
            print(line, file=out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
