"""Command line front end.

Exit codes: 0 proof or match found, 1 saturated / no match within the
bound, 2 resource limit reached, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from .config import ConfigError, load_config, parse_precedence, parse_ratio
from .driver import EXIT_INPUT, EXIT_NO_PROOF, EXIT_PROOF, run, run_portfolio
from .library import (DEFAULT_NARROWING, KBFileError, KnowledgeBase, SmartMatchQuery,
                      default_kb_params)
from .ordering import ORDERINGS
from .saturation import SaturationParams
from .term import to_str
from .tptp import ParseError, Problem, parse_equation, parse_problem
from .trace import check_trace


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="smartmatch",
        description="Unit-equality superposition prover and smart matcher.")
    ap.add_argument("problem", nargs="?", help="TPTP CNF problem file (unit clauses only)")
    ap.add_argument("--ordering", choices=sorted(ORDERINGS), help="term ordering (default lpo)")
    ap.add_argument("--precedence", help='symbol precedence, e.g. "len/2 > plus/2"')
    ap.add_argument("--portfolio", nargs="?", const=",".join(sorted(ORDERINGS)), metavar="LIST",
                    help="run one process per ordering (comma list, default all)")
    ap.add_argument("--timeout", type=float, help="seconds (default 10)")
    ap.add_argument("--max-weight", type=int, help="drop generated clauses heavier than this")
    ap.add_argument("--age-weight", help="selection ratio a:w (default 1:4)")
    ap.add_argument("--narrowing", type=int, help=f"narrowing bound for --smart-match (default {DEFAULT_NARROWING})")
    ap.add_argument("--kb", help="load a knowledge base file")
    ap.add_argument("--save-kb", help="write the knowledge base after adding the problem's equations")
    ap.add_argument("--smart-match", metavar="EQ", help='query "<lhs> = <rhs>" against the library')
    ap.add_argument("--trace-out", help="write the proof trace here")
    ap.add_argument("--check", metavar="TRACE", help="replay a trace against the problem")
    ap.add_argument("--config", help="INI file with default settings")
    ap.add_argument("-q", "--quiet", action="store_true", help="no timing report")
    return ap


class InputError(Exception):
    pass


def _params(args, conf) -> SaturationParams:
    kw = {}
    for key in ("ordering", "precedence", "weights", "var_weight", "age_weight", "max_weight",
                "timeout", "max_iterations"):
        if key in conf:
            kw[key] = conf[key]
    if args.ordering:
        kw["ordering"] = args.ordering
    if args.precedence:
        kw["precedence"] = parse_precedence(args.precedence)
    if args.timeout is not None:
        if args.timeout < 0:
            raise InputError("timeout must be non-negative")
        kw["timeout"] = args.timeout
    if args.max_weight is not None:
        kw["max_weight"] = args.max_weight
    if args.age_weight:
        kw["age_weight"] = parse_ratio(args.age_weight)
    try:
        return SaturationParams(**kw)
    except ValueError as e:
        raise InputError(str(e)) from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _report(timings, quiet):
    if not quiet:
        parts = " ".join(f"{k}={v:.1f}ms" for k, v in timings.items())
        print(f"% time {parts}", file=sys.stderr)


def _smart_match(args, conf, params, problem: Optional[Problem], timings) -> int:
    if args.kb:
        try:
            t = time.perf_counter()
            kb = KnowledgeBase.load(args.kb)
            timings["load_kb"] = (time.perf_counter() - t) * 1000
        except OSError as e:
            raise InputError(f"cannot read {args.kb}: {e.strerror}") from None
        except KBFileError as e:
            raise InputError(f"{args.kb}: {e}") from None
    else:
        kb = KnowledgeBase(default_kb_params(**{k: getattr(params, k) for k in (
            "ordering", "precedence", "weights", "var_weight", "age_weight", "max_weight")}))
    locals_ = []
    if problem is not None:
        t = time.perf_counter()
        for eq in problem.library:
            kb.add_equation(eq.name, eq.left, eq.right)
        locals_ = [(eq.name, eq.left, eq.right) for eq in problem.hypotheses]
        timings["library"] = (time.perf_counter() - t) * 1000
    if args.save_kb:
        kb.save(args.save_kb)
    if not args.smart_match:
        return EXIT_PROOF
    scope = {}
    try:
        lhs, rhs = parse_equation(args.smart_match, scope=scope)
    except ParseError as e:
        raise InputError(f"--smart-match: {e}") from None
    bound = args.narrowing if args.narrowing is not None else conf.get("narrowing", DEFAULT_NARROWING)
    if bound < 0:
        raise InputError("--narrowing must be non-negative")
    t = time.perf_counter()
    res = kb.smart_match(SmartMatchQuery(lhs, rhs, locals_, bound))
    timings["smart_match"] = (time.perf_counter() - t) * 1000
    if not res.success:
        print(f"% no match within {bound} narrowing steps")
        return EXIT_NO_PROOF
    print(f"% match found ({res.narrowings} narrowing steps)")
    names = {v.id: name for name, v in scope.items()}
    for v, t in res.subst.items():
        print(f"{names[v]} := {to_str(t)}")
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as f:
            f.write(res.trace)
    return EXIT_PROOF


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    timings = {}
    try:
        conf = load_config(args.config) if args.config else {}
        params = _params(args, conf)
        problem = None
        if args.problem:
            t = time.perf_counter()
            text = _read(args.problem)
            problem = parse_problem(text, args.problem)
            timings["parse"] = (time.perf_counter() - t) * 1000
        if args.check:
            if problem is None:
                raise InputError("--check needs the problem file")
            verdict = check_trace(problem, _read(args.check))
            if verdict:
                print(f"% trace valid ({verdict.steps} steps)")
                return EXIT_PROOF
            print(f"% trace invalid at line {verdict.line}: {verdict.reason}")
            return EXIT_NO_PROOF
        if args.smart_match or args.kb or args.save_kb:
            code = _smart_match(args, conf, params, problem, timings)
            _report(timings, args.quiet)
            return code
        if problem is None:
            raise InputError("no problem file given")
        if not problem.goals:
            raise InputError("problem has no negated_conjecture to refute")
        if args.portfolio:
            kinds = [k.strip() for k in args.portfolio.split(",") if k.strip()]
            bad = [k for k in kinds if k not in ORDERINGS]
            if bad:
                raise InputError(f"unknown ordering(s) in portfolio: {', '.join(bad)}")
            res = run_portfolio(text, params, kinds)
        else:
            res = run(problem, params)
        timings["saturate"] = res.saturate_ms
        timings["trace"] = res.trace_ms
        status = {"proof": "Unsatisfiable", "saturated": "Satisfiable"}.get(res.status, "ResourceOut")
        print(f"% SZS status {status} for {args.problem} ({res.ordering}, {res.iterations} iterations)")
        if res.status.startswith("resource_out"):
            print(f"% limit reached: {res.outcome.limit}")
        if res.trace is not None:
            if args.trace_out:
                with open(args.trace_out, "w", encoding="utf-8") as f:
                    f.write(res.trace)
            else:
                sys.stdout.write(res.trace)
        _report(timings, args.quiet)
        return res.exit_code
    except (InputError, ParseError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
