"""Running problems: a single prover instance or a portfolio of orderings."""

from __future__ import annotations

import dataclasses
import multiprocessing as mp
import queue
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .saturation import Proof, ProverState, ResourceOut, SaturationParams, Saturated
from .tptp import Problem, parse_problem
from .trace import emit_trace

EXIT_PROOF = 0
EXIT_NO_PROOF = 1
EXIT_RESOURCE = 2
EXIT_INPUT = 3


@dataclass
class RunResult:
    outcome: object                   # Proof | Saturated | ResourceOut
    ordering: str
    trace: Optional[str] = None
    iterations: int = 0
    generated: int = 0
    dropped: int = 0
    saturate_ms: float = 0.0
    trace_ms: float = 0.0

    @property
    def status(self) -> str:
        if isinstance(self.outcome, Proof):
            return "proof"
        if isinstance(self.outcome, Saturated):
            return "saturated"
        return f"resource_out:{self.outcome.limit}"

    @property
    def exit_code(self) -> int:
        return exit_code(self.outcome)


def exit_code(outcome) -> int:
    if isinstance(outcome, Proof):
        return EXIT_PROOF
    if isinstance(outcome, Saturated):
        return EXIT_NO_PROOF
    return EXIT_RESOURCE


def build_state(problem: Problem, params: SaturationParams) -> ProverState:
    st = ProverState(params)
    for eq in problem.axioms:
        st.add_axiom(eq.name, eq.left, eq.right)
    for eq in problem.goals:
        st.add_goal(eq.name, eq.left, eq.right)
    return st


def run(problem: Problem, params: SaturationParams, want_trace: bool = True) -> RunResult:
    """One saturation instance on ``problem``."""
    if not problem.goals:
        raise ValueError("refutation mode needs at least one negated_conjecture")
    t0 = time.perf_counter()
    st = build_state(problem, params)
    outcome = st.run()
    t1 = time.perf_counter()
    trace = None
    if isinstance(outcome, Proof) and want_trace:
        trace = emit_trace(st.bag, outcome, st.ordering)
    t2 = time.perf_counter()
    return RunResult(outcome, params.ordering, trace, st.stats.iterations, st.stats.generated,
                     st.stats.dropped, (t1 - t0) * 1000, (t2 - t1) * 1000)


def _worker(text: str, params: SaturationParams, out) -> None:
    res = run(parse_problem(text), params)
    # Proof objects hold clauses; only the summary crosses the process boundary
    out.put(dataclasses.replace(res, outcome=_portable(res.outcome)))


def _portable(outcome):
    if isinstance(outcome, Proof):
        return Proof(None, outcome.subst, outcome.answer)
    return outcome


def run_portfolio(text: str, params: SaturationParams, orderings: Sequence[str]) -> RunResult:
    """One process per ordering; the first proof wins and the rest are stopped.

    Without a proof, any saturated run makes the result saturated (the goal
    is not provable), otherwise the result is a resource-out.
    """
    ctx = mp.get_context("spawn")
    out = ctx.Queue()
    procs = []
    for kind in orderings:
        p = ctx.Process(target=_worker, args=(text, dataclasses.replace(params, ordering=kind), out),
                        daemon=True)
        p.start()
        procs.append(p)
    results: List[RunResult] = []
    deadline = None if params.timeout is None else time.monotonic() + params.timeout + 30
    winner = None
    try:
        while len(results) < len(procs):
            wait = None if deadline is None else max(0.1, deadline - time.monotonic())
            try:
                res = out.get(timeout=wait)
            except queue.Empty:
                break
            results.append(res)
            if isinstance(res.outcome, Proof):
                winner = res
                break
    finally:
        for p in procs:
            if p.is_alive():
                p.terminate()
        for p in procs:
            p.join(timeout=5)
    if winner is not None:
        return winner
    for res in results:
        if isinstance(res.outcome, Saturated):
            return res
    if results:
        return results[0]
    return RunResult(ResourceOut("timeout"), "portfolio")
