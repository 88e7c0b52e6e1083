"""Persistent equational knowledge base and smart matching.

The library's equations form the *active* set of a prover state. Inserting
an equation runs one given-clause pass on it (simplify, activate,
backward-simplify, compose with every active equation) and leaves the
products in a persistent passive set. Queries run in an overlay that can read
the library but never changes it.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .clause import Axiom, UnitClause, is_tautology, new_clause, subsumes
from .ordering import Orientation, Precedence
from .saturation import Proof, ProverState, SaturationParams
from .term import App, Substitution, Term, Var, quote_name, to_str, variables
from .tptp import Equation, ParseError, Problem
from .trace import _LineParser, _parse_symbol, clause_line, emit_trace, parse_clause_line

KB_FORMAT = "smartmatch-kb"
KB_VERSION = 1
ANSWER = "$answer"
DEFAULT_NARROWING = 3


class KBFileError(Exception):
    """A knowledge-base file could not be loaded."""


class FormatError(KBFileError):
    pass


class VersionError(KBFileError):
    pass


@dataclass
class InsertResult:
    name: str
    status: str                       # "added" or "subsumed"
    clause: Optional[UnitClause]
    generated: int = 0
    dropped: int = 0


@dataclass
class SmartMatchQuery:
    lhs: Term
    rhs: Term
    local_equations: Sequence[Tuple[str, Term, Term]] = ()
    max_narrowing: int = DEFAULT_NARROWING


@dataclass
class SmartMatchResult:
    """``narrowings`` is the depth of the closing goal on success and the
    number of narrowing inferences tried on failure."""
    success: bool
    subst: Substitution
    trace: str = ""
    narrowings: int = 0
    generated: int = 0
    answers: List[Substitution] = field(default_factory=list)
    proof: Optional[Proof] = None
    outcome: object = None
    problem: Optional[Problem] = None


def default_kb_params(**kw) -> SaturationParams:
    kw.setdefault("eager_simplify", False)
    kw.setdefault("timeout", None)
    return SaturationParams(**kw)


class KnowledgeBase:
    def __init__(self, params: Optional[SaturationParams] = None):
        self.params = params or default_kb_params()
        self.state = ProverState(self.params)
        self.log: List[Tuple[str, Term, Term]] = []

    # -- views --------------------------------------------------------------

    @property
    def active(self) -> List[UnitClause]:
        return [self.state.active[i] for i in sorted(self.state.active)]

    @property
    def passive(self) -> List[UnitClause]:
        return sorted(self.state.passive, key=lambda c: c.id)

    def status(self, cid: int) -> str:
        if cid in self.state.active:
            return "active"
        if cid in self.state.passive:
            return "passive"
        return "dead"

    def fingerprint(self) -> tuple:
        """Hashable summary of every clause and its status."""
        return tuple((c.id, self.status(c.id), clause_line(c)) for c in self.state.bag)

    def problem(self) -> Problem:
        return Problem([Equation(n, "axiom", True, l, r) for n, l, r in self.log])

    # -- insertion ----------------------------------------------------------

    def _subsumed_by_active(self, c: UnitClause) -> bool:
        st = self.state
        for e in st.rules.retrieve_generalizations(c.left):
            if e.clause_id != c.id and subsumes(st.bag[e.clause_id], c):
                return True
        return False

    def add_equation(self, name: str, left: Term, right: Term) -> InsertResult:
        st = self.state
        bag = st.bag
        mark = (bag.next_id, bag.next_var)
        c = new_clause(bag, True, left, right, Axiom(name), st.ordering)
        d = st.demodulate(c)
        if is_tautology(d) or self._subsumed_by_active(d):
            bag.truncate(*mark)
            return InsertResult(name, "subsumed", None)
        self.log.append((name, left, right))
        generated0, dropped0 = st.stats.generated, st.stats.dropped
        work = [d]
        first = True
        while work:
            g = work.pop(0)
            if not first:
                g = st.demodulate(g)
                if is_tautology(g) or self._subsumed_by_active(g):
                    continue
            first = False
            st.activate(g)
            work.extend(st.backward_simplify(g))
            for p in st.infer(g):
                st.add_new(p, simplify=False)
        return InsertResult(name, "added", d, st.stats.generated - generated0,
                            st.stats.dropped - dropped0)

    def saturate(self, steps: int):
        """Run ``steps`` further given-clause iterations on the library."""
        st = self.state
        st.params = dataclasses.replace(st.params, max_iterations=st.stats.iterations + steps)
        try:
            return st.run()
        finally:
            st.params = self.params

    # -- queries ------------------------------------------------------------

    def smart_match(self, query: SmartMatchQuery, all_answers: bool = False,
                    timeout: Optional[float] = None) -> SmartMatchResult:
        """Look for σ with lhs·σ equal to rhs·σ modulo the library, by bounded narrowing.

        The returned substitution covers the variables of both sides (those
        of ``rhs`` act as metavariables of the goal).
        """
        params = dataclasses.replace(
            self.params, infer_facts=False, privilege_goals=True, max_narrowing=query.max_narrowing,
            all_answers=all_answers, timeout=timeout, max_iterations=None, eager_simplify=True)
        q = ProverState(params, base=self.state)
        # rhs variables are metavariables of the goal; report them too
        qvars = list(dict.fromkeys(variables(query.lhs) + variables(query.rhs)))
        answer = App(ANSWER, tuple(Var(v) for v in qvars))
        for name, l, r in query.local_equations:
            c = q.new_clause(True, l, r, Axiom(name))
            q._enqueue(c, privileged=True)
        q.add_goal("query", query.lhs, query.rhs, answer=answer)
        outcome = q.run()
        problem = Problem(
            [Equation(n, "axiom", True, l, r) for n, l, r in self.log]
            + [Equation(n, "hypothesis", True, l, r) for n, l, r in query.local_equations]
            + [Equation("query", "negated_conjecture", False, query.lhs, query.rhs)])
        answers = []
        for proof in q.proofs:
            sub = dict(zip(qvars, proof.answer.args))
            if sub not in answers:
                answers.append(sub)
        result = SmartMatchResult(False, {}, narrowings=q.stats.narrowings,
                                  generated=q.stats.generated, answers=answers, outcome=outcome,
                                  problem=problem)
        if q.proofs:
            best = q.proofs[0]
            result.success = True
            result.proof = best
            result.subst = answers[0]
            result.narrowings = best.goal.depth
            result.trace = emit_trace(q.bag, best, q.ordering)
        return result

    # -- persistence --------------------------------------------------------

    def save(self, path) -> None:
        st = self.state
        ordering = st.ordering
        p = self.params
        lines = [f"#{KB_FORMAT} {KB_VERSION}",
                 f"#ordering {ordering.name}",
                 "#precedence " + " ".join(f"{quote_name(n)}/{a}" for n, a in ordering.precedence.order)]
        weights = getattr(ordering, "weights", None)
        if weights is not None:
            items = [f"{quote_name(n)}/{a}={w}" for (n, a), w in sorted(weights.items())]
            lines.append(f"#weights {ordering.var_weight} " + " ".join(items))
        lines.append(f"#params age_weight={p.age_weight[0]}:{p.age_weight[1]} "
                     f"max_weight={p.max_weight} picks={st.passive.picks}")
        for name, l, r in self.log:
            lines.append(f"#log {quote_name(name)} {to_str(l)} = {to_str(r)}")
        lines.append(f"#next {st.bag.next_id} {st.bag.next_var}")
        for c in st.bag:
            lines.append(f"{self.status(c.id)} {c.orientation.value} {clause_line(c)}")
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path, params: Optional[SaturationParams] = None) -> "KnowledgeBase":
        with open(path, encoding="utf-8") as f:
            text = f.read()
        return cls.loads(text, params)

    @classmethod
    def loads(cls, text: str, params: Optional[SaturationParams] = None) -> "KnowledgeBase":
        lines = text.splitlines()
        if not lines or not lines[0].startswith(f"#{KB_FORMAT} "):
            raise FormatError("not a knowledge-base file (missing header)")
        try:
            version = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise FormatError("malformed version header") from None
        if version > KB_VERSION:
            raise VersionError(f"file format version {version} is newer than supported {KB_VERSION}")
        if version < 1:
            raise FormatError(f"bad format version {version}")
        try:
            return cls._parse(lines[1:], params)
        except (ParseError, ValueError, KeyError, IndexError) as e:
            raise FormatError(f"corrupted knowledge base: {e}") from None

    @classmethod
    def _parse(cls, lines, params):
        kind, order, weights, var_weight = "lpo", [], None, 1
        age_weight, max_weight, picks = (1, 4), 100, 0
        log, nxt, rows = [], None, []
        for lineno, raw in enumerate(lines, 2):
            s = raw.strip()
            if not s:
                continue
            if s.startswith("#"):
                key, _, rest = s[1:].partition(" ")
                p = _LineParser(rest)
                if key == "ordering":
                    kind = rest.strip()
                elif key == "precedence":
                    while p.tok.kind != "eof":
                        order.append(_parse_symbol(p))
                elif key == "weights":
                    var_weight = p.integer()
                    weights = {}
                    while p.tok.kind != "eof":
                        sym = _parse_symbol(p)
                        p.expect("=")
                        weights[sym] = p.integer()
                elif key == "params":
                    kv = dict(item.split("=", 1) for item in rest.split())
                    a, w = kv["age_weight"].split(":")
                    age_weight, max_weight, picks = (int(a), int(w)), int(kv["max_weight"]), int(kv["picks"])
                elif key == "log":
                    name = p.name()
                    l = p.term()
                    p.expect("=")
                    r = p.term()
                    p.done()
                    log.append((name, l, r))
                elif key == "next":
                    a, b = rest.split()
                    nxt = (int(a), int(b))
                else:
                    raise ValueError(f"line {lineno}: unknown header {key!r}")
                continue
            status, orient, rest = s.split(" ", 2)
            if status not in ("active", "passive", "dead"):
                raise ValueError(f"line {lineno}: bad status {status!r}")
            rows.append((lineno, status, Orientation(orient), parse_clause_line(rest, lineno)))
        if nxt is None:
            raise ValueError("missing #next line")
        if params is None:
            params = default_kb_params()
        params = dataclasses.replace(params, ordering=kind, precedence=Precedence(order),
                                     weights=weights, var_weight=var_weight, age_weight=age_weight, max_weight=max_weight)
        kb = cls(params)
        kb.log = log
        st = kb.state
        bag = st.bag
        for lineno, status, orient, line in rows:
            c = UnitClause(line.id, line.positive, line.left, line.right, orient,
                           line.left.size + line.right.size, line.step())
            if st.ordering.orient(c.left, c.right) is not orient:
                raise ValueError(f"line {lineno}: orientation flag disagrees with the ordering")
            if line.vars != c.variables():
                raise ValueError(f"line {lineno}: variable list does not match the clause")
            bag.register(c)
            if status == "active":
                st.activate(c)
            elif status == "passive":
                st._enqueue(c)
        if nxt[0] < bag.next_id or nxt[1] < bag.next_var:
            raise ValueError("#next is behind the stored clauses")
        bag.next_id, bag.next_var = nxt
        st.first_own_id = 0
        st.passive.picks = picks
        return kb
