"""Proof traces: emission and an independent replay checker.

Trace text format (one item per line)::

    #trace 1
    #ordering lpo
    #precedence mult/2 inv/1 e/0 a/0
    #weights <var weight> mult/2=1 ...           (KBO family only)
    <id> <+|-> [<vars>] <lhs> = <rhs> ; <step>
    ...
    $empty ; eq_res(<goal id>,{<subst>})

``<vars>`` lists the clause's variables by first occurrence, ``<step>`` is
one of ``axiom(<name>)``, ``goal(<name>)`` or
``<rule>(<rule id>,<target id>,<lr|rl>,[<position>],{<subst>})`` with
``<rule>`` in ``sup_right``, ``sup_left``, ``demod``, ``rewrite``. Positions
start with the side index of the target (1 = lhs, 2 = rhs). Substitutions
are ``X<i>-><term>`` entries sorted by variable id. Terms use the internal
grammar of :mod:`smartmatch.tptp`.

When a clause acts on itself, the rule copy has every variable ``X<i>``
renamed to ``X<i+k>`` where ``k`` is one more than the largest variable id
of the clause.

The checker re-derives every line with unification, matching and
``replace_at`` only, re-checks the ordering side conditions of each rule and
accepts iff the single terminal line closes a goal lineage by a syntactic
identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .clause import Axiom, ClauseBag, GoalStep, Inferred, Rule, UnitClause
from .ordering import GT, INCOMPARABLE, Orientation, Precedence, TermOrdering, make_ordering
from .saturation import GUARD, Proof
from .term import (Substitution, Term, Var, apply, is_variant, match, quote_name, replace_at,
                   shift_vars, subterm_at, to_str, unify, unify_pairs, variables)
from .tptp import ParseError, Problem, _Parser

FORMAT_VERSION = 1
_DIRS = {"lr": Orientation.LEFT_TO_RIGHT, "rl": Orientation.RIGHT_TO_LEFT}


def subst_str(s: Substitution) -> str:
    return "{" + ",".join(f"X{v}->{to_str(s[v])}" for v in sorted(s)) + "}"


def step_str(step) -> str:
    if isinstance(step, Axiom):
        return f"axiom({quote_name(step.name)})"
    if isinstance(step, GoalStep):
        return f"goal({quote_name(step.name)})"
    pos = ",".join(str(i) for i in step.position)
    return (f"{step.rule.value}({step.parent1},{step.parent2},{step.direction.value},"
            f"[{pos}],{subst_str(step.subst)})")


def clause_line(c: UnitClause) -> str:
    vs = ",".join(f"X{v}" for v in c.variables())
    sign = "+" if c.positive else "-"
    return f"{c.id} {sign} [{vs}] {to_str(c.left)} = {to_str(c.right)} ; {step_str(c.step)}"


def ancestors(bag: ClauseBag, cid: int) -> List[UnitClause]:
    seen: Dict[int, UnitClause] = {}
    stack = [cid]
    while stack:
        i = stack.pop()
        if i in seen:
            continue
        c = bag[i]
        seen[i] = c
        if isinstance(c.step, Inferred):
            stack.extend(c.step.parents())
    return [seen[i] for i in sorted(seen)]


def symbols_of(clauses) -> set:
    out = set()

    def walk(t):
        if type(t) is not Var:
            out.add(t.symbol)
            for a in t.args:
                walk(a)
    for c in clauses:
        walk(c.left)
        walk(c.right)
        for t in getattr(c.step, "subst", {}).values():
            walk(t)
    return out


def emit_trace(bag: ClauseBag, proof: Proof, ordering: TermOrdering) -> str:
    """Render the ancestors of ``proof`` (topologically sorted) as trace text."""
    clauses = ancestors(bag, proof.goal.id)
    lines = [f"#trace {FORMAT_VERSION}", f"#ordering {ordering.name}"]
    syms = ordering.precedence.sorted(symbols_of(clauses) | {("$true", 0)})
    lines.append("#precedence " + " ".join(f"{quote_name(n)}/{a}" for n, a in syms))
    weights = getattr(ordering, "weights", None)
    if weights is not None:
        items = [f"{quote_name(n)}/{a}={w}" for (n, a), w in sorted(weights.items())]
        lines.append(f"#weights {getattr(ordering, 'var_weight', 1)} " + " ".join(items))
    lines.extend(clause_line(c) for c in clauses)
    lines.append(f"$empty ; eq_res({proof.goal.id},{subst_str(proof.subst)})")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ parsing

@dataclass
class TraceLine:
    lineno: int
    id: int
    positive: bool
    vars: List[int]
    left: Term
    right: Term
    kind: str                      # axiom, goal or a Rule value
    name: str = ""
    parent1: int = -1
    parent2: int = -1
    direction: Optional[Orientation] = None
    position: Tuple[int, ...] = ()
    subst: Optional[Substitution] = None

    def step(self):
        """The proof step this line records."""
        if self.kind == "axiom":
            return Axiom(self.name)
        if self.kind == "goal":
            return GoalStep(self.name)
        return Inferred(Rule(self.kind), self.parent1, self.parent2, self.direction,
                        self.position, self.subst)


@dataclass
class Terminal:
    lineno: int
    goal: int
    subst: Substitution


@dataclass
class Trace:
    ordering: TermOrdering
    lines: List[TraceLine]
    terminals: List[Terminal]


class _LineParser(_Parser):
    def __init__(self, text):
        super().__init__(text, internal=True)

    def integer(self) -> int:
        tok = self.next()
        if tok.kind != "number" or not tok.text.isdigit():
            self.error(f"expected a number, found {tok.text!r}", tok)
        return int(tok.text)

    def name(self) -> str:
        tok = self.next()
        if tok.kind == "quoted":
            return tok.text[1:-1].replace("\\'", "'").replace("\\\\", "\\")
        if tok.kind not in ("word", "number"):
            self.error(f"expected a name, found {tok.text!r}", tok)
        return tok.text

    def var(self) -> int:
        tok = self.tok
        t = self.term()
        if type(t) is not Var:
            self.error("expected a variable", tok)
        return t.id

    def subst(self) -> Substitution:
        self.expect("{")
        out: Substitution = {}
        if not self.at("}"):
            while True:
                v = self.var()
                self.expect("-")
                self.expect(">")
                if v in out:
                    self.error(f"variable X{v} bound twice")
                out[v] = self.term()
                if not self.at(","):
                    break
                self.next()
        self.expect("}")
        return out

    def done(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")


def _parse_symbol(p: _LineParser):
    name = p.name()
    p.expect("/")
    return (name, p.integer())


def parse_clause_line(text: str, lineno: int = 0) -> TraceLine:
    """Parse one ``<id> <sign> [<vars>] <lhs> = <rhs> ; <step>`` line."""
    p = _LineParser(text)
    cid = p.integer()
    sign = p.next().text
    if sign not in ("+", "-"):
        p.error("expected sign + or -")
    p.expect("[")
    vs = []
    if not p.at("]"):
        vs.append(p.var())
        while p.at(","):
            p.next()
            vs.append(p.var())
    p.expect("]")
    left = p.term()
    p.expect("=")
    right = p.term()
    p.expect(";")
    rule = p.name()
    p.expect("(")
    line = TraceLine(lineno, cid, sign == "+", vs, left, right, rule)
    if rule in ("axiom", "goal"):
        line.name = p.name()
    elif rule in {r.value for r in Rule} - {"eq_res"}:
        line.parent1 = p.integer()
        p.expect(",")
        line.parent2 = p.integer()
        p.expect(",")
        d = p.name()
        if d not in _DIRS:
            p.error(f"bad direction {d!r}")
        line.direction = _DIRS[d]
        p.expect(",")
        p.expect("[")
        pos = [p.integer()]
        while p.at(","):
            p.next()
            pos.append(p.integer())
        p.expect("]")
        line.position = tuple(pos)
        p.expect(",")
        line.subst = p.subst()
    else:
        p.error(f"unknown rule {rule!r}")
    p.expect(")")
    p.done()
    return line


def parse_trace(text: str) -> Trace:
    kind = "lpo"
    order: List = []
    weights: Optional[Dict] = None
    var_weight = 1
    lines: List[TraceLine] = []
    terminals: List[Terminal] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s:
            continue
        try:
            if s.startswith("#"):
                key, _, rest = s[1:].partition(" ")
                if key == "trace":
                    if rest.strip() != str(FORMAT_VERSION):
                        raise ParseError(f"unsupported trace version {rest.strip()!r}")
                elif key == "ordering":
                    kind = rest.strip()
                elif key == "precedence":
                    p = _LineParser(rest)
                    while p.tok.kind != "eof":
                        order.append(_parse_symbol(p))
                elif key == "weights":
                    p = _LineParser(rest)
                    var_weight = p.integer()
                    weights = {}
                    while p.tok.kind != "eof":
                        sym = _parse_symbol(p)
                        p.expect("=")
                        weights[sym] = p.integer()
                else:
                    raise ParseError(f"unknown header {key!r}")
                continue
            p = _LineParser(s)
            if s.startswith("$empty"):
                p.next()
                p.expect(";")
                if p.name() != "eq_res":
                    p.error("terminal must be eq_res")
                p.expect("(")
                gid = p.integer()
                p.expect(",")
                sub = p.subst()
                p.expect(")")
                p.done()
                terminals.append(Terminal(lineno, gid, sub))
                continue
            lines.append(parse_clause_line(s, lineno))
        except ParseError as e:
            raise ParseError(e.message, lineno, e.col) from None
    ordering = make_ordering(kind, Precedence(order), weights, var_weight)
    return Trace(ordering, lines, terminals)


# ------------------------------------------------------------------ checking

@dataclass
class Valid:
    steps: int

    def __bool__(self):
        return True


@dataclass
class Invalid:
    line: int
    reason: str

    def __bool__(self):
        return False


class _Reject(Exception):
    pass


def _not_smaller(ordering, s, t) -> bool:
    c = ordering.compare(s, t)
    return c is GT or c is INCOMPARABLE


def _check_line(line: TraceLine, seen: Dict[int, TraceLine], problem: Problem, ordering) -> None:
    if line.vars != variables_of(line.left, line.right):
        raise _Reject("variable list does not match the clause")
    if line.kind in ("axiom", "goal"):
        want_pos = line.kind == "axiom"
        for eq in problem.clauses:
            if eq.name == line.name and eq.positive == want_pos:
                if line.positive != want_pos:
                    raise _Reject("wrong sign for an input clause")
                if not is_variant((line.left, line.right), (eq.left, eq.right)):
                    raise _Reject(f"clause differs from input {line.name!r}")
                return
        raise _Reject(f"no input clause named {line.name!r}")
    for pid in (line.parent1, line.parent2):
        if pid not in seen:
            raise _Reject(f"parent {pid} does not precede this line")
    rule, target = seen[line.parent1], seen[line.parent2]
    if not rule.positive:
        raise _Reject("rule parent is not a positive equation")
    kind = line.kind
    if kind == "sup_right" and not (target.positive and line.positive):
        raise _Reject("superposition right needs positive clauses")
    if kind in ("sup_left", "rewrite") and (target.positive or line.positive):
        raise _Reject(f"{kind} needs a negative target and conclusion")
    if kind == "demod" and target.positive != line.positive:
        raise _Reject("demodulation changed the sign")
    l, r = rule.left, rule.right
    if line.direction is Orientation.RIGHT_TO_LEFT:
        l, r = r, l
    if rule.id == target.id:
        vs = variables_of(rule.left, rule.right)
        k = 1 + max(vs) if vs else 0
        l, r = shift_vars(l, k), shift_vars(r, k)
    side, path = line.position[0], line.position[1:]
    if side not in (1, 2):
        raise _Reject("position must start with side 1 or 2")
    t1 = target.left if side == 1 else target.right
    t2 = target.right if side == 1 else target.left
    sub = subterm_at(t1, path)
    if sub is None:
        raise _Reject("position does not exist in the target")
    if type(sub) is Var:
        raise _Reject("rewrite at a variable position")
    if kind == "demod":
        sigma = match(l, sub)
        if sigma is None or sigma != line.subst:
            raise _Reject("recorded substitution is not the matcher")
        lhs, rhs = apply(sigma, l), apply(sigma, r)
        if lhs != sub or ordering.compare(lhs, rhs) is not GT:
            raise _Reject("ordering violated: demodulation step is not decreasing")
        GUARD.steps += 1
        new_t1, new_t2 = replace_at(t1, path, rhs), t2
    elif kind == "rewrite":
        if path:
            raise _Reject("closing rewrite must act at a side root")
        sigma = unify_pairs([(l, t1), (r, t2)])
        if sigma is None or sigma != line.subst:
            raise _Reject("recorded substitution is not the unifier")
        new_t1, new_t2 = apply(sigma, r), apply(sigma, t2)
    else:
        sigma = unify(l, sub)
        if sigma is None or sigma != line.subst:
            raise _Reject("recorded substitution is not the unifier")
        if not _not_smaller(ordering, apply(sigma, l), apply(sigma, r)):
            raise _Reject("ordering violated: rule instance is not maximal")
        if not _not_smaller(ordering, apply(sigma, t1), apply(sigma, t2)):
            raise _Reject("ordering violated: rewritten side is not maximal")
        new_t1, new_t2 = apply(sigma, replace_at(t1, path, r)), apply(sigma, t2)
    expected = (new_t1, new_t2) if side == 1 else (new_t2, new_t1)
    if not is_variant((line.left, line.right), expected):
        raise _Reject("conclusion does not follow from the recorded step")


def variables_of(left: Term, right: Term) -> List[int]:
    seen = dict.fromkeys(variables(left))
    seen.update(dict.fromkeys(variables(right)))
    return list(seen)


def check_trace(problem: Problem, trace: Union[str, Trace]) -> Union[Valid, Invalid]:
    """Replay ``trace`` against the input clauses of ``problem``."""
    if isinstance(trace, str):
        try:
            trace = parse_trace(trace)
        except (ParseError, ValueError) as e:
            return Invalid(getattr(e, "line", 0), f"malformed trace: {e}")
    seen: Dict[int, TraceLine] = {}
    for line in trace.lines:
        if line.id in seen:
            return Invalid(line.lineno, f"duplicate clause id {line.id}")
        try:
            _check_line(line, seen, problem, trace.ordering)
        except _Reject as e:
            return Invalid(line.lineno, str(e))
        seen[line.id] = line
    if len(trace.terminals) != 1:
        return Invalid(0, f"expected exactly one terminal line, found {len(trace.terminals)}")
    term = trace.terminals[0]
    if trace.lines and term.lineno < trace.lines[-1].lineno:
        return Invalid(term.lineno, "terminal line must come last")
    goal = seen.get(term.goal)
    if goal is None:
        return Invalid(term.lineno, f"terminal cites unknown clause {term.goal}")
    if goal.positive:
        return Invalid(term.lineno, "terminal must close a goal")
    sigma = unify(goal.left, goal.right)
    if sigma is None or sigma != term.subst:
        return Invalid(term.lineno, "recorded substitution is not the unifier of the goal")
    if apply(sigma, goal.left) != apply(sigma, goal.right):
        return Invalid(term.lineno, "goal sides are not identical")
    return Valid(len(trace.lines))

