"""TPTP CNF (unit subset) reader/printer and the internal term grammar.

Two term syntaxes share one lexer:

* TPTP: identifiers starting with an uppercase letter are variables, scoped
  to their clause; functors are lowercase words, ``$words``, integers or
  single-quoted strings.
* internal (traces, knowledge-base files, ``--smart-match``): variables are
  exactly ``X<digits>`` and keep their numeric id; every other identifier is
  a functor.

Atoms ``p(t)`` are encoded as the equation ``p(t) = $true``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .ordering import TRUE
from .term import App, Term, Var, to_str, variables

ROLES_AXIOM = ("axiom", "hypothesis", "definition", "lemma", "theorem")
ROLES_GOAL = ("negated_conjecture",)


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class NonUnitError(ParseError):
    pass


class RoleError(ParseError):
    pass


# ------------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<neq>!=)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<dquoted>"(?:[^"\\]|\\.)*")
  | (?P<word>\$?\$?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[+-]?[0-9]+(?:\.[0-9]+)?)
  | (?P<punct>[(),.=~|&\[\]{}:!?<>+*/#;-])
""", re.VERBOSE | re.DOTALL)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


_INTERNAL_VAR = re.compile(r"X([0-9]+)$")


class _Parser:
    def __init__(self, text: str, internal: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.internal = internal
        self.scope: Dict[str, Var] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind in ("quoted", "dquoted"):
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        return self.next()

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind not in ("quoted", "dquoted")

    def variable(self, name: str) -> Var:
        if self.internal:
            return Var(int(_INTERNAL_VAR.match(name).group(1)))
        v = self.scope.get(name)
        if v is None:
            v = self.scope[name] = Var(len(self.scope))
        return v

    def is_var_name(self, tok: Token) -> bool:
        if tok.kind != "word":
            return False
        if self.internal:
            return _INTERNAL_VAR.match(tok.text) is not None
        return tok.text[0].isupper()

    def term(self) -> Term:
        tok = self.tok
        if self.is_var_name(tok):
            self.next()
            return self.variable(tok.text)
        if tok.kind == "word":
            name = tok.text
        elif tok.kind == "quoted":
            name = _unquote(tok.text)
        elif tok.kind == "number":
            name = tok.text
        else:
            shown = tok.text or "end of input"
            self.error(f"expected a term, found {shown!r}")
        self.next()
        if not self.at("("):
            return App(name, ())
        self.next()
        args = [self.term()]
        while self.at(","):
            self.next()
            args.append(self.term())
        self.expect(")")
        return App(name, tuple(args))

    def literal(self) -> Tuple[bool, Term, Term]:
        """``s = t``, ``s != t``, ``~ lit``, ``p(...)`` or a parenthesized literal."""
        if self.at("~"):
            self.next()
            positive, l, r = self.literal()
            return (not positive, l, r)
        if self.at("("):
            self.next()
            lit = self.literal()
            if self.at("|"):
                self.error("non-unit clause: only single-literal clauses are supported",
                           cls=NonUnitError)
            self.expect(")")
            return lit
        left = self.term()
        if self.at("="):
            self.next()
            return (True, left, self.term())
        if self.tok.kind == "neq":
            self.next()
            return (False, left, self.term())
        if type(left) is Var:
            self.error("a variable is not an atom")
        return (True, left, TRUE)

    def equation(self) -> Tuple[Term, Term]:
        """``lhs = rhs`` in the current grammar (the ``--smart-match`` form)."""
        left = self.term()
        self.expect("=")
        right = self.term()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r} after equation")
        return left, right


def parse_term(text: str, internal: bool = True, scope: Optional[Dict[str, Var]] = None) -> Term:
    p = _Parser(text, internal)
    if scope is not None:
        p.scope = scope
    t = p.term()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after term")
    return t


def parse_equation(text: str, internal: bool = False,
                   scope: Optional[Dict[str, Var]] = None) -> Tuple[Term, Term]:
    """Parse ``lhs = rhs``; TPTP variable convention unless ``internal``.

    ``scope``, if given, receives the variable name to :class:`Var` mapping.
    """
    p = _Parser(text, internal)
    if scope is not None:
        p.scope = scope
    return p.equation()


# ----------------------------------------------------------------- problems

@dataclass(frozen=True)
class Equation:
    name: str
    role: str
    positive: bool
    left: Term
    right: Term


@dataclass
class Problem:
    clauses: List[Equation] = field(default_factory=list)
    source: str = ""

    @property
    def axioms(self) -> List[Equation]:
        """Every positive clause, hypotheses included."""
        return [c for c in self.clauses if c.positive]

    @property
    def library(self) -> List[Equation]:
        """Positive clauses other than hypotheses."""
        return [c for c in self.clauses if c.positive and c.role != "hypothesis"]

    @property
    def hypotheses(self) -> List[Equation]:
        return [c for c in self.clauses if c.positive and c.role == "hypothesis"]

    @property
    def goals(self) -> List[Equation]:
        return [c for c in self.clauses if not c.positive]

    def signature(self) -> set:
        out = set()

        def walk(t):
            if type(t) is App:
                out.add(t.symbol)
                for a in t.args:
                    walk(a)
        for c in self.clauses:
            walk(c.left)
            walk(c.right)
        out.discard(TRUE.symbol)
        return out

    def __eq__(self, other):
        return isinstance(other, Problem) and self.clauses == other.clauses


def parse_problem(text: str, source: str = "") -> Problem:
    p = _Parser(text, internal=False)
    clauses: List[Equation] = []
    names = set()
    while p.tok.kind != "eof":
        head = p.tok
        if head.text != "cnf":
            p.error(f"expected 'cnf', found {head.text!r}")
        p.next()
        p.expect("(")
        name_tok = p.next()
        if name_tok.kind not in ("word", "number", "quoted"):
            p.error("expected a clause name", name_tok)
        name = _unquote(name_tok.text) if name_tok.kind == "quoted" else name_tok.text
        p.expect(",")
        role_tok = p.next()
        role = role_tok.text
        if role not in ROLES_AXIOM + ROLES_GOAL:
            p.error(f"unknown role {role!r}", role_tok, RoleError)
        p.expect(",")
        p.scope = {}
        positive, left, right = p.literal()
        if p.at("|"):
            p.error("non-unit clause: only single-literal clauses are supported", cls=NonUnitError)
        if p.at(","):
            # optional source/annotation terms are skipped
            depth = 0
            while not (depth == 0 and p.at(")")):
                if p.tok.kind == "eof":
                    p.error("unterminated annotation")
                if p.at("(") or p.at("["):
                    depth += 1
                elif p.at(")") or p.at("]"):
                    depth -= 1
                p.next()
        p.expect(")")
        p.expect(".")
        if name in names:
            p.error(f"duplicate clause name {name!r}", name_tok)
        names.add(name)
        clauses.append(Equation(name, role, positive, left, right))
    return Problem(clauses, source)


def _tptp_name(name: str) -> str:
    if re.fullmatch(r"[a-z][A-Za-z0-9_]*|\$\$?[a-z][A-Za-z0-9_]*|[0-9]+", name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def tptp_term(t: Term) -> str:
    if type(t) is Var:
        return f"X{t.id}"
    if not t.args:
        return _tptp_name(t.name)
    return _tptp_name(t.name) + "(" + ",".join(tptp_term(a) for a in t.args) + ")"


def print_problem(problem: Problem) -> str:
    lines = []
    for c in problem.clauses:
        if c.right == TRUE and type(c.left) is App:
            lit = ("" if c.positive else "~") + tptp_term(c.left)
        else:
            lit = f"{tptp_term(c.left)} {'=' if c.positive else '!='} {tptp_term(c.right)}"
        lines.append(f"cnf({_tptp_name(c.name)}, {c.role}, {lit}).")
    return "\n".join(lines) + "\n"


__all__ = ["ParseError", "NonUnitError", "RoleError", "Equation", "Problem", "parse_problem",
           "print_problem", "parse_term", "parse_equation", "tokenize", "tptp_term", "to_str",
           "variables"]
