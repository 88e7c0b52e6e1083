"""Shared builders and random generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

from smartmatch.library import KnowledgeBase, default_kb_params
from smartmatch.config import load_config
from smartmatch.term import App, Var
from smartmatch.tptp import parse_equation, parse_problem, parse_term

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"

# signature used by the random generators
FUNCS = [("f", 2), ("g", 1), ("h", 3), ("k", 1)]
CONSTS = ["a", "b", "c"]


def t(text: str):
    """Term in TPTP syntax (uppercase variables, numbered by first occurrence)."""
    return parse_term(text, internal=False)


def eq(text: str):
    return parse_equation(text)


def load(name: str):
    return parse_problem((PROBLEMS / name).read_text(), name)


def arith_kb() -> KnowledgeBase:
    """The smart-matching corpus library, loaded with its configured precedence."""
    conf = load_config(str(PROBLEMS / "arith.ini"))
    kb = KnowledgeBase(default_kb_params(ordering=conf["ordering"], precedence=conf["precedence"]))
    for c in load("arith_library.p").library:
        kb.add_equation(c.name, c.left, c.right)
    return kb


# (query, expected substitution by variable name, narrowing steps)
SMART_CORPUS = [
    ("monotonic_pred", "le(pred(X),pred(Y)) = le(n,m)", {"X": "s(n)", "Y": "s(m)"}, 2),
    ("le_times_l", "le(times(A,N),times(B,N)) = le(n,times(m,n))",
     {"A": "s(o)", "N": "n", "B": "m"}, 2),
    ("times_comm_hyp", "le(times(n,a),times(m,a)) = le(times(A,n),times(A,m))", {"A": "a"}, 0),
    ("times_succ_hyp", "le(times(a,s(n)),times(a,s(m))) = le(plus(A,times(a,n)),plus(A,times(a,m)))",
     {"A": "a"}, 0),
    ("le_plus", "le(plus(n,A),plus(m,B)) = lt(n,times(s(s(o)),m))", {"A": "s(o)", "B": "m"}, 0),
    ("weakening", "der(push(G,A),lift(M),lift(N)) = der(push(g,a),star,box)",
     {"G": "g", "A": "a", "M": "star", "N": "box"}, 2),
]


def random_term(rng: random.Random, depth: int = 3, nvars: int = 3, var_p: float = 0.25,
                funcs=FUNCS, consts=CONSTS):
    if depth <= 0 or rng.random() < 0.3:
        if nvars and rng.random() < var_p:
            return Var(rng.randrange(nvars))
        return App(rng.choice(consts), ())
    name, arity = rng.choice(funcs)
    return App(name, tuple(random_term(rng, depth - 1, nvars, var_p, funcs, consts)
                           for _ in range(arity)))


def random_ground(rng: random.Random, depth: int = 3):
    return random_term(rng, depth, nvars=0)
