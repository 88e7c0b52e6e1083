"""Reduction orderings: KBO, NRKBO, LPO and RPO behind one interface.

All orderings share a :class:`Precedence`. The default precedence puts
higher-arity symbols above lower-arity ones and breaks ties by reverse
alphabetical order of names; explicitly listed symbols sit above every
unlisted one, in the listed order. The reserved constant ``$true`` is always
the least symbol.

NRKBO ("non recursive" KBO) is our own reading of the name: weight and
variable condition exactly as in KBO, but equal-weight ties are broken by a
purely structural comparison (precedence of the first differing symbol in a
parallel left-to-right walk) instead of by recursive KBO calls on arguments.
"""

from __future__ import annotations

import enum
from typing import Dict, Iterable, Optional, Sequence

from .term import App, Symbol, Term, Var, occurs, var_occurrences

TRUE = App("$true", ())


class Comparison(enum.Enum):
    GT = ">"
    LT = "<"
    EQ = "="
    INCOMPARABLE = "?"

    def converse(self) -> "Comparison":
        return _CONVERSE[self]


_CONVERSE = {
    Comparison.GT: Comparison.LT,
    Comparison.LT: Comparison.GT,
    Comparison.EQ: Comparison.EQ,
    Comparison.INCOMPARABLE: Comparison.INCOMPARABLE,
}

GT, LT, EQ, INCOMPARABLE = Comparison.GT, Comparison.LT, Comparison.EQ, Comparison.INCOMPARABLE


class Orientation(enum.Enum):
    LEFT_TO_RIGHT = "lr"
    RIGHT_TO_LEFT = "rl"
    UNORIENTABLE = "un"


class Precedence:
    """Total strict order over symbols ``(name, arity)``."""

    def __init__(self, order: Sequence[Symbol] = ()):
        self.order = tuple(order)
        n = len(self.order)
        self._explicit = {sym: (2, n - i) for i, sym in enumerate(self.order)}
        if len(self._explicit) != n:
            raise ValueError("duplicate symbol in precedence")
        self._keys: Dict[Symbol, tuple] = {}

    def key(self, sym: Symbol) -> tuple:
        k = self._keys.get(sym)
        if k is None:
            if sym == ("$true", 0):
                k = (0,)
            else:
                k = self._explicit.get(sym) or (1, sym[1], sym[0])
            self._keys[sym] = k
        return k

    def compare(self, f: Symbol, g: Symbol) -> Comparison:
        if f == g:
            return EQ
        return GT if self.key(f) > self.key(g) else LT

    def sorted(self, symbols: Iterable[Symbol]) -> list:
        """Symbols from greatest to least."""
        return sorted(set(symbols), key=self.key, reverse=True)

    def __eq__(self, other):
        return isinstance(other, Precedence) and other.order == self.order

    def __repr__(self):
        return f"Precedence({list(self.order)!r})"


def _sym(t: App) -> Symbol:
    return (t.name, len(t.args))


class TermOrdering:
    """Base class; subclasses implement :meth:`compare`."""

    name = "?"

    def __init__(self, precedence: Optional[Precedence] = None):
        self.precedence = precedence or Precedence()

    def compare(self, s: Term, t: Term) -> Comparison:
        raise NotImplementedError

    def greater(self, s: Term, t: Term) -> bool:
        return self.compare(s, t) is GT

    def orient(self, l: Term, r: Term) -> Orientation:
        c = self.compare(l, r)
        if c is GT:
            return Orientation.LEFT_TO_RIGHT
        if c is LT:
            return Orientation.RIGHT_TO_LEFT
        return Orientation.UNORIENTABLE

    def _prec(self, s: App, t: App) -> Comparison:
        if s.name == t.name and len(s.args) == len(t.args):
            return EQ
        key = self.precedence.key
        return GT if key((s.name, len(s.args))) > key((t.name, len(t.args))) else LT


# ---------------------------------------------------------------- path orderings

class LPO(TermOrdering):
    """Lexicographic path ordering, left-to-right status for every symbol."""

    name = "lpo"

    def compare(self, s, t):
        if s == t:
            return EQ
        memo: dict = {}
        if self._gt(s, t, memo):
            return GT
        if self._gt(t, s, memo):
            return LT
        return INCOMPARABLE

    def _gt(self, s, t, memo) -> bool:
        if type(s) is Var:
            return False
        if type(t) is Var:
            return occurs(t.id, s)
        key = (s, t)
        r = memo.get(key)
        if r is None:
            r = memo[key] = self._gt_app(s, t, memo)
        return r

    def _gt_app(self, s, t, memo) -> bool:
        c = self._prec(s, t)
        if c is GT:
            if all(self._gt(s, b, memo) for b in t.args):
                return True
        elif c is EQ:
            targs = t.args
            for i, (a, b) in enumerate(zip(s.args, targs)):
                if a == b:
                    continue
                if self._gt(a, b, memo):
                    if all(self._gt(s, u, memo) for u in targs[i + 1:]):
                        return True
                break
        for a in s.args:
            if a == t or self._gt(a, t, memo):
                return True
        return False


class RPO(TermOrdering):
    """Recursive path ordering with multiset status for every symbol.

    Terms equal up to permutation of arguments are never strictly ordered;
    ``compare`` reports them INCOMPARABLE unless syntactically identical.
    """

    name = "rpo"

    def compare(self, s, t):
        if s == t:
            return EQ
        if self._gt(s, t):
            return GT
        if self._gt(t, s):
            return LT
        return INCOMPARABLE

    def _canon(self, t):
        if type(t) is Var:
            return (0, t.id)
        return (1, t.name, tuple(sorted(self._canon(a) for a in t.args)))

    def _ge(self, s, t) -> bool:
        return s == t or self._canon(s) == self._canon(t) or self._gt(s, t)

    def _gt(self, s, t) -> bool:
        if type(s) is Var:
            return False
        if type(t) is Var:
            return occurs(t.id, s)
        for a in s.args:
            if self._ge(a, t):
                return True
        c = self._prec(s, t)
        if c is GT:
            return all(self._gt(s, b) for b in t.args)
        if c is EQ:
            return self._mul_gt(s.args, t.args)
        return False

    def _mul_gt(self, ms, ns) -> bool:
        ms = list(ms)
        rest_n = []
        for n in ns:
            cn = self._canon(n)
            for i, m in enumerate(ms):
                if self._canon(m) == cn:
                    del ms[i]
                    break
            else:
                rest_n.append(n)
        if not ms:
            return False
        return all(any(self._gt(m, n) for m in ms) for n in rest_n)


# ---------------------------------------------------------------- Knuth-Bendix

class KBO(TermOrdering):
    """Knuth-Bendix ordering with per-symbol weights (default 1)."""

    name = "kbo"

    def __init__(self, precedence=None, weights: Optional[Dict[Symbol, int]] = None,
                 var_weight: int = 1):
        super().__init__(precedence)
        self.weights = dict(weights or {})
        self.var_weight = var_weight
        self._unit = var_weight == 1 and all(w == 1 for w in self.weights.values())
        self._check_admissible()

    def _check_admissible(self):
        if self.var_weight <= 0:
            raise ValueError("variable weight must be positive")
        for sym, w in self.weights.items():
            if w < 0:
                raise ValueError(f"negative weight for {sym}")
            if sym[1] == 0 and w < self.var_weight:
                raise ValueError(f"constant {sym[0]} lighter than a variable")
            if w == 0 and sym[1] != 1:
                raise ValueError(f"only unary symbols may have weight 0 ({sym[0]})")
            if w == 0 and sym[1] == 1:
                top = self.precedence.order[:1]
                if top != (sym,):
                    raise ValueError(f"weight-0 symbol {sym[0]} must head the precedence")

    def weight(self, t: Term) -> int:
        if self._unit:
            return t.size
        if type(t) is Var:
            return self.var_weight
        return self.weights.get(_sym(t), 1) + sum(self.weight(a) for a in t.args)

    def compare(self, s, t):
        if s == t:
            return EQ
        ws, wt = self.weight(s), self.weight(t)
        vs = var_occurrences(s)
        vt = var_occurrences(t)
        s_covers = all(vs.get(x, 0) >= n for x, n in vt.items())
        t_covers = all(vt.get(x, 0) >= n for x, n in vs.items())
        if ws > wt:
            return GT if s_covers else INCOMPARABLE
        if ws < wt:
            return LT if t_covers else INCOMPARABLE
        if not (s_covers or t_covers):
            return INCOMPARABLE
        c = self._tie(s, t)
        if c is GT and s_covers:
            return GT
        if c is LT and t_covers:
            return LT
        return INCOMPARABLE

    def _unary_tower(self, s, t) -> bool:
        """s = f(f(...f(t))) with f unary of weight 0."""
        while type(s) is App and len(s.args) == 1 and self.weights.get(_sym(s), 1) == 0:
            s = s.args[0]
            if s == t:
                return True
        return False

    def _var_tie(self, s, t) -> Comparison:
        if type(s) is Var and type(t) is Var:
            return INCOMPARABLE
        if type(t) is Var:
            return GT if self._unary_tower(s, t) else INCOMPARABLE
        return LT if self._unary_tower(t, s) else INCOMPARABLE

    def _tie(self, s, t) -> Comparison:
        if type(s) is Var or type(t) is Var:
            return self._var_tie(s, t)
        c = self._prec(s, t)
        if c is not EQ:
            return c
        for a, b in zip(s.args, t.args):
            if a != b:
                return self.compare(a, b)
        return EQ


class NRKBO(KBO):
    """KBO whose equal-weight tiebreak is structural, not recursive."""

    name = "nrkbo"

    def _tie(self, s, t) -> Comparison:
        while True:
            if s == t:
                return EQ
            if type(s) is Var or type(t) is Var:
                return self._var_tie(s, t)
            c = self._prec(s, t)
            if c is not EQ:
                return c
            for a, b in zip(s.args, t.args):
                if a != b:
                    s, t = a, b
                    break
            else:
                return EQ


ORDERINGS = {cls.name: cls for cls in (KBO, NRKBO, LPO, RPO)}


def make_ordering(kind: str = "lpo", precedence: Optional[Precedence] = None,
                  weights: Optional[Dict[Symbol, int]] = None, var_weight: int = 1) -> TermOrdering:
    try:
        cls = ORDERINGS[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown ordering {kind!r}; expected one of {sorted(ORDERINGS)}") from None
    if issubclass(cls, KBO):
        return cls(precedence, weights, var_weight)
    return cls(precedence)


def compare(kind: str, precedence: Optional[Precedence], s: Term, t: Term) -> Comparison:
    return make_ordering(kind, precedence).compare(s, t)


def orient(kind: str, precedence: Optional[Precedence], l: Term, r: Term) -> Orientation:
    return make_ordering(kind, precedence).orient(l, r)
