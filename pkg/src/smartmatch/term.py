"""First-order terms, positions, substitutions, unification and matching.

Terms are immutable. Variables are identified by a global integer id and
applications by a symbol name plus their argument tuple; ``(name, arity)``
is the symbol, so ``f/1`` and ``f/2`` never collide.

Positions are tuples of 1-based argument indices; ``()`` is the root.
Substitutions are plain ``dict[int, Term]`` keyed by variable id.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Tuple, Union

Position = Tuple[int, ...]
Symbol = Tuple[str, int]


class Var:
    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.id == self.id)

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"X{self.id}"

    __str__ = __repr__

    # uniform interface with App
    size = 1
    ground = False
    args = ()
    is_var = True


class App:
    __slots__ = ("name", "args", "size", "ground", "_hash")
    is_var = False

    def __init__(self, name: str, args: Tuple["Term", ...] = ()):
        self.name = name
        self.args = args
        size = 1
        ground = True
        for a in args:
            size += a.size
            ground = ground and a.ground
        self.size = size
        self.ground = ground
        self._hash = hash((name, args))

    @property
    def symbol(self) -> Symbol:
        return (self.name, len(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is App and self._hash == other._hash
                and self.name == other.name and self.args == other.args)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return to_str(self)

    __str__ = __repr__

    def __reduce__(self):
        return (App, (self.name, self.args))


Term = Union[Var, App]
Substitution = Dict[int, Term]


def const(name: str) -> App:
    return App(name, ())


def fn(name: str, *args: Term) -> App:
    return App(name, tuple(args))


def to_str(t: Term) -> str:
    if type(t) is Var:
        return f"X{t.id}"
    if not t.args:
        return quote_name(t.name)
    return quote_name(t.name) + "(" + ",".join(to_str(a) for a in t.args) + ")"


def _plain_name(name: str) -> bool:
    if not name or name[0] == "X" and name[1:].isdigit():
        return False
    first = name[0]
    if not (first.isalpha() or first in "_$"):
        return False
    return all(c.isalnum() or c in "_$" for c in name)


def quote_name(name: str) -> str:
    if _plain_name(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


# ---------------------------------------------------------------- positions

def subterm_at(t: Term, pos: Position) -> Optional[Term]:
    for i in pos:
        if i < 1 or i > len(t.args):
            return None
        t = t.args[i - 1]
    return t


def replace_at(t: Term, pos: Position, r: Term) -> Term:
    if not pos:
        return r
    i = pos[0]
    if i < 1 or i > len(t.args):
        raise ValueError(f"invalid position {pos} for {to_str(t)}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], pos[1:], r)
    return App(t.name, tuple(args))


def positions(t: Term, prefix: Position = ()) -> Iterator[Tuple[Position, Term]]:
    """Preorder walk yielding (position, subterm)."""
    yield prefix, t
    for i, a in enumerate(t.args, 1):
        yield from positions(a, prefix + (i,))


def nonvar_positions(t: Term, prefix: Position = ()) -> Iterator[Tuple[Position, Term]]:
    if type(t) is Var:
        return
    yield prefix, t
    for i, a in enumerate(t.args, 1):
        yield from nonvar_positions(a, prefix + (i,))


# ---------------------------------------------------------------- variables

def variables(t: Term) -> List[int]:
    """Variable ids in order of first occurrence."""
    seen: Dict[int, None] = {}
    _collect_vars(t, seen)
    return list(seen)


def _collect_vars(t: Term, seen: Dict[int, None]) -> None:
    if type(t) is Var:
        seen.setdefault(t.id)
    elif not t.ground:
        for a in t.args:
            _collect_vars(a, seen)


def var_occurrences(t: Term, counts: Optional[Dict[int, int]] = None) -> Dict[int, int]:
    if counts is None:
        counts = {}
    if type(t) is Var:
        counts[t.id] = counts.get(t.id, 0) + 1
    elif not t.ground:
        for a in t.args:
            var_occurrences(a, counts)
    return counts


def occurs(v: int, t: Term) -> bool:
    if type(t) is Var:
        return t.id == v
    if t.ground:
        return False
    return any(occurs(v, a) for a in t.args)


def weight(t: Term) -> int:
    """Number of symbol and variable occurrences."""
    return t.size


# ------------------------------------------------------------ substitutions

def apply(subst: Substitution, t: Term) -> Term:
    if not subst or t.ground:
        return t
    if type(t) is Var:
        return subst.get(t.id, t)
    args = tuple(apply(subst, a) for a in t.args)
    if all(x is y for x, y in zip(args, t.args)):
        return t
    return App(t.name, args)


def compose(first: Substitution, then: Substitution) -> Substitution:
    """Substitution equivalent to applying ``first`` and then ``then``."""
    out = {v: apply(then, t) for v, t in first.items()}
    for v, t in then.items():
        out.setdefault(v, t)
    return {v: t for v, t in out.items() if not (type(t) is Var and t.id == v)}


def _walk(t: Term, bind: Substitution) -> Term:
    while type(t) is Var and t.id in bind:
        t = bind[t.id]
    return t


def _occurs_bound(v: int, t: Term, bind: Substitution) -> bool:
    stack = [t]
    while stack:
        t = _walk(stack.pop(), bind)
        if type(t) is Var:
            if t.id == v:
                return True
        elif not t.ground:
            stack.extend(t.args)
    return False


def _resolve(t: Term, bind: Substitution) -> Term:
    t = _walk(t, bind)
    if type(t) is Var or t.ground:
        return t
    args = tuple(_resolve(a, bind) for a in t.args)
    if all(x is y for x, y in zip(args, t.args)):
        return t
    return App(t.name, args)


def unify_pairs(pairs, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """Most general simultaneous unifier of ``(s, t)`` pairs, or None.

    The result is idempotent. ``subst`` seeds the unifier and is not mutated.
    """
    bind: Substitution = dict(subst) if subst else {}
    stack = list(pairs)
    while stack:
        s, t = stack.pop()
        s = _walk(s, bind)
        t = _walk(t, bind)
        if s is t:
            continue
        if type(s) is Var:
            if type(t) is Var and t.id == s.id:
                continue
            if _occurs_bound(s.id, t, bind):
                return None
            bind[s.id] = t
        elif type(t) is Var:
            if _occurs_bound(t.id, s, bind):
                return None
            bind[t.id] = s
        else:
            if s.name != t.name or len(s.args) != len(t.args):
                return None
            if s.ground and t.ground:
                if s != t:
                    return None
                continue
            stack.extend(zip(s.args, t.args))
    return {v: _resolve(t, bind) for v, t in bind.items()}


def unify(s: Term, t: Term) -> Optional[Substitution]:
    return unify_pairs([(s, t)])


def match_pairs(pairs, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """One-sided matching: find σ with pattern σ == target for every pair.

    Variables of the targets are rigid.
    """
    sigma: Substitution = dict(subst) if subst else {}
    stack = list(pairs)
    while stack:
        p, g = stack.pop()
        if type(p) is Var:
            bound = sigma.get(p.id)
            if bound is None:
                sigma[p.id] = g
            elif bound != g:
                return None
        elif type(g) is Var:
            return None
        else:
            if p.name != g.name or len(p.args) != len(g.args):
                return None
            if p.ground:
                if p != g:
                    return None
                continue
            stack.extend(zip(p.args, g.args))
    return sigma


def match(pattern: Term, target: Term) -> Optional[Substitution]:
    return match_pairs([(pattern, target)])


# ----------------------------------------------------------------- renaming

_global_vars = itertools.count()


def fresh_var(counter=None) -> Var:
    return Var(next(counter if counter is not None else _global_vars))


def rename(t: Term, mapping: Dict[int, Term], counter=None) -> Term:
    """Rename every variable of ``t`` to a fresh one, extending ``mapping``."""
    if type(t) is Var:
        v = mapping.get(t.id)
        if v is None:
            v = mapping[t.id] = fresh_var(counter)
        return v
    if t.ground:
        return t
    return App(t.name, tuple(rename(a, mapping, counter) for a in t.args))


def rename_apart(t1: Term, t2: Term, counter=None) -> Tuple[Term, Term]:
    return rename(t1, {}, counter), rename(t2, {}, counter)


def shift_vars(t: Term, offset: int) -> Term:
    """Deterministic renaming ``X_i -> X_(i+offset)``."""
    if type(t) is Var:
        return Var(t.id + offset)
    if t.ground:
        return t
    return App(t.name, tuple(shift_vars(a, offset) for a in t.args))


def is_variant(pairs_a, pairs_b) -> bool:
    """True iff the term tuples are equal up to a bijective variable renaming."""
    pairs_a, pairs_b = tuple(pairs_a), tuple(pairs_b)
    if len(pairs_a) != len(pairs_b):
        return False
    fwd: Dict[int, int] = {}
    bwd: Dict[int, int] = {}
    stack = list(zip(pairs_a, pairs_b))
    while stack:
        a, b = stack.pop()
        if type(a) is Var:
            if type(b) is not Var:
                return False
            if fwd.setdefault(a.id, b.id) != b.id or bwd.setdefault(b.id, a.id) != a.id:
                return False
        elif type(b) is Var:
            return False
        else:
            if a.name != b.name or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
    return True
