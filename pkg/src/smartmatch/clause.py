"""Unit equality clauses, proof steps and the clause bag."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Union

from .ordering import Orientation, TermOrdering
from .term import Position, Substitution, Term, match_pairs, rename, to_str, variables


class Rule(enum.Enum):
    SUP_RIGHT = "sup_right"
    SUP_LEFT = "sup_left"
    DEMOD = "demod"
    # unordered root rewrite closing a goal that a fact subsumes
    REWRITE = "rewrite"
    EQ_RES = "eq_res"


@dataclass(frozen=True)
class Axiom:
    name: str


@dataclass(frozen=True)
class GoalStep:
    name: str


@dataclass(frozen=True)
class Inferred:
    """``parent1`` is the equation used as a rule, ``parent2`` the clause it acts on.

    ``position`` addresses the rewritten subterm in ``parent2``: its first
    index picks the side (1 = left, 2 = right). For EQ_RES only ``parent1``
    (the goal) and ``subst`` are meaningful.
    """
    rule: Rule
    parent1: int
    parent2: Optional[int]
    direction: Optional[Orientation]
    position: Position
    subst: Substitution = field(hash=False, compare=True)

    def parents(self):
        return tuple(p for p in (self.parent1, self.parent2) if p is not None)


ProofStep = Union[Axiom, GoalStep, Inferred]


@dataclass(eq=False)
class UnitClause:
    id: int
    positive: bool
    left: Term
    right: Term
    orientation: Orientation
    weight: int
    step: ProofStep
    # answer term of a goal: instance of the query variables it carries
    answer: Optional[Term] = None
    # number of superposition-left steps along the goal lineage
    depth: int = 0

    def sides(self):
        return (self.left, self.right)

    def side(self, i: int) -> Term:
        return self.left if i == 1 else self.right

    def variables(self):
        seen = dict.fromkeys(variables(self.left))
        seen.update(dict.fromkeys(variables(self.right)))
        return list(seen)

    def __str__(self):
        eq = "=" if self.positive else "!="
        return f"{to_str(self.left)} {eq} {to_str(self.right)}"

    def __repr__(self):
        return f"<{self.id}: {self}>"


class _VarCounter:
    __slots__ = ("bag",)

    def __init__(self, bag):
        self.bag = bag

    def __next__(self):
        return self.bag.fresh()


class ClauseBag:
    """All clauses ever allocated by one prover instance, by id.

    A bag may sit on top of a parent bag: lookups fall through and fresh ids
    and variables continue after the parent's, so queries can allocate
    without touching a shared library.
    """

    def __init__(self, parent: Optional["ClauseBag"] = None):
        self.parent = parent
        self.clauses: Dict[int, UnitClause] = {}
        self.next_id = parent.next_id if parent else 0
        self.next_var = parent.next_var if parent else 0

    def __getitem__(self, cid: int) -> UnitClause:
        c = self.clauses.get(cid)
        if c is None:
            if self.parent is not None:
                return self.parent[cid]
            raise KeyError(cid)
        return c

    def __contains__(self, cid):
        return cid in self.clauses or (self.parent is not None and cid in self.parent)

    def __len__(self):
        return len(self.clauses) + (len(self.parent) if self.parent else 0)

    def __iter__(self) -> Iterator[UnitClause]:
        if self.parent is not None:
            yield from self.parent
        yield from self.clauses.values()

    def fresh(self):
        v = self.next_var
        self.next_var += 1
        return v

    def var_counter(self) -> "_VarCounter":
        return _VarCounter(self)

    def register(self, clause: UnitClause) -> UnitClause:
        if clause.id != self.next_id:
            raise ValueError(f"clause id {clause.id} out of sequence (next {self.next_id})")
        if isinstance(clause.step, Inferred):
            for p in clause.step.parents():
                if p not in self:
                    raise ValueError(f"clause {clause.id} cites unknown parent {p}")
        self.clauses[clause.id] = clause
        self.next_id += 1
        return clause

    def truncate(self, next_id: int, next_var: int) -> None:
        """Forget every clause allocated at or after ``next_id``."""
        for cid in [i for i in self.clauses if i >= next_id]:
            del self.clauses[cid]
        self.next_id = next_id
        self.next_var = next_var


def new_clause(bag: ClauseBag, positive: bool, left: Term, right: Term, step: ProofStep,
               ordering: TermOrdering, answer: Optional[Term] = None, depth: int = 0) -> UnitClause:
    """Allocate a clause with fresh variables and a cached orientation."""
    mapping: dict = {}
    counter = bag.var_counter()
    left = rename(left, mapping, counter)
    right = rename(right, mapping, counter)
    if answer is not None:
        answer = rename(answer, mapping, counter)
    clause = UnitClause(
        id=bag.next_id,
        positive=positive,
        left=left,
        right=right,
        orientation=ordering.orient(left, right),
        weight=left.size + right.size,
        step=step,
        answer=answer,
        depth=depth,
    )
    return bag.register(clause)


def is_tautology(c: UnitClause) -> bool:
    return c.positive and c.left == c.right


def subsumption_subst(c: UnitClause, d: UnitClause) -> Optional[Substitution]:
    """σ with cσ ≡ d (either pairing of sides), or None."""
    if c.positive != d.positive:
        return None
    s = match_pairs([(c.left, d.left), (c.right, d.right)])
    if s is None:
        s = match_pairs([(c.left, d.right), (c.right, d.left)])
    return s


def subsumes(c: UnitClause, d: UnitClause) -> bool:
    return subsumption_subst(c, d) is not None
