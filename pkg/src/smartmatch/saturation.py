"""Superposition inferences, simplification and the given-clause loop."""

from __future__ import annotations

import heapq
import time
from collections import ChainMap
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .clause import (Axiom, ClauseBag, GoalStep, Inferred, Rule, UnitClause, is_tautology,
                     new_clause, subsumes)
from .index import DiscriminationTree, IndexEntry, LayeredIndex
from .ordering import GT, INCOMPARABLE, LT, Comparison, Orientation, Precedence, TermOrdering, make_ordering
from .term import (App, Substitution, Term, Var, apply, match, nonvar_positions, replace_at,
                   shift_vars, subterm_at, unify, unify_pairs)

LR = Orientation.LEFT_TO_RIGHT
RL = Orientation.RIGHT_TO_LEFT


class DemodGuard:
    """Process-wide tally of demodulation steps checked (by the prover when it
    emits them and by the trace checker when it replays them) and of emitted
    steps that were not decreasing."""

    def __init__(self):
        self.steps = 0
        self.violations = 0


GUARD = DemodGuard()


@dataclass
class SaturationParams:
    ordering: str = "lpo"
    precedence: Precedence = field(default_factory=Precedence)
    weights: Optional[dict] = None
    var_weight: int = 1
    age_weight: Tuple[int, int] = (1, 4)
    max_weight: int = 100
    max_iterations: Optional[int] = None
    timeout: Optional[float] = 10.0
    # bound on superposition-left steps per goal lineage; None = unbounded
    max_narrowing: Optional[int] = None
    # superposition right at all (off for narrowing-only queries)
    infer_facts: bool = True
    # demodulate new positive clauses before they enter passive
    eager_simplify: bool = True
    # keep going after a proof and collect every answer
    all_answers: bool = False
    # select goals before anything else, breadth-first
    privilege_goals: bool = False
    max_rewrites: int = 100_000

    def __post_init__(self):
        a, w = self.age_weight
        if a < 0 or w < 0 or a + w == 0:
            raise ValueError(f"bad age:weight ratio {self.age_weight}")
        if self.max_weight < 2:
            raise ValueError("max_weight must be at least 2")

    def make_ordering(self) -> TermOrdering:
        return make_ordering(self.ordering, self.precedence, self.weights, self.var_weight)


# ------------------------------------------------------------------ outcomes

@dataclass
class Proof:
    goal: UnitClause          # the meeting point: a goal whose sides unify
    subst: Substitution       # mgu closing it
    answer: Optional[Term] = None


@dataclass
class Saturated:
    pass


@dataclass
class ResourceOut:
    limit: str


@dataclass
class Stats:
    iterations: int = 0
    generated: int = 0
    dropped: int = 0
    forward_deleted: int = 0
    backward_deleted: int = 0
    rewrites: int = 0
    narrowings: int = 0
    selections: List[Tuple[str, int]] = field(default_factory=list)


# ----------------------------------------------------------- inference core

def side_cmp(c: UnitClause, side: int) -> Comparison:
    """How side ``side`` of ``c`` compares to the other side, from the cache."""
    o = c.orientation
    if o is LR:
        return GT if side == 1 else LT
    if o is RL:
        return LT if side == 1 else GT
    return INCOMPARABLE


def not_smaller(ordering: TermOrdering, cached: Comparison, s: Term, t: Term,
                subst: Substitution) -> bool:
    """sσ ⋠ tσ, using a cached comparison of s and t when it decides."""
    if cached is GT:
        return True
    if cached is LT:
        return False
    c = ordering.compare(apply(subst, s), apply(subst, t))
    return c is GT or c is INCOMPARABLE


def superposition(ordering: TermOrdering, l: Term, r: Term, rule_cmp: Comparison,
                  t1: Term, t2: Term, pos, target_cmp: Comparison):
    """Conclusion of rewriting ``t1`` at ``pos`` with ``l -> r`` by unification.

    Returns ``(σ, t1[r]_pσ, t2σ)`` or None if the side conditions fail.
    """
    sub = subterm_at(t1, pos)
    if sub is None or type(sub) is Var:
        return None
    if rule_cmp is LT or target_cmp is LT:
        return None
    sigma = unify(l, sub)
    if sigma is None:
        return None
    if not not_smaller(ordering, rule_cmp, l, r, sigma):
        return None
    if not not_smaller(ordering, target_cmp, t1, t2, sigma):
        return None
    return sigma, apply(sigma, replace_at(t1, pos, r)), apply(sigma, t2)


def self_offset(c: UnitClause) -> int:
    """Variable shift for the renamed copy used when a clause meets itself."""
    vs = c.variables()
    return 1 + max(vs) if vs else 0


def _rule_directions(rule: UnitClause):
    """(direction, l, r, cached l-vs-r) for each usable orientation of ``rule``."""
    out = []
    if rule.orientation is not RL:
        out.append((LR, rule.left, rule.right, side_cmp(rule, 1)))
    if rule.orientation is not LR:
        out.append((RL, rule.right, rule.left, side_cmp(rule, 2)))
    return out


def _child_sides(target: UnitClause, side: int, new_t1: Term, new_t2: Term):
    return (new_t1, new_t2) if side == 1 else (new_t2, new_t1)


def _superpose_pair(bag, ordering, rule, target, rule_kind):
    """All inferences using ``rule`` (positive) on ``target`` at every position."""
    out = []
    offset = self_offset(rule) if rule.id == target.id else 0
    for direction, l, r, rcmp in _rule_directions(rule):
        if offset:
            l, r = shift_vars(l, offset), shift_vars(r, offset)
        for side in (1, 2):
            t1, t2 = target.side(side), target.side(3 - side)
            tcmp = side_cmp(target, side)
            for pos, _ in nonvar_positions(t1):
                if offset and not pos and side == (1 if direction is LR else 2):
                    continue  # a clause against its own copy at the root: always trivial
                res = superposition(ordering, l, r, rcmp, t1, t2, pos, tcmp)
                if res is None:
                    continue
                sigma, n1, n2 = res
                left, right = _child_sides(target, side, n1, n2)
                step = Inferred(rule_kind, rule.id, target.id, direction, (side,) + pos, sigma)
                answer = apply(sigma, target.answer) if target.answer is not None else None
                depth = target.depth + (1 if rule_kind is Rule.SUP_LEFT else 0)
                out.append(new_clause(bag, target.positive, left, right, step, ordering,
                                      answer=answer, depth=depth))
    return out


def superpose_right(c1: UnitClause, c2: UnitClause, ordering: TermOrdering,
                    bag: ClauseBag) -> List[UnitClause]:
    """Superpose positive ``c1`` (as rule, both directions) into positive ``c2``."""
    assert c1.positive and c2.positive
    return _superpose_pair(bag, ordering, c1, c2, Rule.SUP_RIGHT)


def superpose_left(rule: UnitClause, goal: UnitClause, ordering: TermOrdering,
                   bag: ClauseBag) -> List[UnitClause]:
    """Narrow ``goal`` with ``rule``: superposition into a negative clause."""
    assert rule.positive and not goal.positive
    return _superpose_pair(bag, ordering, rule, goal, Rule.SUP_LEFT)


def equality_resolution(goal: UnitClause) -> Optional[Substitution]:
    assert not goal.positive
    return unify(goal.left, goal.right)


# ---------------------------------------------------------------- passive set

class PassiveQueue:
    """Passive clauses picked by an age:weight ratio, with a privileged tier.

    Privileged clauses always go first, oldest first. Otherwise out of every
    ``a + w`` picks the first ``a`` take the oldest clause (smallest id) and
    the remaining ``w`` the lightest (ties by id).
    """

    def __init__(self, ratio: Tuple[int, int] = (1, 4)):
        self.ratio = ratio
        self.members: Dict[int, UnitClause] = {}
        self._priv: List[int] = []
        self._age: List[int] = []
        self._weight: List[Tuple[int, int]] = []
        self._privileged: set = set()
        self.picks = 0

    def __len__(self):
        return len(self.members)

    def __contains__(self, cid):
        return cid in self.members

    def __iter__(self):
        return iter(self.members.values())

    def push(self, c: UnitClause, privileged: bool = False) -> None:
        self.members[c.id] = c
        if privileged:
            self._privileged.add(c.id)
            heapq.heappush(self._priv, c.id)
        else:
            heapq.heappush(self._age, c.id)
            heapq.heappush(self._weight, (c.weight, c.id))

    def remove(self, cid: int) -> Optional[UnitClause]:
        self._privileged.discard(cid)
        return self.members.pop(cid, None)

    def _pop_heap(self, heap, key=lambda x: x):
        while heap:
            cid = key(heapq.heappop(heap))
            if cid in self.members and cid not in self._privileged:
                return cid
        return None

    def pop(self) -> Tuple[Optional[UnitClause], str]:
        while self._priv:
            cid = heapq.heappop(self._priv)
            if cid in self._privileged:
                self._privileged.discard(cid)
                return self.members.pop(cid), "privileged"
        if not self.members:
            return None, ""
        a, w = self.ratio
        by_age = (self.picks % (a + w)) < a
        self.picks += 1
        if by_age:
            cid = self._pop_heap(self._age)
        else:
            cid = self._pop_heap(self._weight, key=lambda x: x[1])
        if cid is None:
            return None, ""
        return self.members.pop(cid), "age" if by_age else "weight"


def select(passive: PassiveQueue) -> Optional[int]:
    c, _ = passive.pop()
    return None if c is None else c.id


# --------------------------------------------------------------- the prover

class ProofFound(Exception):
    pass


class OutOfTime(Exception):
    pass


class ProverState:
    """Active/passive sets, indexes and the given-clause loop.

    ``base`` makes this state a query-local overlay: the base's active set
    and indexes are visible but never modified, and every clause allocated
    here lives in a child bag.
    """

    def __init__(self, params: Optional[SaturationParams] = None, base: Optional["ProverState"] = None):
        self.params = params or SaturationParams()
        self.base = base
        if base is None:
            self.ordering = self.params.make_ordering()
            self.bag = ClauseBag()
            self.active: Dict[int, UnitClause] = {}
            self.goals: Dict[int, UnitClause] = {}
            self.rules = DiscriminationTree()
            self.into = DiscriminationTree()
            self.facts = DiscriminationTree()
            self.goal_sides = DiscriminationTree()
        else:
            self.ordering = base.ordering
            self.bag = ClauseBag(parent=base.bag)
            self.active = ChainMap({}, base.active)
            self.goals = {}
            self.rules = LayeredIndex(base.rules)
            self.into = LayeredIndex(base.into)
            self.facts = LayeredIndex(base.facts)
            self.goal_sides = DiscriminationTree()
        self.first_own_id = self.bag.next_id
        self.passive = PassiveQueue(self.params.age_weight)
        self.stats = Stats()
        self.proofs: List[Proof] = []
        # terms known to be in normal form w.r.t. the current rules
        self._irreducible: set = set()
        self._deadline: Optional[float] = None
        self._answers_seen: List[Term] = []

    # -- bookkeeping ------------------------------------------------------

    def owned(self, cid: int) -> bool:
        return cid >= self.first_own_id

    def new_clause(self, positive, left, right, step, **kw) -> UnitClause:
        return new_clause(self.bag, positive, left, right, step, self.ordering, **kw)

    def add_axiom(self, name: str, left: Term, right: Term, privileged: bool = False) -> UnitClause:
        c = self.new_clause(True, left, right, Axiom(name))
        self._enqueue(c, privileged)
        return c

    def add_goal(self, name: str, left: Term, right: Term, answer: Optional[Term] = None) -> UnitClause:
        c = self.new_clause(False, left, right, GoalStep(name), answer=answer)
        try:
            self._new_goal(c)
        except ProofFound:
            pass  # recorded in self.proofs; run() reports it
        return c

    def _index_sides(self, index, c: UnitClause, insert: bool) -> None:
        op = index.insert if insert else index.remove
        op(c.left, IndexEntry(c.id, 1))
        op(c.right, IndexEntry(c.id, 2))

    def _index_into(self, c: UnitClause, insert: bool) -> None:
        op = self.into.insert if insert else self.into.remove
        for side in (1, 2):
            for pos, sub in nonvar_positions(c.side(side)):
                op(sub, IndexEntry(c.id, side, pos))

    def _enqueue(self, c: UnitClause, privileged: bool = False) -> None:
        self.passive.push(c, privileged or (self.params.privilege_goals and not c.positive))
        self._index_sides(self.facts if c.positive else self.goal_sides, c, True)

    def _take_passive(self, cid: int) -> Optional[UnitClause]:
        c = self.passive.remove(cid)
        if c is not None:
            self._index_sides(self.facts if c.positive else self.goal_sides, c, False)
        return c

    def activate(self, c: UnitClause) -> None:
        if c.positive:
            self._irreducible.clear()
            self.active[c.id] = c
            self._index_sides(self.rules, c, True)
            self._index_sides(self.facts, c, True)
        else:
            self.goals[c.id] = c
            self._index_sides(self.goal_sides, c, True)
        self._index_into(c, True)

    def deactivate(self, c: UnitClause) -> None:
        if c.positive:
            del self.active[c.id]
            self._index_sides(self.rules, c, False)
            self._index_sides(self.facts, c, False)
        else:
            del self.goals[c.id]
            self._index_sides(self.goal_sides, c, False)
        self._index_into(c, False)

    # -- demodulation -----------------------------------------------------

    def _rewrite_root(self, t: Term, skip: int = -1):
        """Pick an oriented rule instance rewriting ``t`` at its root."""
        for entry in sorted(self.rules.retrieve_generalizations(t)):
            if entry.clause_id == skip:
                continue
            rule = self.bag[entry.clause_id]
            side = entry.side
            cached = side_cmp(rule, side)
            if cached is LT:
                continue
            sigma = match(rule.side(side), t)
            if sigma is None:
                continue
            rhs = apply(sigma, rule.side(3 - side))
            if cached is not GT and self.ordering.compare(t, rhs) is not GT:
                continue
            return rule, (LR if side == 1 else RL), rhs
        return None

    def _normalize(self, t: Term, pos, steps: list, skip: int) -> Term:
        # with a rule skipped, normal forms are not normal forms of the full rule set
        cache = self._irreducible if skip < 0 else set()
        if type(t) is Var or t in self._irreducible:
            return t
        while True:
            if t.args:
                args = tuple(self._normalize(a, pos + (i,), steps, skip) for i, a in enumerate(t.args, 1))
                if any(x is not y for x, y in zip(args, t.args)):
                    t = App(t.name, args)
            found = self._rewrite_root(t, skip)
            if found is None:
                cache.add(t)
                return t
            rule, direction, rhs = found
            steps.append((pos, rule.id, direction))
            if len(steps) > self.params.max_rewrites:
                raise RuntimeError("demodulation exceeded the rewrite bound")
            t = rhs
            if type(t) is Var or t in self._irreducible:
                return t

    def demodulate(self, c: UnitClause) -> UnitClause:
        """Normal form of ``c`` under the active oriented equations.

        Every rewrite allocates an intermediate clause whose proof step is a
        DEMOD inference, so the chain replays step by step.
        """
        steps: list = []
        skip = c.id if c.id in self.active else -1
        self._normalize(c.left, (1,), steps, skip)
        self._normalize(c.right, (2,), steps, skip)
        if not steps:
            return c
        cur = c
        for pos, rule_id, direction in steps:
            rule = self.bag[rule_id]
            l, r = (rule.left, rule.right) if direction is LR else (rule.right, rule.left)
            side = pos[0]
            t1 = cur.side(side)
            sub = subterm_at(t1, pos[1:])
            sigma = match(l, sub)
            assert sigma is not None
            rhs = apply(sigma, r)
            GUARD.steps += 1
            if self.ordering.compare(sub, rhs) is not GT:
                GUARD.violations += 1
                raise AssertionError(f"demodulation step not decreasing: {sub} -> {rhs}")
            new_t1 = replace_at(t1, pos[1:], rhs)
            left, right = (new_t1, cur.right) if side == 1 else (cur.left, new_t1)
            cur = self.new_clause(cur.positive, left, right,
                                  Inferred(Rule.DEMOD, rule.id, cur.id, direction, pos, sigma),
                                  answer=cur.answer, depth=cur.depth)
        self.stats.rewrites += len(steps)
        return cur

    # -- redundancy -------------------------------------------------------

    def subsumed_fact(self, c: UnitClause) -> bool:
        for e in self.facts.retrieve_generalizations(c.left):
            if e.clause_id != c.id and subsumes(self.bag[e.clause_id], c):
                return True
        return False

    def subsumed_goal(self, c: UnitClause) -> bool:
        for e in self.goal_sides.retrieve_generalizations(c.left):
            d = self.bag[e.clause_id]
            if d.id != c.id and d.depth <= c.depth and subsumes(d, c):
                return True
        return False

    def forward_simplify(self, c: UnitClause) -> Optional[UnitClause]:
        c = self.demodulate(c)
        if c.positive:
            if is_tautology(c) or self.subsumed_fact(c):
                return None
        elif self.subsumed_goal(c):
            return None
        return c

    def backward_simplify(self, g: UnitClause) -> List[UnitClause]:
        """Delete clauses ``g`` subsumes; pull out the ones it rewrites.

        Returns the re-normalized versions of active clauses that ``g``
        demodulates; they are no longer active and the caller re-queues them.
        """
        for e in sorted(self.facts.retrieve_instances(g.left)):
            cid = e.clause_id
            if cid == g.id or not self.owned(cid):
                continue
            d = self.bag[cid]
            if subsumes(g, d):
                if cid in self.passive:
                    self._take_passive(cid)
                    self.stats.backward_deleted += 1
                elif cid in self.active:
                    self.deactivate(d)
                    self.stats.backward_deleted += 1
        touched = set()
        for direction, l, r, rcmp in _rule_directions(g):
            if rcmp is LT or type(l) is Var:
                continue
            for e in self.into.retrieve_instances(l):
                cid = e.clause_id
                if cid == g.id or cid in touched or not self.owned(cid):
                    continue
                if cid not in self.active and cid not in self.goals:
                    continue
                target = self.bag[cid]
                sub = subterm_at(target.side(e.side), e.position)
                sigma = match(l, sub)
                if sigma is None:
                    continue
                if rcmp is GT or self.ordering.compare(sub, apply(sigma, r)) is GT:
                    touched.add(cid)
        out = []
        for cid in sorted(touched):
            d = self.bag[cid]
            self.deactivate(d)
            out.append(self.demodulate(d))
        return out

    # -- goals ------------------------------------------------------------

    def _record_proof(self, goal: UnitClause, sigma: Substitution) -> None:
        answer = apply(sigma, goal.answer) if goal.answer is not None else None
        self.proofs.append(Proof(goal, sigma, answer))
        if not self.params.all_answers:
            raise ProofFound()

    def _close_by_fact(self, rule: UnitClause, side: int, goal: UnitClause) -> bool:
        l, r = rule.side(side), rule.side(3 - side)
        if rule.id == goal.id:
            return False
        sigma = unify_pairs([(l, goal.left), (r, goal.right)])
        if sigma is None:
            return False
        step = Inferred(Rule.REWRITE, rule.id, goal.id, LR if side == 1 else RL, (1,), sigma)
        child = self.new_clause(False, apply(sigma, r), apply(sigma, goal.right), step,
                                answer=apply(sigma, goal.answer) if goal.answer is not None else None,
                                depth=goal.depth)
        self._record_proof(child, unify(child.left, child.right))
        return True

    def check_goal(self, g: UnitClause) -> bool:
        """Close ``g`` by equality resolution or by a unifying active fact."""
        sigma = equality_resolution(g)
        if sigma is not None:
            self._record_proof(g, sigma)
            return True
        for e in sorted(self.rules.retrieve_unifiable(g.left)):
            if self._close_by_fact(self.bag[e.clause_id], e.side, g):
                return True
        return False

    def _fact_closes_goals(self, c: UnitClause) -> None:
        if not self.goals and not len(self.goal_sides):
            return
        for side in (1, 2):
            for e in sorted(self.goal_sides.retrieve_unifiable(c.side(side))):
                if e.side != 1:
                    continue
                g = self.bag[e.clause_id]
                if g.id in self.goals or g.id in self.passive:
                    self._close_by_fact(c, side, g)

    def _new_goal(self, c: UnitClause) -> None:
        c = self.demodulate(c)
        if self.check_goal(c):
            return
        if self.subsumed_goal(c):
            self.stats.forward_deleted += 1
            return
        self._enqueue(c)

    # -- inference --------------------------------------------------------

    def _narrowing_allowed(self, goal: UnitClause) -> bool:
        bound = self.params.max_narrowing
        return bound is None or goal.depth < bound

    def infer(self, g: UnitClause) -> List[UnitClause]:
        """Inferences between freshly activated ``g`` and the active set."""
        out: List[UnitClause] = []
        bag, ordering = self.bag, self.ordering
        if g.positive:
            for direction, l, r, rcmp in _rule_directions(g):
                for e in sorted(self.into.retrieve_unifiable(l)):
                    if e.clause_id == g.id:
                        continue
                    target = self.bag[e.clause_id]
                    if target.positive:
                        if not self.params.infer_facts:
                            continue
                        kind = Rule.SUP_RIGHT
                    else:
                        if target.id not in self.goals or not self._narrowing_allowed(target):
                            continue
                        kind = Rule.SUP_LEFT
                    out.extend(self._infer_at(g, direction, l, r, rcmp, target, e.side, e.position, kind))
            if self.params.infer_facts:
                for side in (1, 2):
                    for pos, sub in nonvar_positions(g.side(side)):
                        for e in sorted(self.rules.retrieve_unifiable(sub)):
                            if e.clause_id == g.id:
                                continue
                            rule = self.bag[e.clause_id]
                            direction = LR if e.side == 1 else RL
                            rcmp = side_cmp(rule, e.side)
                            out.extend(self._infer_at(rule, direction, rule.side(e.side),
                                                      rule.side(3 - e.side), rcmp, g, side, pos,
                                                      Rule.SUP_RIGHT))
                out.extend(_superpose_pair(bag, ordering, g, g, Rule.SUP_RIGHT))
        elif self._narrowing_allowed(g):
            for side in (1, 2):
                for pos, sub in nonvar_positions(g.side(side)):
                    for e in sorted(self.rules.retrieve_unifiable(sub)):
                        rule = self.bag[e.clause_id]
                        direction = LR if e.side == 1 else RL
                        rcmp = side_cmp(rule, e.side)
                        out.extend(self._infer_at(rule, direction, rule.side(e.side),
                                                  rule.side(3 - e.side), rcmp, g, side, pos,
                                                  Rule.SUP_LEFT))
        self.stats.generated += len(out)
        return out

    def _infer_at(self, rule, direction, l, r, rcmp, target, side, pos, kind):
        t1, t2 = target.side(side), target.side(3 - side)
        res = superposition(self.ordering, l, r, rcmp, t1, t2, pos, side_cmp(target, side))
        if res is None:
            return ()
        sigma, n1, n2 = res
        left, right = _child_sides(target, side, n1, n2)
        step = Inferred(kind, rule.id, target.id, direction, (side,) + pos, sigma)
        answer = apply(sigma, target.answer) if target.answer is not None else None
        depth = target.depth + (1 if kind is Rule.SUP_LEFT else 0)
        if kind is Rule.SUP_LEFT:
            self.stats.narrowings += 1
        return (self.new_clause(target.positive, left, right, step, answer=answer, depth=depth),)

    def add_new(self, c: UnitClause, simplify: Optional[bool] = None) -> Optional[UnitClause]:
        """Filter a generated clause and queue it; returns it if queued."""
        if self._deadline is not None and time.monotonic() >= self._deadline:
            raise OutOfTime()
        if simplify is None:
            simplify = self.params.eager_simplify
        if not c.positive:
            c = self.demodulate(c)
            if c.weight > self.params.max_weight:
                self.stats.dropped += 1
                return None
            if self.check_goal(c):
                return None
            if self.subsumed_goal(c):
                self.stats.forward_deleted += 1
                return None
            self._enqueue(c)
            return c
        if simplify:
            c = self.demodulate(c)
        if c.weight > self.params.max_weight:
            self.stats.dropped += 1
            return None
        if is_tautology(c) or self.subsumed_fact(c):
            self.stats.forward_deleted += 1
            return None
        self._fact_closes_goals(c)
        self._enqueue(c)
        return c

    # -- main loop --------------------------------------------------------

    def given_clause_step(self, given: UnitClause) -> None:
        g = self.forward_simplify(given)
        if g is None:
            self.stats.forward_deleted += 1
            return
        if not g.positive:
            if self.check_goal(g):
                return
            self.activate(g)
            for c in self.infer(g):
                self.add_new(c)
            return
        self._fact_closes_goals(g)
        self.activate(g)
        for c in self.backward_simplify(g):
            self.add_new(c, simplify=False)
        for c in self.infer(g):
            self.add_new(c)

    def run(self):
        """Given-clause loop; returns Proof, Saturated or ResourceOut."""
        p = self.params
        start = time.monotonic()
        self._deadline = None if p.timeout is None else start + p.timeout
        try:
            if self.proofs and not p.all_answers:
                return self.proofs[0]
            while True:
                if p.timeout is not None and time.monotonic() - start >= p.timeout:
                    return ResourceOut("timeout")
                if p.max_iterations is not None and self.stats.iterations >= p.max_iterations:
                    return ResourceOut("iterations")
                given, kind = self.passive.pop()
                if given is None:
                    break
                self._index_sides(self.facts if given.positive else self.goal_sides, given, False)
                self.stats.iterations += 1
                self.stats.selections.append((kind, given.id))
                self.given_clause_step(given)
        except ProofFound:
            return self.proofs[-1]
        except OutOfTime:
            return self.proofs[0] if self.proofs else ResourceOut("timeout")
        finally:
            self._deadline = None
        if self.proofs:
            return self.proofs[0]
        if self.stats.dropped:
            return ResourceOut("max_weight")
        return Saturated()
