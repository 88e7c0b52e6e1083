import pytest

from smartmatch.clause import Axiom, GoalStep, Rule, is_tautology, subsumes
from smartmatch.driver import build_state
from smartmatch.ordering import Precedence, TRUE, make_ordering
from smartmatch.saturation import (GUARD, PassiveQueue, Proof, ProverState, ResourceOut,
                                   SaturationParams, Saturated, equality_resolution, select,
                                   superpose_left, superpose_right)
from smartmatch.term import App, apply, is_variant, subterm_at

from helpers import eq, load, t

LPO = make_ordering("lpo")


def state(**kw):
    kw.setdefault("timeout", None)
    return ProverState(SaturationParams(**kw))


def fact(st, text, name="ax"):
    return st.new_clause(True, *eq(text), Axiom(name))


def goal(st, text, name="goal", answer=None):
    l, r = eq(text)
    return st.new_clause(False, l, r, GoalStep(name), answer=answer)


def active(st, text, name="ax"):
    c = fact(st, text, name)
    st.activate(c)
    return c


def sides(c):
    return (c.left, c.right)


def has_variant(clauses, text):
    want = eq(text)
    return any(is_variant(sides(c), want) for c in clauses)


# ---------------------------------------------------------------- inferences

def test_superpose_right_identity_into_times():
    # rewriting into plus(n,o) needs it to be the larger side
    st = state(precedence=Precedence([("plus", 2), ("times", 2)]))
    c1 = fact(st, "plus(X,o) = X")
    c2 = fact(st, "times(s(o),n) = plus(n,o)")
    out = superpose_right(c1, c2, st.ordering, st.bag)
    assert [sides(c) for c in out] == [eq("times(s(o),n) = n")]
    step = out[0].step
    assert step.rule is Rule.SUP_RIGHT and step.position == (2,)
    assert list(step.subst.values()) == [t("n")]


def test_superposition_blocked_into_smaller_side():
    st = state(precedence=Precedence([("times", 2), ("plus", 2)]))
    c1 = fact(st, "plus(X,o) = X")
    c2 = fact(st, "times(s(o),n) = plus(n,o)")
    assert superpose_right(c1, c2, st.ordering, st.bag) == []


def test_superpose_right_lencat_into_catA():
    st = state(precedence=Precedence([("len", 2), ("plus", 2)]))
    cat_a = fact(st, "cat(cat(X,Y),Z) = cat(X,cat(Y,Z))", "catA")
    lencat = fact(st, "plus(len(W,X),len(W,Y)) = len(W,cat(X,Y))", "lencat")
    out = superpose_right(cat_a, lencat, st.ordering, st.bag)
    assert has_variant(out, "plus(len(W,cat(X,Y)),len(W,Z)) = len(W,cat(X,cat(Y,Z)))")


def test_superpose_identical_ground_equations_gives_only_tautologies():
    st = state()
    c1 = fact(st, "f(a) = b")
    c2 = fact(st, "f(a) = b")
    out = superpose_right(c1, c2, st.ordering, st.bag)
    assert out and all(is_tautology(c) for c in out)


def test_superposition_never_into_variables():
    st = state()
    c1 = fact(st, "f(X) = X")
    c2 = fact(st, "g(Y) = Y")
    assert superpose_right(c1, c2, st.ordering, st.bag) == []


def test_narrowing_twice_then_equality_resolution():
    st = state()
    rule = fact(st, "pred(s(X)) = X", "pred_s")
    l, r = eq("le(pred(X),pred(Y)) = le(n,m)")
    g = st.new_clause(False, l, r, GoalStep("g"), answer=App("ans", (l.args[0].args[0], l.args[1].args[0])))
    first = [c for c in superpose_left(rule, g, st.ordering, st.bag) if c.step.position == (1, 1)]
    assert len(first) == 1 and first[0].depth == 1
    assert is_variant(sides(first[0]), eq("le(X,pred(Y)) = le(n,m)"))
    second = superpose_left(rule, first[0], st.ordering, st.bag)
    assert len(second) == 1 and second[0].depth == 2
    assert is_variant(sides(second[0]), eq("le(X,Y) = le(n,m)"))
    sigma = equality_resolution(second[0])
    assert apply(sigma, second[0].answer) == t("ans(s(n),s(m))")


def test_narrowing_instantiates_goal_variable():
    st = state()
    rule = fact(st, "times(s(o),N) = N")
    g = goal(st, "times(A,n) = n", answer=None)
    a_var = g.left.args[0]
    g.answer = a_var
    out = superpose_left(rule, g, st.ordering, st.bag)
    closing = [c for c in out if equality_resolution(c) is not None]
    assert closing
    assert apply(equality_resolution(closing[0]), closing[0].answer) == t("s(o)")


def test_superpose_left_without_unifiable_subterm():
    st = state()
    assert superpose_left(fact(st, "f(X) = X"), goal(st, "g(a) = b"), st.ordering, st.bag) == []


def test_equality_resolution():
    st = state()
    s = equality_resolution(goal(st, "f(X) = f(a)"))
    assert list(s.values()) == [t("a")]
    assert equality_resolution(goal(st, "a = b")) is None
    s = equality_resolution(goal(st, "le(X,Y) = le(n,m)"))
    assert sorted(map(str, s.values())) == ["m", "n"]


# -------------------------------------------------------------- simplification

def test_demodulate_with_one_rule():
    st = state()
    active(st, "pred(s(X)) = X")
    c = st.new_clause(True, t("le(pred(s(a)),b)"), TRUE, Axiom("c"))
    before = GUARD.steps
    d = st.demodulate(c)
    assert sides(d) == (t("le(a,b)"), TRUE)
    assert d.step.rule is Rule.DEMOD
    assert GUARD.steps == before + 1


def test_demodulate_two_steps():
    st = state()
    active(st, "plus(X,o) = X")
    active(st, "times(s(o),N) = N")
    d = st.demodulate(fact(st, "times(s(o),plus(a,o)) = c"))
    assert sides(d) == eq("a = c")
    assert d.step.rule is Rule.DEMOD and st.bag[d.step.parent2].step.rule is Rule.DEMOD


def test_demodulate_without_rules_is_identity():
    st = state()
    c = fact(st, "f(a) = b")
    assert st.demodulate(c) is c


def test_demodulation_uses_unoriented_rule_only_when_instance_decreases():
    st = state(precedence=Precedence([("a", 0), ("b", 0)]))
    active(st, "f(X,Y) = f(Y,X)")
    assert sides(st.demodulate(fact(st, "g(f(a,b)) = c"))) == eq("g(f(b,a)) = c")
    c = fact(st, "g(f(b,a)) = c")
    assert st.demodulate(c) is c


def test_every_demodulation_step_decreases():
    st = build_state(load("grp_right_inverse.p"), SaturationParams(timeout=None))
    st.run()
    o = st.ordering
    for c in st.bag:
        if c.step.__class__.__name__ == "Inferred" and c.step.rule is Rule.DEMOD:
            rule, parent = st.bag[c.step.parent1], st.bag[c.step.parent2]
            l = rule.left if c.step.direction.value == "lr" else rule.right
            r = rule.right if c.step.direction.value == "lr" else rule.left
            sub = subterm_at(parent.side(c.step.position[0]), c.step.position[1:])
            assert o.compare(sub, apply(c.step.subst, r)).value == ">"
            assert apply(c.step.subst, l) == sub


def test_forward_simplify():
    st = state()
    assert st.forward_simplify(fact(st, "a = a")) is None
    active(st, "plus(X,o) = X")
    assert st.forward_simplify(fact(st, "plus(a,o) = a")) is None
    kept = st.forward_simplify(fact(st, "g(plus(a,o)) = b"))
    assert sides(kept) == eq("g(a) = b")


def test_forward_simplify_subsumption_without_rewriting():
    st = state()
    active(st, "f(X,Y) = f(Y,X)")
    assert st.forward_simplify(fact(st, "f(a,b) = f(b,a)")) is None


def test_backward_simplify_removes_subsumed_passive():
    st = state()
    p = fact(st, "h(a,b,c) = a")
    st._enqueue(p)
    g = active(st, "h(X,Y,Z) = X")
    assert st.backward_simplify(g) == []
    assert p.id not in st.passive
    assert st.stats.backward_deleted == 1


def test_backward_simplify_rewrites_active():
    st = state()
    old = active(st, "f(pred(s(a)),X) = X")
    rule = active(st, "pred(s(X)) = X")
    out = st.backward_simplify(rule)
    assert [sides(c) for c in out] == [eq("f(a,X) = X")] or is_variant(sides(out[0]), eq("f(a,X) = X"))
    assert old.id not in st.active


def test_backward_simplify_without_interaction():
    st = state()
    c = active(st, "f(a) = b")
    g = active(st, "g(X) = X")
    assert st.backward_simplify(g) == []
    assert c.id in st.active and len(st.passive) == 0


# ---------------------------------------------------------------- selection

def _queue(ratio, n=10):
    q = PassiveQueue(ratio)
    bag_state = state()
    for i in range(n):
        # later clauses are lighter
        c = bag_state.new_clause(True, App("f", tuple(App("a", ()) for _ in range(n - i))),
                                 App("b", ()), Axiom(f"c{i}"))
        q.push(c)
    return q


def test_select_oldest_first():
    q = _queue((1, 0))
    assert [select(q) for _ in range(10)] == list(range(10))
    assert select(q) is None


def test_select_lightest_first():
    q = _queue((0, 1))
    assert [select(q) for _ in range(10)] == list(range(9, -1, -1))


def test_select_ratio_one_to_four():
    q = _queue((1, 4))
    kinds = [q.pop()[1] for _ in range(10)]
    assert [i + 1 for i, k in enumerate(kinds) if k == "age"] == [1, 6]


def test_privileged_go_first():
    q = _queue((0, 1), 3)
    st = state()
    c = st.new_clause(True, t("f(a,a,a,a,a,a)"), t("b"), Axiom("p"))
    q.push(c, privileged=True)
    assert q.pop() == (c, "privileged")


def test_bad_ratio_rejected():
    with pytest.raises(ValueError):
        SaturationParams(age_weight=(0, 0))
    with pytest.raises(ValueError):
        SaturationParams(max_weight=1)


# ---------------------------------------------------------------- main loop

def test_ground_goal_proves_in_two_iterations():
    st = build_state(load("pred_le.p"), SaturationParams())
    out = st.run()
    assert isinstance(out, Proof)
    assert st.stats.iterations <= 2


def test_unprovable_goal_saturates():
    st = state()
    st.add_goal("g", *eq("a = b"))
    assert isinstance(st.run(), Saturated)


def test_zero_timeout_is_resource_out():
    st = build_state(load("grp_right_inverse.p"), SaturationParams(timeout=0))
    assert st.run() == ResourceOut("timeout")


def test_iteration_cap():
    st = build_state(load("grp_inverse_product.p"), SaturationParams(max_iterations=1, timeout=None))
    assert st.run() == ResourceOut("iterations")


def test_weight_drops_make_saturation_a_resource_out():
    st = build_state(load("grp_right_inverse.p"), SaturationParams(max_weight=5, timeout=None))
    out = st.run()
    assert out == ResourceOut("max_weight")
    assert st.stats.dropped > 0


def test_goal_closed_by_unifying_fact():
    st = state()
    st.add_axiom("ax", *eq("f(X,b) = g(X)"))
    st.add_goal("g", *eq("f(a,Y) = g(a)"))
    out = st.run()
    assert isinstance(out, Proof)
    assert out.goal.step.rule is Rule.REWRITE


@pytest.mark.parametrize("kind", ["lpo", "kbo", "nrkbo", "rpo"])
def test_group_right_identity_every_ordering(kind):
    st = build_state(load("grp_right_identity.p"), SaturationParams(ordering=kind))
    assert isinstance(st.run(), Proof)


# ---------------------------------------------------------------- properties

def _commutativity_goal_state(**kw):
    """Group axioms against a false goal: the loop runs as long as we let it."""
    st = state(**kw)
    for c in load("grp_right_identity.p").axioms:
        st.add_axiom(c.name, c.left, c.right)
    st.add_goal("g", *eq("mult(a,b) = mult(b,a)"))
    return st


@pytest.mark.parametrize("ratio", [(1, 4), (1, 1), (2, 3)])
def test_age_picks_are_increasing(ratio):
    st = _commutativity_goal_state(age_weight=ratio, max_iterations=50)
    st.run()
    ages = [cid for kind, cid in st.stats.selections if kind == "age"]
    assert len(ages) >= 50 * ratio[0] // sum(ratio) - 1
    assert ages == sorted(ages) and len(set(ages)) == len(ages)


def test_breadth_first_runs_are_deterministic():
    def derived(max_weight):
        st = _commutativity_goal_state(age_weight=(1, 0), max_iterations=40, max_weight=max_weight)
        st.run()
        return [str(c) for c in st.bag]

    assert derived(10**6) == derived(10**6)
    # with breadth-first selection the weight heuristic never decides a pick
    assert derived(10**6) == derived(10**5)


@pytest.mark.parametrize("iterations", [10, 25, 40])
def test_active_set_is_closed_under_superposition(iterations):
    st = _commutativity_goal_state(max_iterations=iterations)
    st.run()
    assert not set(st.active) & {c.id for c in st.passive}
    kept = [c for c in list(st.active.values()) + [c for c in st.passive if c.positive]]
    probe = ProverState(st.params, base=st)  # demodulates with the run's rules, allocates privately

    def normal(c):
        return probe.demodulate(c)

    reps = [normal(c) for c in kept]
    actives = list(st.active.values())
    for c1 in actives:
        for c2 in actives:
            for child in superpose_right(c1, c2, st.ordering, probe.bag):
                if child.weight > st.params.max_weight:
                    continue
                n = normal(child)
                if is_tautology(n) or n.weight > st.params.max_weight:
                    continue
                assert any(subsumes(d, n) for d in reps), f"{child} normalizes to {n}"
