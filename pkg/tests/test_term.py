import pickle
import random

import pytest
from hypothesis import given, settings, strategies as st

from smartmatch.term import (App, Var, apply, compose, const, fn, is_variant, match, nonvar_positions,
                             occurs, positions, rename, replace_at, shift_vars, subterm_at, to_str,
                             unify, unify_pairs, variables, weight)

from helpers import random_term, t

X, Y, Z = Var(0), Var(1), Var(2)
a, b = const("a"), const("b")


def test_weight_counts_symbols_and_variables():
    assert weight(fn("f", X, fn("g", a))) == 4
    assert weight(X) == 1
    assert weight(a) == 1


def test_to_str_and_parse_agree():
    s = fn("f", X, fn("g", a), const("it's"))
    assert to_str(s) == "f(X0,g(a),'it\\'s')"
    from smartmatch.tptp import parse_term
    assert parse_term(to_str(s)) == s


def test_constant_named_like_a_variable_is_quoted():
    c = const("X7")
    assert to_str(c) == "'X7'"


def test_positions_preorder():
    s = fn("f", X, fn("g", a))
    assert [p for p, _ in positions(s)] == [(), (1,), (2,), (2, 1)]
    assert [p for p, _ in nonvar_positions(s)] == [(), (2,), (2, 1)]


def test_subterm_and_replace():
    s = fn("f", X, fn("g", a))
    assert subterm_at(s, (2, 1)) == a
    assert subterm_at(s, (3,)) is None
    assert subterm_at(s, (1, 1)) is None
    assert replace_at(s, (2, 1), b) == fn("f", X, fn("g", b))
    assert replace_at(s, (), b) == b
    with pytest.raises(ValueError):
        replace_at(s, (2, 2), b)


def test_variables_first_occurrence_order():
    assert variables(fn("f", Y, fn("g", X), Y)) == [1, 0]


def test_unify_basic():
    s = unify(fn("f", X, fn("g", Y)), fn("f", a, fn("g", b)))
    assert s == {0: a, 1: b}


def test_unify_occurs_check():
    assert unify(X, fn("f", X)) is None
    assert unify(fn("f", X, X), fn("f", Y, fn("g", Y))) is None


def test_unify_clash():
    assert unify(fn("f", a), fn("f", b)) is None
    assert unify(fn("f", a), fn("g", a)) is None
    assert unify(App("f", (a,)), App("f", (a, a))) is None


def test_unify_result_is_idempotent():
    s = unify(fn("f", X, Y, Z), fn("f", Y, Z, a))
    assert all(apply(s, v) == v for v in s.values())
    assert apply(s, X) == a


def test_unify_pairs_simultaneous():
    s = unify_pairs([(X, fn("g", Y)), (Y, a)])
    assert apply(s, X) == fn("g", a)
    assert unify_pairs([(X, a), (X, b)]) is None


def test_match_is_one_sided():
    assert match(fn("f", X, X), fn("f", a, a)) == {0: a}
    assert match(fn("f", X, X), fn("f", a, b)) is None
    assert match(fn("f", a), fn("f", X)) is None  # target variables are rigid
    assert match(X, fn("g", Y)) == {0: fn("g", Y)}


def test_compose_applies_in_order():
    first = {0: fn("g", Y)}
    then = {1: a}
    s = compose(first, then)
    u = fn("f", X, Y)
    assert apply(s, u) == apply(then, apply(first, u))


def test_rename_and_shift():
    import itertools
    counter = itertools.count(100)
    r = rename(fn("f", X, Y, X), {}, counter)
    assert r == fn("f", Var(100), Var(101), Var(100))
    assert shift_vars(fn("f", X, Y), 5) == fn("f", Var(5), Var(6))


def test_is_variant():
    assert is_variant((fn("f", X, Y),), (fn("f", Y, X),))
    assert not is_variant((fn("f", X, X),), (fn("f", X, Y),))
    assert not is_variant((fn("f", X, Y),), (fn("f", X, X),))
    assert not is_variant((X, Y), (X,))


def test_occurs():
    assert occurs(0, fn("f", a, fn("g", X)))
    assert not occurs(1, fn("f", a, X))


def test_terms_pickle():
    s = fn("f", X, fn("g", a))
    assert pickle.loads(pickle.dumps(s)) == s


def test_parse_helper_numbers_variables_by_first_occurrence():
    assert t("f(Y,X,Y)") == fn("f", X, Y, X)


# ------------------------------------------------------------------ properties

@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_unifier_unifies(seed):
    rng = random.Random(seed)
    s = random_term(rng, 3, nvars=4)
    u = shift_vars(random_term(rng, 3, nvars=4), 2)
    sigma = unify(s, u)
    if sigma is not None:
        assert apply(sigma, s) == apply(sigma, u)
        assert all(apply(sigma, v) == v for v in sigma.values())


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_unifier_of_instance_pair_is_most_general(seed):
    """For u an instance of s, unify(s, u) exists and is no more specific than the matcher."""
    rng = random.Random(seed)
    s = random_term(rng, 3, nvars=3)
    theta = {v: random_term(rng, 2, nvars=0) for v in range(3)}
    u = apply(theta, s)
    sigma = unify(s, u)
    assert sigma is not None
    assert apply(sigma, s) == u
    m = match(s, u)
    assert m is not None and apply(m, s) == u


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_replace_then_subterm(seed):
    rng = random.Random(seed)
    s = random_term(rng, 4)
    ps = [p for p, _ in positions(s)]
    p = rng.choice(ps)
    r = random_term(rng, 2)
    assert subterm_at(replace_at(s, p, r), p) == r
