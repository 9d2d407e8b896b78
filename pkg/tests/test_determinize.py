import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mucalc.determinize import (
    BudgetExhausted, ExplicitNPA, co_determinize, complement, determinize, dpa_accepts_lasso,
    npa_accepts_lasso, parity_to_buchi, random_npa,
)
from mucalc.formula import dia, fl_closure
from mucalc.selftest import random_lasso, suite_determinize
from mucalc.tracking import build_tracking, choice, selection

from conftest import formula


def loop(prio):
    return ExplicitNPA(1, (0,), [prio], {(0, "a"): (0,)})


def buchi_accepts(nba, u, v):
    # a Buchi automaton is a parity automaton with priorities 2 (accepting) and 1
    view = ExplicitNPA(nba.num_states, nba.initial, [2 if nba.accepting(b) else 1 for b in range(nba.num_states)])
    view.delta = nba.delta
    return npa_accepts_lasso(view, u, v)


def test_buchi_even_self_loop():
    assert buchi_accepts(parity_to_buchi(loop(2)), [], ["a"])


def test_buchi_odd_self_loop():
    assert not buchi_accepts(parity_to_buchi(loop(1)), [], ["a"])


def test_buchi_alternating_cycle():
    npa = ExplicitNPA(2, (0,), [1, 2], {(0, "a"): (1,), (1, "a"): (0,)})
    assert npa_accepts_lasso(npa, [], ["a"])
    assert buchi_accepts(parity_to_buchi(npa), [], ["a"])


def test_buchi_size():
    npa = ExplicitNPA(3, (0,), [1, 2, 4], {})
    assert parity_to_buchi(npa).num_states == 3 * (1 + 2)


def finitely_many_a():
    # state 0 reads anything, state 1 only b and accepts
    return ExplicitNPA(2, (0,), [1, 2], {(0, "a"): (0,), (0, "b"): (0, 1), (1, "b"): (1,)})


def test_determinize_finitely_many_a():
    dpa = determinize(parity_to_buchi(finitely_many_a()))
    assert not dpa_accepts_lasso(dpa, [], ["a"])
    assert dpa_accepts_lasso(dpa, [], ["b"])
    assert dpa_accepts_lasso(dpa, ["a", "a", "b"], ["b"])
    assert not dpa_accepts_lasso(dpa, [], ["a", "b"])


def test_empty_language():
    dpa = determinize(parity_to_buchi(loop(1)))
    rng = random.Random(1)
    for _ in range(100):
        assert not dpa_accepts_lasso(dpa, *random_lasso(rng, ["a", "b"]))


def test_accepting_sink():
    npa = ExplicitNPA(2, (0,), [1, 2], {(0, "a"): (1,), (1, "a"): (1,), (1, "b"): (1,)})
    dpa = determinize(parity_to_buchi(npa))
    for v in itertools.product("ab", repeat=3):
        assert dpa_accepts_lasso(dpa, ["a"], list(v))
        assert not dpa_accepts_lasso(dpa, ["b"], list(v))


def test_complement_of_universal():
    npa = ExplicitNPA(1, (0,), [2], {(0, "a"): (0,), (0, "b"): (0,)})
    dpa = determinize(parity_to_buchi(npa))
    comp = complement(dpa)
    rng = random.Random(2)
    for _ in range(100):
        w = random_lasso(rng, ["a", "b"])
        assert dpa_accepts_lasso(dpa, *w) and not dpa_accepts_lasso(comp, *w)


def test_complement_shifts_priorities_by_one():
    dpa = determinize(parity_to_buchi(finitely_many_a()))
    for w in (["a"], ["b"], ["a", "b"]):
        dpa_accepts_lasso(dpa, [], w)
    comp = complement(dpa)
    assert [comp.priority(q) for q in range(dpa.num_states)] == [dpa.priority(q) + 1 for q in range(dpa.num_states)]


def test_least_fixpoint_unfolded_forever_is_bad():
    chi = formula("mu X. dia X")
    t = fl_closure(chi)
    npa = build_tracking(t)
    word = [choice([]), selection([(t.index[dia(chi)], 0)])]
    assert npa_accepts_lasso(npa, [], word)
    assert not dpa_accepts_lasso(co_determinize(npa), [], word)


def test_greatest_fixpoint_unfolded_forever_is_good():
    chi = formula("nu X. dia X")
    t = fl_closure(chi)
    npa = build_tracking(t)
    word = [choice([]), selection([(t.index[dia(chi)], 0)])]
    assert not npa_accepts_lasso(npa, [], word)
    assert dpa_accepts_lasso(co_determinize(npa), [], word)


def test_dead_run_rejected():
    t = fl_closure(formula("p & q"))
    npa = build_tracking(t)
    assert not npa_accepts_lasso(npa, [], [selection([])])
    assert dpa_accepts_lasso(co_determinize(npa), [], [selection([])])


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        npa_accepts_lasso(loop(2), ["a"], [])


def test_budget():
    chi = formula("nu X. mu Y. ((p & dia X) | dia Y)")
    npa = build_tracking(fl_closure(chi))
    dpa = co_determinize(npa, max_states=2)
    with pytest.raises(BudgetExhausted):
        q = dpa.initial[0]
        for letter in [choice([]), choice([(1, 0)]), choice([(1, 1)]), selection([])] * 3:
            q = dpa.step(q, letter)


def test_initial_label_is_root_formula():
    npa = build_tracking(fl_closure(formula("mu X. (p | dia X)")))
    dpa = co_determinize(npa)
    assert dpa.label(dpa.initial[0]) == frozenset({0})


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_complement_exact_on_lassos(seed):
    rng = random.Random(seed)
    npa = random_npa(rng, 6, (0, 1, 2), (1, 2, 3, 4))
    dpa = co_determinize(npa)
    for _ in range(30):
        u, v = random_lasso(rng, (0, 1, 2))
        assert dpa_accepts_lasso(dpa, u, v) != npa_accepts_lasso(npa, u, v)
        # determinism and priority range on everything explored so far
    for q in range(dpa.num_states):
        assert 1 <= dpa.priority(q) <= dpa.max_priority
        for a in (0, 1, 2):
            assert len(dpa.delta(q, a)) == 1


def test_selftest_suite():
    rep = suite_determinize(random.Random(5), cases=300)
    assert rep.ok, rep.failures
