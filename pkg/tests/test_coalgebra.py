import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mucalc.coalgebra import Coalgebra, ModelFormatError, dump_model, load_model, modal_holds, satisfies, semantics_eval
from mucalc.formula import fl_closure, normalize, unfold
from mucalc.formula.ast import BINDERS
from mucalc.formula.ast import ModalOp
from mucalc.modelsearch import find_model, has_model
from mucalc.poly import Polynomial
from mucalc.randgen import random_formula, random_model

from conftest import formula


def chain(n):
    """0 -> 1 -> ... -> n-1, with p only at the end."""
    succ = [frozenset({x + 1}) for x in range(n - 1)] + [frozenset()]
    return Coalgebra(("rel",), n, atoms=[frozenset()] * (n - 1) + [frozenset({"p"})], succ=succ)


def test_reachability_on_chain():
    m = chain(4)
    assert semantics_eval(m, formula("mu X. (p | dia X)")) == frozenset(range(4))
    assert semantics_eval(m, formula("mu X. dia X")) == frozenset()
    assert semantics_eval(m, formula("nu X. dia X")) == frozenset()
    # every state reaches a dead end
    assert semantics_eval(m, formula("mu X. box X")) == frozenset(range(4))


def test_greatest_fixpoint_on_loop():
    m = Coalgebra(("rel",), 2, succ=[frozenset({1}), frozenset({1})])
    assert semantics_eval(m, formula("nu X. dia X")) == {0, 1}
    assert semantics_eval(m, formula("mu X. box X")) == frozenset()


def test_graded_binary_tree_by_double_loop():
    m = Coalgebra(("graded",), 1, atoms=[frozenset({"a"})], weights=[{0: 2}])
    assert satisfies(m, formula("nu X. (a & <1> X)", "graded"))
    m.weights[0] = {0: 1}
    assert not satisfies(m, formula("nu X. (a & <1> X)", "graded"))


def test_probabilistic_safety():
    m = Coalgebra(("prob",), 2, atoms=[frozenset({"safe"}), frozenset()],
                  dist=[{0: F(19, 20), 1: F(1, 20)}, {1: F(1)}])
    assert not satisfies(m, formula("nu X. (safe & <19/20> X)", "prob"))
    m.dist[0] = {0: F(24, 25), 1: F(1, 25)}
    assert satisfies(m, formula("nu X. (safe & <19/20> X)", "prob"))


def test_polynomial_modality():
    m = Coalgebra(("graded",), 3, atoms=[frozenset(), frozenset({"c"}), frozenset({"a"})],
                  weights=[{1: 3, 2: 1}, {}, {}])
    # 3*3 + 1^2 - 10 = 0 is not positive; one more c-successor makes it 3
    assert not satisfies(m, formula("<3*x1 + x2^2 - 10>(c, a)", "graded"))
    m.weights[0] = {1: 4, 2: 1}
    assert satisfies(m, formula("<3*x1 + x2^2 - 10>(c, a)", "graded"))


def test_box_is_dual_of_diamond():
    m = Coalgebra(("prob",), 2, atoms=[frozenset({"a"}), frozenset()], dist=[{0: F(1, 3), 1: F(2, 3)}, {1: F(1)}])
    for th in (F(0), F(1, 3), F(2, 3)):
        dia = ModalOp("prob", "dia", Polynomial.threshold(th))
        ext = {0}
        assert modal_holds(m, 0, dia, [ext]) != modal_holds(m, 0, dia.dual(), [{1}])


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.sampled_from(["rel", "graded", "prob", "fusion"]))
def test_unfolding_invariance(seed, logic):
    rng = random.Random(seed)
    logics = ("rel", "prob") if logic == "fusion" else (logic,)
    phi = normalize(random_formula(rng, rng.randint(3, 12), logic, polyadic=0.3))
    m = random_model(rng, logics, rng.randint(1, 4))
    for f in fl_closure(phi).formulas:
        if f.kind in BINDERS:
            assert semantics_eval(m, f) == semantics_eval(m, unfold(f))


@settings(max_examples=60)
@given(st.integers(0, 2**32), st.sampled_from(["rel", "graded", "prob"]))
def test_modal_clauses_monotone(seed, logic):
    rng = random.Random(seed)
    m = random_model(rng, (logic,), rng.randint(1, 4))
    phi = normalize(random_formula(rng, 6, logic, polyadic=0.5))
    for f in fl_closure(phi).formulas:
        if f.kind != "modal" or f.op.is_atom:
            continue
        small = [frozenset(x for x in m.states if rng.random() < 0.4) for _ in f.children]
        big = [s | {x for x in m.states if rng.random() < 0.4} for s in small]
        for x in m.states:
            if modal_holds(m, x, f.op, small):
                assert modal_holds(m, x, f.op, big)


@settings(max_examples=60)
@given(st.integers(0, 2**32), st.sampled_from([("rel",), ("graded",), ("prob",), ("rel", "prob")]))
def test_dump_round_trip(seed, logics):
    m = random_model(random.Random(seed), logics, 3)
    text = dump_model(m)
    assert dump_model(load_model(text)) == text
    assert load_model(text) == m


def test_model_file_format():
    m = Coalgebra(("prob",), 1, atoms=[frozenset({"safe"})], dist=[{0: F(1)}])
    assert dump_model(m) == "mucalc-model 1\nlogic prob\nstates 1\nroot 0\natoms 0 safe\nprob 0 0 1/1\nend\n"


@pytest.mark.parametrize("text", [
    "",
    "mucalc-model 1\nlogic rel\nstates 1\nroot 0\n",
    "mucalc-model 1\nlogic rel\nstates 1\nroot 3\nend\n",
    "mucalc-model 1\nlogic rel\nstates 1\nroot 0\nsucc 0 4\nend\n",
    "mucalc-model 1\nlogic prob\nstates 1\nroot 0\nprob 0 0 1/2\nend\n",
    "mucalc-model 1\nlogic rel\nstates 1\nroot 0\nfoo 0\nend\n",
])
def test_corrupted_models_rejected(text):
    with pytest.raises(ModelFormatError):
        load_model(text)


# small-model search --------------------------------------------------------------------


def test_find_model_minimal():
    found = find_model(formula("mu X. (p | dia X)"), 3)
    assert found.states == 1 and satisfies(found.model, formula("mu X. (p | dia X)"), found.state)


def test_find_model_needs_two_states():
    phi = formula("dia p & dia !p")
    assert find_model(phi, 1) is None
    found = find_model(phi, 3)
    assert found.states == 2 and satisfies(found.model, phi, found.state)


def test_no_model_for_contradictions():
    assert not has_model(formula("mu X. dia X"), 3)
    assert not has_model(formula("(mu X. p | dia X) & (nu Y. !p & box Y)"), 3)


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_search_agrees_with_semantics(seed):
    rng = random.Random(seed)
    phi = normalize(random_formula(rng, rng.randint(2, 10)))
    found = find_model(phi, 2, ["p", "q"])
    if found is not None:
        assert satisfies(found.model, phi, found.state)
    else:
        # every 1- and 2-state model refutes phi everywhere
        for _ in range(20):
            m = random_model(rng, ("rel",), rng.randint(1, 2))
            assert not semantics_eval(m, phi)
