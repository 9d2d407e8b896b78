import random

import pytest
from hypothesis import given, settings, strategies as st

from mucalc.config import EngineOptions
from mucalc.coalgebra import satisfies
from mucalc.corpus import CORPUS
from mucalc.engine import SAT, UNKNOWN, UNSAT, SolverState, nested_fixpoint, nested_fixpoint_stages, run
from mucalc.formula import fl_closure
from mucalc.randgen import random_formula

from conftest import formula

QUICK = [e for e in CORPUS if e.name not in ("unguarded", "poly-tree")]


def expanded(text, logic="rel", n=None):
    st_ = SolverState(formula(text, logic), (logic,))
    while st_.in_U and (n is None or len(st_.Q) < n):
        st_.expand(st_.pop())
    return st_


# expansion --------------------------------------------------------------------------


def test_first_expansion_fills_frontier():
    s = SolverState(formula("mu X. (p | dia X)"), ("rel",))
    q = s.pop()
    assert q == s.q_init and s.label(q) == {0}
    s.expand(q)
    assert s.frontier == set(s.successors(q)) - {q}
    with pytest.raises(ValueError):
        s.expand(q)


def test_no_modal_literals_single_selection():
    s = expanded("p & q", n=1)
    (q,) = s.Q
    assert len(s.sel_succ[q]) == 1
    letter, t = s.sel_succ[q][0]
    assert letter.items == () and s.label(t) == frozenset()


def test_falsum_node_is_expanded_but_universal():
    s = expanded("p & false")
    bot = [q for q in s.Q if s.label(q) & s._bot]
    assert bot and all(q in s.choice_succ for q in bot)
    for q in bot:
        assert s.g_member(q, frozenset()) and not s.f_member(q, frozenset(s.Q))


def test_top_needs_only_its_choice_successor():
    s = expanded("true")
    e = s.solve_E()
    assert s.q_init in e
    for q in s.Q:
        assert s.f_member(q, frozenset(s.Q))


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_propagation_monotone(seed):
    rng = random.Random(seed)
    s = SolverState(formula(str(random_formula(rng, rng.randint(3, 10)))), ("rel",))
    while s.in_U and len(s.Q) < 40:
        s.expand(s.pop())
    nodes = list(s.Q)
    for q in nodes:
        small = frozenset(x for x in nodes if rng.random() < 0.3)
        big = small | {x for x in nodes if rng.random() < 0.5}
        if s.f_member(q, small):
            assert s.f_member(q, big)
        if s.g_member(q, small):
            assert s.g_member(q, big)


# nested fixpoints -------------------------------------------------------------------


def test_nested_fixpoint_trivial():
    u = frozenset({1, 2})
    assert nested_fixpoint(u, ("mu", "nu"), lambda env: frozenset()) == frozenset()
    assert nested_fixpoint(u, ("mu", "nu"), lambda env: u) == u
    assert nested_fixpoint(u, ("nu",), lambda env: env[0]) == u
    assert nested_fixpoint(u, ("mu",), lambda env: env[0]) == frozenset()


def test_stage_log_justifies_every_node():
    u = frozenset(range(4))
    # q is in f if q-1 is in X_1 (mu); 0 always: a chain of stages 0..3
    f = lambda env: frozenset(q for q in u if q == 0 or q - 1 in env[0])
    log = nested_fixpoint_stages(u, ("mu",), f)
    assert log.value == u
    assert [log.rank[q] for q in range(4)] == [(0,), (1,), (2,), (3,)]
    for q in u:
        assert q in f(list(log.witness[q]))


def test_stage_descent_along_strategy_edges():
    for text in ("nu X. mu Y. ((p & dia X) | dia Y)", "mu X. (p | dia X)", "nu X. (dia X & mu Y. (p | dia Y))"):
        s = expanded(text)
        nodes, binders, fn = s.propagation()
        lvl, _ = s.levels(nodes)
        log = nested_fixpoint_stages(nodes, binders, fn)
        assert s.q_init in log.value
        for q in log.value:
            vec = log.witness[q]
            l = lvl[q]
            assert s.f_member(q, vec[l])
            for t in s._targets[q]:
                if t not in vec[l]:
                    continue
                if binders[l] == "mu":
                    assert log.rank_from(t, l) < log.rank_from(q, l)
                else:
                    assert log.rank_from(t, l) <= log.rank_from(q, l)


# verdicts ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,logic,expected", [
    ("mu X. (p | dia X)", "rel", SAT),
    ("mu X. dia X", "rel", UNSAT),
    ("nu X. (a & <1> X)", "graded", SAT),
    ("nu X. (safe & <19/20> X)", "prob", SAT),
])
def test_run_examples(text, logic, expected):
    res = run(text, (logic,), EngineOptions(verify=True))
    assert res.verdict == expected
    if expected == SAT:
        assert res.verified and satisfies(res.model, res.state.chi)
    assert res.stats.label_checks > 0


def test_graded_binary_tree_model():
    res = run("nu X. (a & <1> X)", ("graded",), EngineOptions(extract_model=True))
    m = res.model
    assert sum(w for y, w in m.weights[m.root].items() if "a" in m.atoms[y]) >= 2


@pytest.mark.parametrize("entry", QUICK, ids=lambda e: e.name)
def test_early_and_final_solving_agree(entry):
    final = run(entry.text, entry.logics)
    early = run(entry.text, entry.logics, EngineOptions(solve_every=1))
    ordered = run(entry.text, entry.logics, EngineOptions(expansion_order="label-size", solve_every=3))
    assert final.verdict == early.verdict == ordered.verdict == entry.expected
    assert early.stats.expanded <= final.stats.expanded


@pytest.mark.parametrize("entry", [e for e in QUICK if e.logic == "rel"], ids=lambda e: e.name)
def test_E_and_A_partition_after_full_expansion(entry):
    s = run(entry.text, entry.logics).state
    assert not s.in_U
    e, a = s.solve_E(), s.solve_A()
    assert e | a == set(s.Q) and not e & a


@pytest.mark.parametrize("entry", QUICK, ids=lambda e: e.name)
def test_priority_compression_preserves_fixpoints(entry):
    s = run(entry.text, entry.logics).state
    e = s.solve_E()
    s.options.compress_priorities = False
    assert s.solve_E() == e


def test_budget_gives_unknown():
    res = run("nu X. mu Y. ((p & dia X) | dia Y)", ("rel",), EngineOptions(max_nodes=1))
    assert res.verdict == UNKNOWN and "budget" in res.reason and res.exit_code == 30
    res = run("nu X. mu Y. ((p & dia X) | dia Y)", ("rel",), EngineOptions(max_dpa_states=2))
    assert res.verdict == UNKNOWN and "exceeded" in res.reason


def test_exit_codes():
    assert run("p").exit_code == 10 and run("p & !p").exit_code == 20


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_random_sat_verdicts_verified(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, rng.randint(2, 12))
    res = run(phi, ("rel",), EngineOptions(deep_verify=True, max_nodes=400))
    if res.verdict == SAT:
        assert res.verified
