import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mucalc.formula.ast import ModalOp
from mucalc.onestep import (
    ContractError, GradedWitness, Literal, OneStepPair, ProbWitness, RelWitness, Unresolved, graded_bound,
    is_sat, normalize_pair, oss_brute, oss_fusion, oss_graded, oss_probabilistic, oss_relational, solve_pair,
    support_bound, validate,
)
from mucalc.onestep.oracle import OracleBudgetError
from mucalc.poly import Polynomial
from mucalc.randgen import random_pair
from mucalc.selftest import suite_onestep


def rel(kind, a):
    return Literal(ModalOp("rel", kind), (a,))


def atom_lit(name, logic="rel", neg=False):
    return Literal(ModalOp(logic, "natom" if neg else "atom", atom=name))


def thr(logic, kind, m, a):
    return Literal(ModalOp(logic, kind, Polynomial.threshold(F(m))), (a,))


def poly(logic, kind, arity, terms, *args):
    return Literal(ModalOp(logic, kind, Polynomial(arity, terms)), args)


def pair(gamma, theta):
    return OneStepPair.make(gamma, theta)


# relational ---------------------------------------------------------------------------


def test_relational_shared_element():
    p = pair([rel("dia", "a"), rel("box", "b")], [{"a", "b"}])
    w = oss_relational(p)
    assert w == RelWitness((frozenset({"a", "b"}),)) and validate(p, w)


def test_relational_diamond_missing_box_argument():
    assert oss_relational(pair([rel("dia", "a"), rel("box", "b")], [{"a"}])) is None


def test_relational_vacuous_box():
    w = oss_relational(pair([rel("box", "b")], []))
    assert w is not None and w.chosen == ()


def test_relational_atom_clash():
    assert oss_relational(pair([atom_lit("p"), atom_lit("p", neg=True)], [{"a"}])) is None
    w = oss_relational(pair([atom_lit("p"), atom_lit("q", neg=True)], []))
    assert w.atoms == frozenset({"p"})


def test_relational_rejects_other_logics():
    with pytest.raises(ContractError):
        oss_relational(pair([thr("prob", "dia", F(1, 2), "a")], [{"a"}]))


# graded -------------------------------------------------------------------------------


def test_graded_count_two():
    p = pair([thr("graded", "dia", 1, "a"), thr("graded", "box", 1, "a")], [{"a"}])
    w = oss_graded(p)
    assert w is not None and w.as_dict() == {frozenset({"a"}): 2} and validate(p, w)
    assert graded_bound(p) == 2


def test_graded_no_element_contains_argument():
    assert oss_graded(pair([thr("graded", "dia", 0, "a")], [set()])) is None


def test_graded_polynomial_sum():
    p = pair([poly("graded", "dia", 2, [((1, 0), 1), ((0, 1), 1), ((0, 0), -2)], "a", "c")], [{"a"}, {"c"}])
    w = oss_graded(p)
    assert w is not None and validate(p, w)
    d = w.as_dict()
    assert d.get(frozenset({"a"}), 0) + d.get(frozenset({"c"}), 0) > 2
    assert oss_brute(p, "graded", 6) is not None


def test_graded_too_many():
    # three a-successors, but at most one successor outside b
    p = pair([thr("graded", "dia", 2, "a"), thr("graded", "box", 1, "b")], [{"a"}, {"b"}])
    assert oss_graded(p) is None and oss_brute(p, "graded") is None
    q = pair([thr("graded", "dia", 2, "a"), thr("graded", "box", 1, "b")], [{"a"}, {"a", "b"}])
    assert validate(q, oss_graded(q))


# probabilistic ------------------------------------------------------------------------


def test_prob_disjoint_masses():
    assert oss_probabilistic(pair([thr("prob", "dia", F(1, 2), "a"), thr("prob", "dia", F(1, 2), "c")],
                                  [{"a"}, {"c"}])) is None


def test_prob_shared_element():
    p = pair([thr("prob", "dia", F(1, 2), "a"), thr("prob", "dia", F(1, 2), "c")], [{"a", "c"}])
    w = oss_probabilistic(p)
    assert w.as_dict() == {frozenset({"a", "c"}): 1} and validate(p, w)


def test_prob_product_certified():
    p = pair([poly("prob", "dia", 2, [((1, 1), 1), ((0, 0), F(-9, 10))], "a", "c")], [{"a", "c"}])
    w = oss_probabilistic(p)
    assert isinstance(w, ProbWitness) and w.as_dict() == {frozenset({"a", "c"}): 1} and validate(p, w)


def test_prob_variance_bound():
    # x(1-x) > 1/3 is impossible, and no witness exists at any resolution
    p = pair([poly("prob", "dia", 2, [((1, 1), 1), ((0, 0), F(-1, 3))], "a", "b")], [{"a"}, {"b"}])
    out = oss_probabilistic(p)
    assert out is None or isinstance(out, Unresolved)
    q = pair([poly("prob", "dia", 2, [((1, 1), 1), ((0, 0), F(-1, 5))], "a", "b")], [{"a"}, {"b"}])
    w = oss_probabilistic(q)
    assert isinstance(w, ProbWitness) and validate(q, w)


def test_prob_empty_theta_unsat():
    assert oss_probabilistic(pair([], [])) is None


def test_prob_exact_split():
    # both a and b need more than a third, so both elements get mass
    p = pair([thr("prob", "dia", F(1, 3), "a"), thr("prob", "dia", F(1, 3), "b")], [{"a"}, {"b"}])
    w = oss_probabilistic(p)
    assert w is not None and validate(p, w) and w.support == 2


# fusion -------------------------------------------------------------------------------


def test_fusion_both_parts():
    p = pair([rel("dia", "a"), thr("prob", "dia", F(1, 2), "a")], [{"a"}])
    w = oss_fusion(p, ("rel", "prob"))
    assert w is not None and w.part("rel") is not None and w.part("prob") is not None and validate(p, w)


def test_fusion_prob_part_unsat():
    p = pair([rel("dia", "a"), thr("prob", "dia", F(1, 2), "a"), thr("prob", "dia", F(1, 2), "b")],
             [{"a"}, {"b"}])
    assert oss_fusion(p, ("rel", "prob")) is None


def test_fusion_empty():
    assert is_sat(oss_fusion(pair([], [{"a"}]), ("rel", "prob")))


def test_fusion_unknown_tag():
    with pytest.raises(ContractError):
        oss_fusion(pair([thr("graded", "dia", 1, "a")], [{"a"}]), ("rel", "prob"))


# normalization ------------------------------------------------------------------------


def test_normalize_pair_fresh_names():
    p = pair([rel("dia", "a"), rel("box", "a")], [{"a"}])
    n = normalize_pair(p)
    names = [l.args[0] for l in n.gamma]
    assert len(set(names)) == 2 and all(x[2] == "a" for x in names)
    assert n.theta == (frozenset(names),)


def test_normalize_pair_empty():
    n = normalize_pair(pair([], [{"a"}]))
    assert n.gamma == () and n.theta == (frozenset(),)


@settings(max_examples=150)
@given(st.integers(0, 2**32), st.sampled_from(["rel", "graded", "prob"]))
def test_normalize_pair_equisatisfiable(seed, logic):
    p = random_pair(random.Random(seed), logic)
    try:
        expected = oss_brute(p, logic) is None
    except OracleBudgetError:
        return
    n = normalize_pair(p)
    assert (solve_pair(n, (logic,)) is None) == expected


# properties -----------------------------------------------------------------------------


@settings(max_examples=150)
@given(st.integers(0, 2**32), st.sampled_from(["rel", "graded", "prob", "fusion"]))
def test_monotone_in_theta(seed, logic):
    rng = random.Random(seed)
    p = random_pair(rng, logic, max_theta=5)
    logics = ("rel", "prob") if logic == "fusion" else (logic,)
    if not is_sat(solve_pair(p, logics)):
        return
    extra = [frozenset(x for x in p.variables if rng.random() < 0.5) for _ in range(2)]
    bigger = OneStepPair.make(p.gamma, list(p.theta) + extra, p.variables)
    w = solve_pair(bigger, logics)
    assert is_sat(w) and validate(bigger, w)


@settings(max_examples=150)
@given(st.integers(0, 2**32))
def test_prob_support_bound(seed):
    p = random_pair(random.Random(seed), "prob", linear=False)
    w = oss_probabilistic(p)
    if isinstance(w, ProbWitness):
        assert w.support <= support_bound(p) and validate(p, w)


@settings(max_examples=150)
@given(st.integers(0, 2**32))
def test_graded_truncation_matches_doubled_bound(seed):
    p = random_pair(random.Random(seed), "graded")
    try:
        doubled = oss_brute(p, "graded", 2 * graded_bound(p))
    except OracleBudgetError:
        return
    assert (oss_graded(p) is None) == (doubled is None)


def test_validator_rejects_bad_witnesses():
    p = pair([thr("graded", "dia", 1, "a")], [{"a"}])
    assert not validate(p, GradedWitness(((frozenset({"a"}), 1),)))
    assert validate(p, GradedWitness(((frozenset({"a"}), 2),)))
    q = pair([thr("prob", "dia", F(1, 2), "a")], [{"a"}, {"b"}])
    assert not validate(q, ProbWitness(((frozenset({"a"}), F(1, 2)), (frozenset({"b"}), F(1, 2)))))
    assert not validate(q, ProbWitness(((frozenset({"a"}), F(1, 2)),)))  # mass does not sum to one


@pytest.mark.parametrize("logic", ["rel", "graded", "prob", "fusion"])
def test_backend_agrees_with_brute_force(logic):
    rep = suite_onestep(random.Random(11), 150, logic)
    assert rep.ok, rep.failures


# linear solvers and Theta reduction -----------------------------------------------------


@settings(max_examples=300)
@given(st.integers(0, 2**32))
def test_simplex_agrees_with_elimination(seed):
    from mucalc.onestep.linear import EQ, GE, GT, Constraint, fm_solve, lp_solve
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    cons = [Constraint.make({v: F(rng.randint(-3, 3)) for v in range(n)}, rng.randint(-3, 3),
                            rng.choice([GT, GE, EQ])) for _ in range(rng.randint(1, 6))]
    a, b = fm_solve(n, cons), lp_solve(n, cons)
    assert (a is None) == (b is None)
    if b is not None:
        assert all(c.holds(b) for c in cons)


def test_simplex_strict_boundary():
    from mucalc.onestep.linear import GE, GT, Constraint, lp_solve
    # x > 0 and -x >= 0 is empty, x >= 0 and -x >= 0 is {0}
    assert lp_solve(1, [Constraint.make({0: 1}, 0, GT), Constraint.make({0: -1}, 0, GE)]) is None
    assert lp_solve(1, [Constraint.make({0: 1}, 0, GE), Constraint.make({0: -1}, 0, GE)]) == [0]


def test_reduced_theta_drops_dominated_elements():
    from mucalc.onestep.backends import reduced_theta
    p = pair([thr("prob", "dia", F(1, 2), "a")], [{"a"}, {"a", "b"}, set()])
    assert reduced_theta(p, p.modal_literals()) == [frozenset({"a"})]


def test_reduced_theta_keeps_classes_for_negative_coefficients():
    from mucalc.onestep.backends import reduced_theta
    p = pair([poly("prob", "dia", 1, [((1,), -1), ((0,), F(1, 2))], "a")], [{"a"}, set()])
    assert len(reduced_theta(p, p.modal_literals())) == 2


@settings(max_examples=150)
@given(st.integers(0, 2**32))
def test_linear_prob_witness_support_bound(seed):
    p = random_pair(random.Random(seed), "prob", linear=True)
    w = oss_probabilistic(p)
    if isinstance(w, ProbWitness):
        assert w.support <= support_bound(p) and validate(p, w)
