import random

from hypothesis import given, strategies as st

from mucalc.formula import MODAL, OR, atom, dia, fl_closure, or_
from mucalc.tracking import build_tracking, choice, relevant_letters, selection

from conftest import formula, rel_formulas


def reach():
    chi = formula("mu X. (p | dia X)")
    t = fl_closure(chi)
    return chi, t, build_tracking(t)


def test_disjunction_follows_choice():
    chi, t, npa = reach()
    d = t.index[or_(atom("p"), dia(chi))]
    assert npa.delta(d, choice([(d, 0)])) == (t.index[atom("p")],)
    assert npa.delta(d, choice([(d, 1)])) == (t.index[dia(chi)],)


def test_modal_literal_tracked_only_through_selection():
    chi, t, npa = reach()
    m = t.index[dia(chi)]
    assert npa.delta(m, selection([(m, 0)])) == (t.index[chi],)
    assert npa.delta(m, selection([])) == ()


def test_fixpoint_unfolds_under_any_choice():
    chi, t, npa = reach()
    d = t.index[or_(atom("p"), dia(chi))]
    for c in (choice([]), choice([(d, 0)]), choice([(d, 1)])):
        assert npa.delta(t.index[chi], c) == (d,)


def test_conjunction_tracks_both_and_atoms_stop():
    t = fl_closure(formula("p & dia q"))
    npa = build_tracking(t)
    assert set(npa.delta(0, choice([]))) == {t.index[atom("p")], t.index[dia(atom("q"))]}
    p = t.index[atom("p")]
    assert npa.delta(p, selection([])) == ()
    # an atom is a modal literal without arguments: it stutters under choices
    assert npa.delta(p, choice([])) == (p,)


def test_polyadic_selection_is_per_argument():
    t = fl_closure(formula("<x1 + x2 - 1/2>(a, !a)", "prob"))
    npa = build_tracking(t)
    a, na = (t.index[c] for c in t.formulas[0].children)
    assert npa.delta(0, selection([(0, 0)])) == (a,)
    assert npa.delta(0, selection([(0, 1)])) == (na,)
    assert set(npa.delta(0, selection([(0, 0), (0, 1)]))) == {a, na}


def test_relevant_letter_counts():
    chi, t, npa = reach()
    label = {t.index[or_(atom("p"), dia(chi))], t.index[dia(chi)]}
    ch, sel = relevant_letters(npa, label)
    assert len(ch) == 2 and len(sel) == 2
    ch, sel = relevant_letters(npa, {t.index[dia(chi)]})
    assert ch == [choice([])]
    ch, sel = relevant_letters(npa, set())
    assert ch == [choice([])] and sel == [selection([])]


def test_priorities():
    t = fl_closure(formula("nu X. mu Y. ((p & dia X) | dia Y)"))
    npa = build_tracking(t)
    assert npa.num_states == len(t) <= t.n0
    assert 1 <= min(npa.priorities) and npa.max_priority <= 2 * t.k
    assert npa.priority(0) == 3  # the outer greatest fixpoint has depth 2


def full_letters(npa, rng):
    disj = [s for s in range(npa.num_states) if npa.kind[s] == OR]
    slots = [(m, i) for m in range(npa.num_states) if npa.kind[m] == MODAL for i in range(len(npa.kids[m]))]
    c = choice((d, rng.randint(0, 1)) for d in disj)
    s = selection(x for x in slots if rng.random() < 0.5)
    return c, s


@given(rel_formulas(14), st.integers(0, 2**32))
def test_quotient_soundness(f, seed):
    rng = random.Random(seed)
    t = fl_closure(formula(str(f)))
    npa = build_tracking(t)
    label = {s for s in range(npa.num_states) if rng.random() < 0.5}
    for _ in range(4):
        a1, a2 = full_letters(npa, rng), full_letters(npa, rng)
        for x, y in zip(a1, a2):
            # same restriction to the label, different elsewhere
            merged = type(x)(x.kind, tuple(sorted(set(x.restrict(label).items) | {
                i for i in y.items if i[0] not in label})))
            if x.kind == "choice":
                merged = choice(dict(merged.items).items())
            for s in label:
                assert npa.delta(s, x) == npa.delta(s, merged) == npa.delta(s, x.restrict(label))


@given(rel_formulas(14), st.integers(0, 2**32))
def test_modal_stuttering(f, seed):
    rng = random.Random(seed)
    t = fl_closure(formula(str(f)))
    npa = build_tracking(t)
    c, _ = full_letters(npa, rng)
    for s in range(npa.num_states):
        if npa.kind[s] == MODAL:
            assert npa.delta(s, c) == (s,)


def test_dump_lists_every_state():
    _, t, npa = reach()
    text = npa.dump()
    assert text.splitlines()[0].startswith("npa states=4")
    assert len(text.splitlines()) == 5
