"""One-step satisfiability backends.

Each backend takes a ``OneStepPair`` and returns a witness, ``None`` for an
unsatisfiable pair, or (probabilistic only) an ``Unresolved`` marker.  Atom
literals are a side condition shared by all backends: they must be jointly
consistent and the witness carries the set of positive atoms.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence

from .linear import EQ, GE, GT, Constraint, lp_solve
from .nonlinear import PolyConstraint, simplex_search
from .pair import (
    FusionWitness, GradedWitness, Literal, OneStepPair, Outcome, ProbWitness, RelWitness,
    Unresolved, atoms_consistent, is_sat, literal_index_bound,
)

DEFAULT_EPSILON = Fraction(1, 2 ** 20)


class ContractError(ValueError):
    """A pair handed to a backend that does not own its literals."""


def _check_logic(pair: OneStepPair, logic: str) -> None:
    for lit in pair.modal_literals():
        if lit.op.logic != logic:
            raise ContractError(f"{logic} backend got a {lit.op.logic} literal {lit.text()}")


# relational -------------------------------------------------------------------


def oss_relational(pair: OneStepPair) -> Optional[RelWitness]:
    _check_logic(pair, "rel")
    atoms = atoms_consistent(pair)
    if atoms is None:
        return None
    boxes = [l.args[0] for l in pair.gamma if l.op.kind == "box" and not l.op.is_atom]
    chosen: list[frozenset] = []
    for lit in pair.gamma:
        if lit.op.is_atom or lit.op.kind != "dia":
            continue
        a = lit.args[0]
        pick = next((u for u in pair.theta if a in u and all(b in u for b in boxes)), None)
        if pick is None:
            return None
        if pick not in chosen:
            chosen.append(pick)
    return RelWitness(tuple(chosen), atoms)


# graded -------------------------------------------------------------------------


def graded_bound(pair: OneStepPair) -> int:
    """Per-profile multiplicity cap: largest diamond index plus one (one without diamonds)."""
    has_dia = any(l.op.kind == "dia" and not l.op.is_atom for l in pair.gamma)
    return literal_index_bound(pair) + 1 if has_dia else 1


def _graded_ok(lits: Sequence[Literal], var_pos: dict, meas: tuple[int, ...]) -> bool:
    total = meas[-1]
    for lit in lits:
        vals = [meas[var_pos[a]] for a in lit.args]
        if lit.op.kind == "dia":
            if lit.op.poly(vals) <= 0:
                return False
        elif lit.op.poly([total - v for v in vals]) > 0:
            return False
    return True


def oss_graded(pair: OneStepPair, bound: Optional[int] = None) -> Optional[GradedWitness]:
    """Exhaustive search over multiplicities 0..bound per profile.

    Assignments are explored profile by profile and merged when they induce
    the same measure of every placeholder, which is all the literals can see.
    """
    _check_logic(pair, "graded")
    atoms = atoms_consistent(pair)
    if atoms is None:
        return None
    cap = graded_bound(pair) if bound is None else bound
    lits = pair.modal_literals()
    vs = pair.variables
    var_pos = {a: i for i, a in enumerate(vs)}
    start = (0,) * (len(vs) + 1)
    layer: dict[tuple[int, ...], tuple[int, ...]] = {start: ()}
    for u in pair.theta:
        hits = [var_pos[a] for a in u]
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for meas, hist in layer.items():
            for m in range(cap + 1):
                new = list(meas)
                for i in hits:
                    new[i] += m
                new[-1] += m
                key = tuple(new)
                if key not in nxt:
                    nxt[key] = hist + (m,)
        layer = nxt
    for meas in sorted(layer, key=lambda k: (k[-1], k)):
        if _graded_ok(lits, var_pos, meas):
            hist = layer[meas]
            mult = tuple((u, m) for u, m in zip(pair.theta, hist) if m > 0)
            return GradedWitness(mult, atoms)
    return None


# probabilistic ------------------------------------------------------------------


def _linear_constraints(lits: Sequence[Literal], support: Sequence[frozenset]) -> list[Constraint]:
    n = len(support)
    cons = [Constraint.make({j: Fraction(1) for j in range(n)}, -1, EQ)]
    cons += [Constraint.make({j: Fraction(1)}, 0, GE) for j in range(n)]
    for lit in lits:
        coeffs = lit.op.poly.linear_coeffs()
        const = lit.op.poly.constant()
        row: dict[int, Fraction] = {}
        if lit.op.kind == "dia":
            # sum_i c_i * d(A_i) + c0 > 0
            for c, a in zip(coeffs, lit.args):
                for j, u in enumerate(support):
                    if a in u:
                        row[j] = row.get(j, Fraction(0)) + c
            cons.append(Constraint.make(row, const, GT))
        else:
            # sum_i c_i * d(not A_i) + c0 <= 0, written as -(...) >= 0
            for c, a in zip(coeffs, lit.args):
                for j, u in enumerate(support):
                    if a not in u:
                        row[j] = row.get(j, Fraction(0)) - c
            cons.append(Constraint.make(row, -const, GE))
    return cons


def _poly_constraints(lits: Sequence[Literal], support: Sequence[frozenset]) -> list[PolyConstraint]:
    out = []
    for lit in lits:
        members = tuple(tuple(j for j, u in enumerate(support) if a in u) for a in lit.args)
        out.append(PolyConstraint(lit.op.poly, members, lit.op.kind == "dia"))
    return out


def support_bound(pair: OneStepPair) -> int:
    """Supports of size max(|V|, 1) suffice for monotone constraints."""
    return max(len(pair.variables), 1)


def _sign_monotone(lits: Sequence[Literal]) -> bool:
    return all(c >= 0 for l in lits for e, c in l.op.poly.terms if any(e))


def reduced_theta(pair: OneStepPair, lits: Sequence[Literal]) -> list[frozenset]:
    """Representatives of Theta up to what the literals can see.

    Elements are compared by their intersection with the placeholders in use;
    one representative per class is kept.  When every polynomial has
    non-negative coefficients on its non-constant monomials, classes strictly
    below another class are dropped as well: shifting mass to a superset can
    only raise each d(A) and lower each d(not A).
    """
    used = frozenset(a for l in lits for a in l.args)
    reps: dict[frozenset, frozenset] = {}
    for u in pair.theta:
        reps.setdefault(u & used, u)
    if _sign_monotone(lits):
        keys = list(reps)
        reps = {k: reps[k] for k in keys if not any(k < o for o in keys)}
    return list(reps.values())


def oss_probabilistic(pair: OneStepPair, epsilon: Fraction = DEFAULT_EPSILON,
                      max_boxes: int = 4000) -> Outcome:
    _check_logic(pair, "prob")
    atoms = atoms_consistent(pair)
    if atoms is None or not pair.theta:
        return None
    lits = pair.modal_literals()
    linear = all(l.op.poly.is_linear() for l in lits)
    theta = reduced_theta(pair, lits)
    used = {a for l in lits for a in l.args}
    limit = min(max(len(used), 1), len(theta))
    if linear:
        # one program over all of Theta decides; small supports are then searched
        # only if the basic solution happens to be too wide
        point = lp_solve(len(theta), _linear_constraints(lits, theta))
        if point is None:
            return None
        weights = tuple((u, w) for u, w in zip(theta, point) if w > 0)
        if len(weights) <= limit:
            return ProbWitness(weights, atoms)
        wide = [u for u, _ in weights]
        for pool in (wide, theta):
            for size in range(1, limit + 1):
                for support in itertools.combinations(pool, size):
                    point = lp_solve(size, _linear_constraints(lits, support))
                    if point is not None:
                        return ProbWitness(tuple((u, w) for u, w in zip(support, point) if w > 0), atoms)
        raise AssertionError("no narrow support for a satisfiable linear pair")  # pragma: no cover
    unresolved = False
    for size in range(1, limit + 1):
        for support in itertools.combinations(theta, size):
            res = simplex_search(size, _poly_constraints(lits, support), epsilon, max_boxes)
            if res.point is None and not res.exhausted:
                unresolved = True
            if res.point is not None:
                weights = tuple((u, w) for u, w in zip(support, res.point) if w > 0)
                return ProbWitness(weights, atoms)
    return Unresolved(Fraction(epsilon)) if unresolved else None


# fusion -------------------------------------------------------------------------


def oss_for_logic(pair: OneStepPair, logic: str, epsilon: Fraction = DEFAULT_EPSILON) -> Outcome:
    if logic == "rel":
        return oss_relational(pair)
    if logic == "graded":
        return oss_graded(pair)
    if logic == "prob":
        return oss_probabilistic(pair, epsilon)
    raise ContractError(f"unknown logic tag {logic!r}")


def oss_fusion(pair: OneStepPair, logics: Sequence[str], epsilon: Fraction = DEFAULT_EPSILON) -> Outcome:
    """Satisfiable iff every component (restricted to its own literals) is."""
    unknown = set(pair.logics()) - set(logics)
    if unknown:
        raise ContractError(f"literals of unknown logic {sorted(unknown)}")
    atoms = atoms_consistent(pair)
    if atoms is None:
        return None
    parts = []
    pending = None
    for logic in logics:
        sub = pair.restrict(logic)
        res = oss_for_logic(sub, logic, epsilon)
        if res is None:
            return None
        if isinstance(res, Unresolved):
            pending = res
            continue
        parts.append((logic, _with_atoms(res, atoms)))
    if pending is not None:
        return pending
    return FusionWitness(tuple(parts), atoms)


def _with_atoms(w, atoms):
    from dataclasses import replace
    return replace(w, atoms=atoms)


def solve_pair(pair: OneStepPair, logics: Sequence[str], epsilon: Fraction = DEFAULT_EPSILON) -> Outcome:
    """Dispatch on the configured logic: one backend, or the fusion of several."""
    if len(logics) == 1:
        return oss_for_logic(pair, logics[0], epsilon)
    return oss_fusion(pair, logics, epsilon)


__all__ = [
    "ContractError", "DEFAULT_EPSILON", "graded_bound", "is_sat", "oss_fusion", "oss_graded",
    "oss_probabilistic", "oss_relational", "solve_pair", "support_bound",
]
