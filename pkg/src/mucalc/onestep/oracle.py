"""Brute-force one-step oracles, used only to cross-check the backends.

They share nothing with the backends except the pair representation and
the validator: relational pairs are decided by enumerating every subset of
Theta, graded pairs by depth-first enumeration of multiplicities up to a
caller-chosen bound, and linear probabilistic pairs by an exact two-phase
simplex that maximises the slack of the strict inequalities over all of
Theta (no support restriction).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence

from .pair import (
    FusionWitness, GradedWitness, OneStepPair, ProbWitness, RelWitness, atoms_consistent, validate,
)


class OracleBudgetError(ValueError):
    pass


def _atom_sets(pair: OneStepPair):
    names = sorted({l.op.atom for l in pair.atom_literals()})
    for r in range(len(names) + 1):
        for combo in itertools.combinations(names, r):
            yield frozenset(combo)


def brute_relational(pair: OneStepPair) -> Optional[RelWitness]:
    if len(pair.theta) > 12:
        raise OracleBudgetError("too many profiles for subset enumeration")
    for atoms in _atom_sets(pair):
        for r in range(len(pair.theta) + 1):
            for chosen in itertools.combinations(pair.theta, r):
                w = RelWitness(tuple(chosen), atoms)
                if validate(pair, w):
                    return w
    return None


def brute_graded(pair: OneStepPair, bound: int) -> Optional[GradedWitness]:
    if (bound + 1) ** len(pair.theta) > 10 ** 7 and len(pair.variables) > 5:
        raise OracleBudgetError("graded enumeration too large")
    theta = list(pair.theta)
    lits = pair.modal_literals()
    atoms = atoms_consistent(pair)
    if atoms is None:
        return None

    def ok(mult: Sequence[int]) -> bool:
        total = sum(mult)
        for lit in lits:
            ins = [sum(m for u, m in zip(theta, mult) if a in u) for a in lit.args]
            if lit.op.kind == "dia":
                if not lit.op.poly(ins) > 0:
                    return False
            elif not lit.op.poly([total - x for x in ins]) <= 0:
                return False
        return True

    # only the induced placeholder measures matter, so prune repeated prefixes
    vs = pair.variables
    hits = [[j for j, a in enumerate(vs) if a in u] for u in theta]
    seen: set[tuple[int, tuple[int, ...]]] = set()

    def dfs(i: int, meas: tuple[int, ...], mult: list[int]):
        if i == len(theta):
            return list(mult) if ok(mult) else None
        if (i, meas) in seen:
            return None
        seen.add((i, meas))
        for m in range(bound + 1):
            nxt = list(meas)
            for j in hits[i]:
                nxt[j] += m
            nxt[-1] += m
            mult.append(m)
            hit = dfs(i + 1, tuple(nxt), mult)
            mult.pop()
            if hit is not None:
                return hit
        return None

    found = dfs(0, (0,) * (len(vs) + 1), [])
    if found is None:
        return None
    w = GradedWitness(tuple((u, m) for u, m in zip(theta, found) if m > 0), atoms)
    assert validate(pair, w)
    return w


# exact simplex ---------------------------------------------------------------


def _simplex_max(c: list[Fraction], A: list[list[Fraction]], b: list[Fraction]):
    """Maximise c.x subject to A x = b, x >= 0 (b >= 0).  Bland's rule, exact.

    Returns (optimum, x) or None if infeasible.  The problems built here are
    bounded, so unboundedness is reported as an error.
    """
    m, n = len(A), len(c)
    # phase 1 tableau with artificials n..n+m-1
    T = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(m)] + [b[i]]
         for i, row in enumerate(A)]
    basis = [n + i for i in range(m)]

    def pivot(r: int, col: int):
        pv = T[r][col]
        T[r] = [x / pv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(obj: list[Fraction], allowed: int):
        while True:
            # reduced costs for maximisation of obj
            z = [sum(obj[basis[i]] * T[i][j] for i in range(m)) - obj[j] for j in range(allowed)]
            col = next((j for j in range(allowed) if z[j] < 0), None)
            if col is None:
                return
            rows = [(T[i][-1] / T[i][col], basis[i], i) for i in range(m) if T[i][col] > 0]
            if not rows:
                raise ArithmeticError("unbounded linear program")
            _, _, r = min(rows)
            pivot(r, col)

    total = n + m
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, total)
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    obj = list(c) + [Fraction(0)] * m
    # forbid artificials from re-entering by restricting the entering range to n
    run(obj, n)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return sum(ci * xi for ci, xi in zip(c, x)), x


def brute_probabilistic_linear(pair: OneStepPair) -> Optional[ProbWitness]:
    """Decide a linear probabilistic pair by maximising the strict slack t.

    Variables: weights y_u for all u in Theta, slack t in [0, 1], and one
    slack variable per inequality row.  Feasible iff the optimum has t > 0
    (or there are no strict rows and the system is feasible).
    """
    atoms = atoms_consistent(pair)
    if atoms is None or not pair.theta:
        return None
    lits = pair.modal_literals()
    if not all(l.op.poly.is_linear() for l in lits):
        raise OracleBudgetError("oracle handles linear probabilistic pairs only")
    theta = list(pair.theta)
    k = len(theta)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []  # coeffs over y, rhs, strict: coeffs.y (+t) <= rhs
    for lit in lits:
        cs = lit.op.poly.linear_coeffs()
        c0 = lit.op.poly.constant()
        if lit.op.kind == "dia":
            # sum c_i m_i + c0 >= t   <=>   -sum c_i m_i + t <= c0
            coeff = [-sum((c for c, a in zip(cs, lit.args) if a in u), Fraction(0)) for u in theta]
            rows.append((coeff, c0, True))
        else:
            # sum c_i (weight outside A_i) + c0 <= 0
            coeff = [sum((c for c, a in zip(cs, lit.args) if a not in u), Fraction(0)) for u in theta]
            rows.append((coeff, -c0, False))
    # columns: y_0..y_{k-1}, t, s_0..s_{r-1} (row slacks), s_t (t <= 1)
    r = len(rows)
    ncols = k + 1 + r + 1
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    A.append([Fraction(1)] * k + [Fraction(0)] * (ncols - k))
    b.append(Fraction(1))
    for i, (coeff, rhs, strict) in enumerate(rows):
        row = list(coeff) + [Fraction(1) if strict else Fraction(0)] + [Fraction(0)] * (r + 1)
        row[k + 1 + i] = Fraction(1)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        A.append(row)
        b.append(rhs)
    row = [Fraction(0)] * ncols
    row[k] = Fraction(1)
    row[-1] = Fraction(1)
    A.append(row)
    b.append(Fraction(1))
    c = [Fraction(0)] * ncols
    c[k] = Fraction(1)
    res = _simplex_max(c, A, b)
    if res is None:
        return None
    opt, x = res
    if any(strict for _, _, strict in rows) and opt <= 0:
        return None
    w = ProbWitness(tuple((u, x[j]) for j, u in enumerate(theta) if x[j] > 0), atoms)
    assert validate(pair, w), "simplex optimum failed validation"
    return w


def oss_brute(pair: OneStepPair, logic: str, bound: Optional[int] = None):
    """Independent oracle.  ``bound`` caps graded multiplicities (default 2B)."""
    if len(pair.variables) > 5 or len(pair.theta) > 10:
        raise OracleBudgetError("oracle is meant for |V| <= 5 and |Theta| <= 10")
    if logic == "rel":
        return brute_relational(pair)
    if logic == "graded":
        if bound is None:
            from .backends import graded_bound
            bound = 2 * graded_bound(pair)
        return brute_graded(pair, bound)
    if logic == "prob":
        return brute_probabilistic_linear(pair)
    if logic.startswith("fusion"):
        logics = logic.split(":", 1)[1].split(",") if ":" in logic else ["rel", "prob"]
        atoms = atoms_consistent(pair)
        if atoms is None:
            return None
        parts = []
        for lg in logics:
            w = oss_brute(pair.restrict(lg), lg, bound)
            if w is None:
                return None
            from dataclasses import replace
            parts.append((lg, replace(w, atoms=atoms)))
        return FusionWitness(tuple(parts), atoms)
    raise ValueError(f"unknown logic {logic!r}")
