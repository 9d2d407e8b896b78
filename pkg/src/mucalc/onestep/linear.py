"""Exact feasibility of linear systems with strict inequalities.

A constraint is ``sum(coeffs[v] * x_v) + const REL 0`` with REL one of
``>``, ``>=`` or ``=``.  Both solvers return a rational point satisfying all
constraints, or None when the system is infeasible.  ``lp_solve`` is a
two-phase simplex and is what the backends use; ``fm_solve`` eliminates
variables one by one, blows up on larger systems, and serves as a
cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

GT, GE, EQ = ">", ">=", "="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[int, Fraction], ...]  # sorted (var, coeff), no zeros
    const: Fraction
    rel: str

    @staticmethod
    def make(coeffs: dict[int, Fraction], const, rel: str) -> "Constraint":
        items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if c != 0))
        return Constraint(items, Fraction(const), rel)

    def coeff(self, v: int) -> Fraction:
        for w, c in self.coeffs:
            if w == v:
                return c
        return Fraction(0)

    def value(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.coeffs), self.const)

    def holds(self, point: Sequence[Fraction]) -> bool:
        val = self.value(point)
        return val > 0 if self.rel == GT else (val >= 0 if self.rel == GE else val == 0)

    def scaled(self) -> "Constraint":
        """Normalize by the first coefficient magnitude to dedupe parallel copies."""
        if not self.coeffs:
            return self
        k = abs(self.coeffs[0][1])
        return Constraint(tuple((v, c / k) for v, c in self.coeffs), self.const / k, self.rel)


def _combine(lower: Constraint, upper: Constraint, v: int) -> Constraint:
    # lower has positive coefficient on v, upper negative
    a = lower.coeff(v)
    b = -upper.coeff(v)
    coeffs: dict[int, Fraction] = {}
    for w, c in lower.coeffs:
        coeffs[w] = coeffs.get(w, Fraction(0)) + b * c
    for w, c in upper.coeffs:
        coeffs[w] = coeffs.get(w, Fraction(0)) + a * c
    coeffs.pop(v, None)
    rel = GT if GT in (lower.rel, upper.rel) else GE
    return Constraint.make(coeffs, b * lower.const + a * upper.const, rel).scaled()


def _eliminate_equalities(cons: list[Constraint], nvars: int):
    """Substitute equalities away; returns remaining constraints and substitutions."""
    subs: list[tuple[int, dict[int, Fraction], Fraction]] = []  # x_v = sum + const
    work = list(cons)
    while True:
        eq = next((c for c in work if c.rel == EQ and c.coeffs), None)
        if eq is None:
            break
        v, a = eq.coeffs[0]
        expr = {w: -c / a for w, c in eq.coeffs if w != v}
        const = -eq.const / a
        subs.append((v, expr, const))
        new = []
        for c in work:
            if c is eq:
                continue
            k = c.coeff(v)
            if k == 0:
                new.append(c)
                continue
            coeffs = {w: x for w, x in c.coeffs if w != v}
            for w, x in expr.items():
                coeffs[w] = coeffs.get(w, Fraction(0)) + k * x
            new.append(Constraint.make(coeffs, c.const + k * const, c.rel))
        work = new
    return work, subs


def fm_solve(nvars: int, constraints: Sequence[Constraint]) -> Optional[list[Fraction]]:
    work, subs = _eliminate_equalities(list(constraints), nvars)
    for c in work:
        if not c.coeffs and not c.holds([]):
            return None
    eliminated = {v for v, _, _ in subs}
    order = [v for v in range(nvars) if v not in eliminated]
    stages: list[tuple[int, list[Constraint]]] = []
    current = list(dict.fromkeys(c.scaled() for c in work if c.coeffs))
    for v in order:
        stages.append((v, current))
        lower = [c for c in current if c.coeff(v) > 0]
        upper = [c for c in current if c.coeff(v) < 0]
        rest = [c for c in current if c.coeff(v) == 0]
        nxt = rest + [_combine(lo, up, v) for lo in lower for up in upper]
        current = []
        for c in dict.fromkeys(nxt):
            if c.coeffs:
                current.append(c)
            elif not c.holds([]):
                return None
    # back substitution, last eliminated variable first
    point = [Fraction(0)] * nvars
    for v, cons in reversed(stages):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for c in cons:
            a = c.coeff(v)
            if a == 0:
                continue
            rest = sum((x * point[w] for w, x in c.coeffs if w != v), c.const)
            bound = -rest / a
            strict = c.rel == GT
            if a > 0:  # x_v >= bound
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:  # x_v <= bound
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        point[v] = _pick(lo, lo_strict, hi, hi_strict)
    for v, expr, const in reversed(subs):
        point[v] = sum((x * point[w] for w, x in expr.items()), const)
    if not all(c.holds(point) for c in constraints):  # pragma: no cover - guards the algebra
        raise AssertionError("Fourier-Motzkin back substitution produced an invalid point")
    return point


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1 if hi_strict else hi
    if hi is None:
        return lo + 1 if lo_strict else lo
    if lo == hi:
        return lo
    if not lo_strict:
        return lo
    if not hi_strict:
        return hi
    return (lo + hi) / 2


# simplex ---------------------------------------------------------------------


def _pivot(rows: list[list[Fraction]], basis: list[int], r: int, col: int) -> None:
    piv = rows[r][col]
    rows[r] = [x / piv for x in rows[r]]
    pr = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[col] != 0:
            k = row[col]
            rows[i] = [x - k * y for x, y in zip(row, pr)]
    basis[r] = col


def _maximize(rows, basis, obj, allowed) -> None:
    """Bland's rule on the tableau; ``obj`` holds negated reduced costs and the value."""
    m = len(rows)
    while True:
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(m):
            a = rows[i][col]
            if a > 0:
                key = (rows[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - every objective here is bounded
            raise ArithmeticError("unbounded linear program")
        r = best[1]
        _pivot(rows, basis, r, col)
        k = obj[col]
        obj[:] = [x - k * y for x, y in zip(obj, rows[r])]


def lp_solve(nvars: int, constraints: Sequence[Constraint]) -> Optional[list[Fraction]]:
    """Feasibility by maximizing a common slack t <= 1 on the strict constraints."""
    # columns: x+ (nvars), x- (nvars), t, then one surplus/slack per inequality, then artificials
    strict = any(c.rel == GT for c in constraints)
    t = 2 * nvars
    specs = []
    for c in constraints:
        row = {}
        for v, a in c.coeffs:
            row[v] = a
            row[nvars + v] = -a
        if c.rel == GT:
            row[t] = Fraction(-1)
        specs.append((row, -c.const, c.rel != EQ))
    specs.append(({t: Fraction(-1)}, Fraction(-1), True))  # -t >= -1
    ncore = t + 1
    nslack = sum(1 for _, _, ineq in specs if ineq)
    nart = len(specs)
    width = ncore + nslack + nart
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    s_col = ncore
    for i, (row, rhs, ineq) in enumerate(specs):
        line = [Fraction(0)] * (width + 1)
        for j, a in row.items():
            line[j] = a
        if ineq:
            line[s_col] = Fraction(-1)  # row >= rhs  becomes  row - s = rhs
            s_col += 1
        line[-1] = rhs
        if rhs < 0:
            line = [-x for x in line]
        line[ncore + nslack + i] = Fraction(1)
        rows.append(line)
        basis.append(ncore + nslack + i)
    arts = range(ncore + nslack, width)
    # phase one: drive the artificials to zero
    obj = [Fraction(0)] * (width + 1)
    for j in arts:
        obj[j] = Fraction(1)
    for row in rows:
        obj = [x - y for x, y in zip(obj, row)]
    _maximize(rows, basis, obj, range(width))
    if obj[-1] != 0:
        return None
    real = range(ncore + nslack)
    keep = []
    for i in range(len(rows)):
        if basis[i] in arts:
            col = next((j for j in real if rows[i][j] != 0), None)
            if col is None:
                continue  # redundant row
            _pivot(rows, basis, i, col)
        keep.append(i)
    rows = [rows[i] for i in keep]
    basis = [basis[i] for i in keep]
    if strict:
        obj = [Fraction(0)] * (width + 1)
        obj[t] = Fraction(-1)
        for i, b in enumerate(basis):
            if obj[b] != 0:
                k = obj[b]
                obj = [x - k * y for x, y in zip(obj, rows[i])]
        _maximize(rows, basis, obj, real)
    value = [Fraction(0)] * width
    for i, b in enumerate(basis):
        value[b] = rows[i][-1]
    if strict and value[t] <= 0:
        return None
    point = [value[v] - value[nvars + v] for v in range(nvars)]
    if not all(c.holds(point) for c in constraints):  # pragma: no cover - guards the algebra
        raise AssertionError("simplex produced an invalid point")
    return point
