"""Negation normal form, clean renaming and removal of redundant binders."""
from __future__ import annotations

from . import ast as A
from .ast import Formula


def nnf(f: Formula) -> Formula:
    """Push surface negations down to atoms and dual modalities.

    Under a negation ``mu X. phi`` becomes ``nu X. !phi[!X/X]``; the double
    negation on occurrences of ``X`` cancels, so bound variables stay plain.
    """
    memo: dict[tuple[Formula, bool], Formula] = {}

    def go(g: Formula, neg: bool) -> Formula:
        key = (g, neg)
        hit = memo.get(key)
        if hit is not None:
            return hit
        k = g.kind
        if k == A.NOT:
            out = go(g.body, not neg)
        elif k == A.TOP:
            out = A.bot() if neg else g
        elif k == A.BOT:
            out = A.top() if neg else g
        elif k in (A.AND, A.OR):
            l, r = go(g.left, neg), go(g.right, neg)
            flip = (k == A.AND) == neg
            out = A.or_(l, r) if flip else A.and_(l, r)
        elif k == A.MODAL:
            op = g.op.dual() if neg else g.op
            out = A.modal(op, *(go(c, neg) for c in g.children))
        elif k in A.BINDERS:
            kind = k if not neg else (A.NU if k == A.MU else A.MU)
            out = A.binder(kind, g.var, go(g.body, neg))
        elif k == A.VAR:
            out = g
        elif k == A.NEGVAR:
            out = g if not neg else A.var(g.var)
        else:  # pragma: no cover
            raise ValueError(k)
        memo[key] = out
        return out

    return go(f, False)


def clean(f: Formula) -> Formula:
    """Rename binders so each variable is bound at most once.

    Fresh names avoid atom names so the rendered text parses back unchanged.
    """
    taken = set(A.atoms_of(f))
    counter: dict[str, int] = {}

    def fresh(name: str) -> str:
        if name not in taken:
            taken.add(name)
            return name
        n = counter.get(name, 0)
        while True:
            n += 1
            cand = f"{name}_{n}"
            if cand not in taken:
                counter[name] = n
                taken.add(cand)
                return cand

    def go(g: Formula, env: dict[str, str]) -> Formula:
        k = g.kind
        if k == A.VAR:
            return A.var(env.get(g.var, g.var))
        if k == A.NEGVAR:
            return A.negvar(env.get(g.var, g.var))
        if k in A.BINDERS:
            new = fresh(g.var)
            return A.binder(k, new, go(g.body, {**env, g.var: new}))
        if not g.children:
            return g
        return A.rebuild(g, tuple(go(c, env) for c in g.children))

    return go(f, {})


def drop_redundant(f: Formula) -> Formula:
    """Rewrite ``eta X. phi`` to ``phi`` whenever X does not occur free in phi."""

    def step(g: Formula, kids: tuple[Formula, ...]) -> Formula:
        if g.kind in A.BINDERS:
            body = kids[0]
            return A.binder(g.kind, g.var, body) if g.var in body.free_vars() else body
        return A.rebuild(g, kids)

    return A.map_formula(f, step)


def normalize(f: Formula) -> Formula:
    if f.free_vars():
        raise ValueError(f"formula has free variables: {sorted(f.free_vars())}")
    return drop_redundant(clean(nnf(f)))


def is_clean(f: Formula) -> bool:
    names = [g.var for g in f.subformulae() if g.kind in A.BINDERS]
    return len(names) == len(set(names))


def is_irredundant(f: Formula) -> bool:
    return all(g.var in g.body.free_vars() for g in f.subformulae() if g.kind in A.BINDERS)


def negvars_ok(f: Formula) -> bool:
    """No negated variable occurs in the scope of its own binder."""

    def go(g: Formula, bound: frozenset[str]) -> bool:
        if g.kind == A.NEGVAR:
            return g.var not in bound
        if g.kind in A.BINDERS:
            return go(g.body, bound | {g.var})
        return all(go(c, bound) for c in g.children)

    return go(f, frozenset())
