"""Fischer-Ladner closure, theta/theta*, alternation depth and tracking priorities."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import ast as A
from .ast import Formula
from .normalize import is_clean


def unfold(f: Formula) -> Formula:
    """phi[eta X. phi / X] for a fixpoint literal f = eta X. phi."""
    return A.substitute(f.body, f.var, f)


def closure_successors(f: Formula) -> tuple[Formula, ...]:
    """Formulae the closure rules require once ``f`` is in the closure."""
    if f.kind in (A.AND, A.OR):
        return f.children
    if f.kind == A.MODAL:
        return f.children
    if f.kind in A.BINDERS:
        return (unfold(f),)
    return ()


def distinct_subformulae(f: Formula) -> list[Formula]:
    seen: dict[Formula, None] = {}
    for g in f.subformulae():
        seen.setdefault(g, None)
    return list(seen)


@dataclass
class ClosureTable:
    chi: Formula
    formulas: list[Formula]
    index: dict[Formula, int]
    theta: dict[str, Formula]
    binder_pos: dict[str, int]
    ad: dict[str, int]
    alpha: list[int]
    n_sub: int
    _theta_star: dict[Formula, Formula] = field(default_factory=dict, repr=False)

    @property
    def n0(self) -> int:
        return len(self.formulas)

    @property
    def k(self) -> int:
        """Alternation depth of the target formula."""
        return max(self.ad.values(), default=0)

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: Formula) -> bool:
        return f in self.index

    def priority(self, f: Formula) -> int:
        return self.alpha[self.index[f]]

    def alternation_depth(self, name: str) -> int:
        return self.ad[name]

    def theta_star(self, phi: Formula) -> Formula:
        """Close ``phi`` by substituting its innermost free variable until none is left."""
        hit = self._theta_star.get(phi)
        if hit is not None:
            return hit
        g = phi
        while g.free_vars():
            inner = max(g.free_vars(), key=lambda x: self.binder_pos[x])
            g = A.substitute(g, inner, self.theta[inner])
        self._theta_star[phi] = g
        return g

    def modal_literals(self) -> list[int]:
        return [i for i, f in enumerate(self.formulas) if f.kind == A.MODAL]


def _binders(chi: Formula) -> tuple[dict[str, Formula], dict[str, int]]:
    theta: dict[str, Formula] = {}
    pos: dict[str, int] = {}
    for i, g in enumerate(chi.subformulae()):
        if g.kind in A.BINDERS:
            if g.var in theta and theta[g.var] is not g:
                raise ValueError(f"formula is not clean: {g.var} bound twice")
            theta.setdefault(g.var, g)
            pos.setdefault(g.var, i)
    return theta, pos


def _is_proper_sub(inner: Formula, outer: Formula) -> bool:
    return inner is not outer and any(g is inner for g in outer.subformulae())


def alternation_depths(chi: Formula) -> dict[str, int]:
    """ad(X) = maximal number of mu/nu toggles (+1) over dependency chains ending in X.

    Y depends on X when theta(Y) is a proper subformula of theta(X) and X is
    free in theta(Y); chains run from inner variables out to X.
    """
    theta, _ = _binders(chi)
    names = list(theta)
    deps: dict[str, list[str]] = {x: [] for x in names}
    for x in names:
        for y in names:
            if x != y and x in theta[y].free_vars() and _is_proper_sub(theta[y], theta[x]):
                deps[x].append(y)
    memo: dict[str, int] = {}

    def ad(x: str) -> int:
        if x not in memo:
            best = 1
            for y in deps[x]:
                toggle = 1 if theta[y].kind != theta[x].kind else 0
                best = max(best, ad(y) + toggle)
            memo[x] = best
        return memo[x]

    return {x: ad(x) for x in names}


def fl_closure(chi: Formula) -> ClosureTable:
    if chi.free_vars():
        raise ValueError("closure needs a closed formula")
    if not is_clean(chi):
        raise ValueError("closure needs a clean formula")
    theta, pos = _binders(chi)
    ad = alternation_depths(chi)
    formulas: list[Formula] = [chi]
    index: dict[Formula, int] = {chi: 0}
    queue = deque([chi])
    while queue:
        f = queue.popleft()
        for g in closure_successors(f):
            if g not in index:
                index[g] = len(formulas)
                formulas.append(g)
                queue.append(g)
    alpha = []
    for f in formulas:
        if f.kind == A.MU:
            alpha.append(2 * ad[f.var])
        elif f.kind == A.NU:
            alpha.append(2 * ad[f.var] - 1)
        else:
            alpha.append(1)
    return ClosureTable(chi, formulas, index, theta, pos, ad, alpha, len(distinct_subformulae(chi)))
