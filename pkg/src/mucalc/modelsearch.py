"""Exhaustive search over small relational models.

All Kripke models with n states over a fixed atom set are evaluated at once:
a state set is represented per state by one big integer whose bit m says
whether the state belongs to the set in model number m.  Model m encodes
edge (s, t) in bit s*n+t and atom a at state s in bit n*n + s*|atoms| + a.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .coalgebra import Coalgebra
from .formula import ast as A
from .formula.ast import Formula

MAX_BITS = 24


class SearchBudgetError(ValueError):
    pass


def _bit_pattern(b: int, total: int) -> int:
    """Integer over ``2**total`` models whose bit m is bit b of m."""
    half = 1 << b
    pat = ((1 << half) - 1) << half
    length = 2 * half
    size = 1 << total
    while length < size:
        pat |= pat << length
        length *= 2
    return pat


@dataclass
class Found:
    model: Coalgebra
    state: int
    states: int


def _evaluate(phi: Formula, n: int, atoms: Sequence[str]):
    nbits = n * n + n * len(atoms)
    if nbits > MAX_BITS:
        raise SearchBudgetError(f"{nbits} encoding bits exceed the cap of {MAX_BITS}")
    ones = (1 << (1 << nbits)) - 1
    edge = [[_bit_pattern(s * n + t, nbits) for t in range(n)] for s in range(n)]
    apos = {a: i for i, a in enumerate(atoms)}
    atom_bits = [[_bit_pattern(n * n + s * len(atoms) + i, nbits) for i in range(len(atoms))] for s in range(n)]
    env: dict[str, tuple[int, ...]] = {}
    cache: dict[Formula, tuple[int, ...]] = {}

    def go(f: Formula) -> tuple[int, ...]:
        closed = not f.free_vars()
        if closed and f in cache:
            return cache[f]
        k = f.kind
        if k == A.TOP:
            res = (ones,) * n
        elif k == A.BOT:
            res = (0,) * n
        elif k == A.VAR:
            res = env[f.var]
        elif k == A.NEGVAR:
            res = tuple(ones ^ v for v in env[f.var])
        elif k == A.NOT:
            res = tuple(ones ^ v for v in go(f.body))
        elif k == A.AND:
            l, r = go(f.left), go(f.right)
            res = tuple(a & b for a, b in zip(l, r))
        elif k == A.OR:
            l, r = go(f.left), go(f.right)
            res = tuple(a | b for a, b in zip(l, r))
        elif k == A.MODAL:
            op = f.op
            if op.is_atom:
                if op.atom in apos:
                    col = [atom_bits[s][apos[op.atom]] for s in range(n)]
                else:
                    col = [0] * n
                res = tuple(col) if op.kind == "atom" else tuple(ones ^ c for c in col)
            else:
                if op.logic != "rel":
                    raise ValueError("model search covers relational formulae only")
                sub = go(f.children[0])
                if op.kind == "dia":
                    out = []
                    for s in range(n):
                        acc = 0
                        for t in range(n):
                            acc |= edge[s][t] & sub[t]
                        out.append(acc)
                else:
                    out = []
                    for s in range(n):
                        acc = ones
                        for t in range(n):
                            acc &= (ones ^ edge[s][t]) | sub[t]
                        out.append(acc)
                res = tuple(out)
        elif k in A.BINDERS:
            saved = env.get(f.var)
            cur = (0,) * n if k == A.MU else (ones,) * n
            while True:
                env[f.var] = cur
                nxt = go(f.body)
                if nxt == cur:
                    break
                cur = nxt
            if saved is None:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
            res = cur
        else:
            raise ValueError(k)
        if closed:
            cache[f] = res
        return res

    return go(phi)


def decode(index: int, n: int, atoms: Sequence[str], root: int) -> Coalgebra:
    succ = [frozenset(t for t in range(n) if index >> (s * n + t) & 1) for s in range(n)]
    val = [frozenset(a for i, a in enumerate(atoms) if index >> (n * n + s * len(atoms) + i) & 1)
           for s in range(n)]
    return Coalgebra(("rel",), n, root, val, succ)


def find_model(phi: Formula, max_states: int, atoms: Optional[Sequence[str]] = None,
               min_states: int = 1) -> Optional[Found]:
    """First model (fewest states, then least encoding) with a state satisfying ``phi``."""
    names = sorted(set(A.atoms_of(phi))) if atoms is None else list(atoms)
    for n in range(min_states, max_states + 1):
        ext = _evaluate(phi, n, names)
        best = None
        for s, bits in enumerate(ext):
            if bits:
                low = (bits & -bits).bit_length() - 1
                if best is None or low < best[0]:
                    best = (low, s)
        if best is not None:
            return Found(decode(best[0], n, names, best[1]), best[1], n)
    return None


def has_model(phi: Formula, states: int, atoms: Optional[Sequence[str]] = None) -> bool:
    """Is ``phi`` satisfied somewhere in some model with exactly ``states`` states?

    Smaller models embed as generated submodels, so this covers them too.
    """
    names = sorted(set(A.atoms_of(phi))) if atoms is None else list(atoms)
    return any(_evaluate(phi, states, names))
