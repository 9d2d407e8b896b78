"""Finite coalgebras, exact fixpoint semantics and the plain-text model format.

A model carries one transition component per logic it interprets:
successor sets (relational), integer weights (graded) or rational
distributions (probabilistic).  Fusion models carry several components over
the same states.  Atoms are a separate valuation shared by all logics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .formula import ast as A
from .formula.ast import Formula, ModalOp

FORMAT_HEADER = "mucalc-model 1"


@dataclass
class Coalgebra:
    logics: tuple[str, ...]
    size: int
    root: int = 0
    atoms: list[frozenset[str]] = field(default_factory=list)
    succ: Optional[list[frozenset[int]]] = None
    weights: Optional[list[dict[int, int]]] = None
    dist: Optional[list[dict[int, Fraction]]] = None

    def __post_init__(self):
        if not self.atoms:
            self.atoms = [frozenset() for _ in range(self.size)]
        if "rel" in self.logics and self.succ is None:
            self.succ = [frozenset() for _ in range(self.size)]
        if "graded" in self.logics and self.weights is None:
            self.weights = [{} for _ in range(self.size)]
        if "prob" in self.logics and self.dist is None:
            self.dist = [{} for _ in range(self.size)]

    @property
    def states(self) -> range:
        return range(self.size)

    def check(self) -> list[str]:
        """Structural problems, empty when the model is well formed."""
        errs = []
        if not 0 <= self.root < self.size:
            errs.append(f"root {self.root} out of range")
        if len(self.atoms) != self.size:
            errs.append("atom valuation has the wrong length")
        if self.succ is not None:
            for x, ys in enumerate(self.succ):
                if any(not 0 <= y < self.size for y in ys):
                    errs.append(f"state {x}: successor out of range")
        if self.weights is not None:
            for x, row in enumerate(self.weights):
                if any(not 0 <= y < self.size or not isinstance(w, int) or w < 0 for y, w in row.items()):
                    errs.append(f"state {x}: bad weight row")
        if self.dist is not None:
            for x, row in enumerate(self.dist):
                if any(not 0 <= y < self.size or w < 0 for y, w in row.items()):
                    errs.append(f"state {x}: bad distribution entry")
                if sum(row.values(), Fraction(0)) != 1:
                    errs.append(f"state {x}: distribution does not sum to 1")
        return errs

    def successors(self, x: int) -> set[int]:
        out: set[int] = set()
        if self.succ is not None:
            out |= self.succ[x]
        if self.weights is not None:
            out |= {y for y, w in self.weights[x].items() if w > 0}
        if self.dist is not None:
            out |= {y for y, w in self.dist[x].items() if w > 0}
        return out

    def reachable(self, start: Optional[int] = None) -> list[int]:
        start = self.root if start is None else start
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in sorted(self.successors(x)):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(seen)

    def generated(self) -> tuple["Coalgebra", dict[int, int]]:
        """The submodel generated by the root, with the old-to-new state map.

        Truth at the root is invariant under this restriction.
        """
        keep = self.reachable()
        new = {x: i for i, x in enumerate(keep)}
        sub = Coalgebra(self.logics, len(keep), new[self.root], [self.atoms[x] for x in keep])
        if self.succ is not None:
            sub.succ = [frozenset(new[y] for y in self.succ[x]) for x in keep]
        if self.weights is not None:
            sub.weights = [{new[y]: w for y, w in self.weights[x].items() if w} for x in keep]
        if self.dist is not None:
            sub.dist = [{new[y]: w for y, w in self.dist[x].items() if w} for x in keep]
        return sub, new

    def __eq__(self, other) -> bool:
        return isinstance(other, Coalgebra) and dump_model(self) == dump_model(other)


# modal clauses --------------------------------------------------------------------


def modal_holds(model: Coalgebra, x: int, op: ModalOp, args: Sequence[frozenset[int] | set[int]]) -> bool:
    """Does xi(x) lie in the lifted predicate [[op]](args)?"""
    if op.is_atom:
        return (op.atom in model.atoms[x]) == (op.kind == "atom")
    if op.logic == "rel":
        (ext,) = args
        succ = model.succ[x]
        if op.kind == "dia":
            return any(y in ext for y in succ)
        return all(y in ext for y in succ)
    row: Mapping[int, int | Fraction] = model.weights[x] if op.logic == "graded" else model.dist[x]
    if op.kind == "dia":
        vals = [sum((w for y, w in row.items() if y in ext), 0) for ext in args]
        return op.poly(vals) > 0
    vals = [sum((w for y, w in row.items() if y not in ext), 0) for ext in args]
    return op.poly(vals) <= 0


def semantics_eval(model: Coalgebra, phi: Formula, valuation: Optional[Mapping[str, frozenset[int]]] = None,
                   memo: Optional[dict] = None) -> frozenset[int]:
    """Extension of ``phi`` by structural recursion and Kleene iteration.

    ``memo`` caches closed subformulae across calls on the same model.
    """
    env = dict(valuation or {})
    cache = {} if memo is None else memo
    full = frozenset(model.states)

    def go(f: Formula) -> frozenset[int]:
        closed = not f.free_vars()
        if closed and f in cache:
            return cache[f]
        k = f.kind
        if k == A.TOP:
            res = full
        elif k == A.BOT:
            res = frozenset()
        elif k == A.VAR:
            res = env[f.var]
        elif k == A.NEGVAR:
            res = full - env[f.var]
        elif k == A.NOT:
            res = full - go(f.body)
        elif k == A.AND:
            res = go(f.left) & go(f.right)
        elif k == A.OR:
            res = go(f.left) | go(f.right)
        elif k == A.MODAL:
            exts = [go(c) for c in f.children]
            res = frozenset(x for x in model.states if modal_holds(model, x, f.op, exts))
        elif k in A.BINDERS:
            saved = env.get(f.var)
            cur = frozenset() if k == A.MU else full
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
            raise ValueError(f"unexpected node {k}")
        if closed:
            cache[f] = res
        return res

    return go(phi)


def satisfies(model: Coalgebra, phi: Formula, state: Optional[int] = None) -> bool:
    return (model.root if state is None else state) in semantics_eval(model, phi)


# serialization ---------------------------------------------------------------------


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def dump_model(model: Coalgebra) -> str:
    """Deterministic line-oriented text; ``load_model`` inverts it exactly."""
    lines = [FORMAT_HEADER]
    lines.append("logic " + ",".join(model.logics))
    lines.append(f"states {model.size}")
    lines.append(f"root {model.root}")
    for x in model.states:
        if model.atoms[x]:
            lines.append(f"atoms {x} " + " ".join(sorted(model.atoms[x])))
    if model.succ is not None:
        for x in model.states:
            ys = sorted(model.succ[x])
            lines.append(f"succ {x}" + "".join(f" {y}" for y in ys))
    if model.weights is not None:
        for x in model.states:
            for y in sorted(model.weights[x]):
                if model.weights[x][y]:
                    lines.append(f"weight {x} {y} {model.weights[x][y]}")
    if model.dist is not None:
        for x in model.states:
            for y in sorted(model.dist[x]):
                if model.dist[x][y]:
                    lines.append(f"prob {x} {y} {_frac(Fraction(model.dist[x][y]))}")
    lines.append("end")
    return "\n".join(lines) + "\n"


class ModelFormatError(ValueError):
    pass


def load_model(text: str) -> Coalgebra:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or " ".join(rows[0]) != FORMAT_HEADER:
        raise ModelFormatError("missing header")
    head: dict[str, list[str]] = {}
    body = []
    for row in rows[1:]:
        if row[0] in ("logic", "states", "root"):
            head[row[0]] = row[1:]
        elif row[0] == "end":
            break
        else:
            body.append(row)
    else:
        raise ModelFormatError("missing end marker")
    try:
        logics = tuple(head["logic"][0].split(","))
        n = int(head["states"][0])
        root = int(head["root"][0])
    except (KeyError, IndexError, ValueError) as exc:
        raise ModelFormatError(f"bad header: {exc}") from exc
    m = Coalgebra(logics, n, root)
    atoms = [set() for _ in range(n)]
    succ = [set() for _ in range(n)]
    for row in body:
        tag, args = row[0], row[1:]
        x = int(args[0])
        if tag == "atoms":
            atoms[x].update(args[1:])
        elif tag == "succ":
            succ[x].update(int(y) for y in args[1:])
        elif tag == "weight":
            m.weights[x][int(args[1])] = int(args[2])
        elif tag == "prob":
            m.dist[x][int(args[1])] = Fraction(args[2])
        else:
            raise ModelFormatError(f"unknown line {' '.join(row)!r}")
    m.atoms = [frozenset(a) for a in atoms]
    if m.succ is not None:
        m.succ = [frozenset(s) for s in succ]
    errs = m.check()
    if errs:
        raise ModelFormatError("; ".join(errs))
    return m
