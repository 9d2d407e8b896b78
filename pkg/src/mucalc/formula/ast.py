"""Hash-consed formula trees and modal operators.

Every formula node is interned: two structurally equal formulae are the same
Python object, so equality and hashing are by identity and cheap.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from ..poly import Polynomial

LOGICS = ("rel", "graded", "prob")

TOP, BOT, AND, OR, MODAL, VAR, NEGVAR, MU, NU, NOT = (
    "top", "bot", "and", "or", "modal", "var", "negvar", "mu", "nu", "not",
)
BINDERS = (MU, NU)


@dataclass(frozen=True)
class ModalOp:
    """A modality of one of the supported logics.

    kind is one of ``dia``/``box`` (diamond-like and box-like, possibly with a
    polynomial index) or ``atom``/``natom`` for propositional atoms, which are
    nullary modalities.
    """

    logic: str
    kind: str
    poly: Optional[Polynomial] = None
    atom: Optional[str] = None

    def __post_init__(self):
        if self.logic not in LOGICS:
            raise ValueError(f"unknown logic {self.logic!r}")
        if self.kind in ("atom", "natom"):
            if not self.atom:
                raise ValueError("atom modality needs a name")
        elif self.kind in ("dia", "box"):
            if self.logic == "rel" and self.poly is not None:
                raise ValueError("relational modalities carry no polynomial")
            if self.logic != "rel" and self.poly is None:
                raise ValueError("graded/probabilistic modalities need a polynomial")
        else:
            raise ValueError(f"unknown modality kind {self.kind!r}")

    @property
    def arity(self) -> int:
        if self.kind in ("atom", "natom"):
            return 0
        if self.poly is None:
            return 1
        return self.poly.arity

    @property
    def is_atom(self) -> bool:
        return self.kind in ("atom", "natom")

    @property
    def is_diamond(self) -> bool:
        return self.kind == "dia"

    def dual(self) -> "ModalOp":
        flip = {"dia": "box", "box": "dia", "atom": "natom", "natom": "atom"}[self.kind]
        return ModalOp(self.logic, flip, self.poly, self.atom)

    def index(self) -> Fraction:
        """Graded/probabilistic index: minus the constant coefficient."""
        return -self.poly.constant() if self.poly is not None else Fraction(0)

    def size(self) -> int:
        return 1 + (self.poly.size() if self.poly is not None else 0)

    def text(self) -> str:
        if self.kind == "atom":
            return self.atom
        if self.kind == "natom":
            return "!" + self.atom
        if self.poly is None:
            return self.kind
        if self.poly.is_threshold():
            b = -self.poly.constant()
            inner = str(b.numerator) if b.denominator == 1 else f"{b.numerator}/{b.denominator}"
        else:
            inner = str(self.poly)
        return f"<{inner}>" if self.kind == "dia" else f"[{inner}]"


class Formula:
    """Immutable, interned formula node.  Build nodes with the module helpers."""

    __slots__ = ("kind", "op", "var", "children", "_fv", "_str", "_size", "__weakref__")

    kind: str
    op: Optional[ModalOp]
    var: Optional[str]
    children: tuple["Formula", ...]

    def __setattr__(self, name, value):
        raise AttributeError("Formula is immutable")

    @property
    def body(self) -> "Formula":
        return self.children[0]

    @property
    def left(self) -> "Formula":
        return self.children[0]

    @property
    def right(self) -> "Formula":
        return self.children[1]

    @property
    def is_binder(self) -> bool:
        return self.kind in BINDERS

    @property
    def is_modal(self) -> bool:
        return self.kind == MODAL

    @property
    def is_atom(self) -> bool:
        return self.kind == MODAL and self.op.is_atom

    def free_vars(self) -> frozenset[str]:
        fv = self._fv
        if fv is None:
            if self.kind == VAR or self.kind == NEGVAR:
                fv = frozenset((self.var,))
            elif self.kind in BINDERS:
                fv = self.body.free_vars() - {self.var}
            else:
                fv = frozenset().union(*(c.free_vars() for c in self.children))
            object.__setattr__(self, "_fv", fv)
        return fv

    def size(self) -> int:
        """Number of symbols: nodes plus numeric constant sizes for modal ops."""
        s = self._size
        if s is None:
            s = 1 + sum(c.size() for c in self.children)
            object.__setattr__(self, "_size", s)
        return s

    def subformulae(self) -> Iterator["Formula"]:
        """Pre-order traversal, duplicates included."""
        stack = [self]
        while stack:
            f = stack.pop()
            yield f
            stack.extend(reversed(f.children))

    def __str__(self) -> str:
        s = self._str
        if s is None:
            s = _render(self)
            object.__setattr__(self, "_str", s)
        return s

    def __repr__(self) -> str:
        return f"Formula({self})"

    def __reduce__(self):
        return (_rebuild, (self.kind, self.op, self.var, self.children))


_table: dict[tuple, Formula] = {}
_lock = threading.Lock()


def _make(kind: str, op: Optional[ModalOp] = None, var: Optional[str] = None,
          children: tuple[Formula, ...] = ()) -> Formula:
    key = (kind, op, var, children)
    node = _table.get(key)
    if node is not None:
        return node
    with _lock:
        node = _table.get(key)
        if node is None:
            node = object.__new__(Formula)
            for name, value in (("kind", kind), ("op", op), ("var", var), ("children", children),
                                ("_fv", None), ("_str", None), ("_size", None)):
                object.__setattr__(node, name, value)
            _table[key] = node
    return node


def _rebuild(kind, op, var, children):
    return _make(kind, op, var, children)


def top() -> Formula:
    return _make(TOP)


def bot() -> Formula:
    return _make(BOT)


def and_(a: Formula, b: Formula) -> Formula:
    return _make(AND, children=(a, b))


def or_(a: Formula, b: Formula) -> Formula:
    return _make(OR, children=(a, b))


def not_(a: Formula) -> Formula:
    """Surface negation; removed by ``normalize``."""
    return _make(NOT, children=(a,))


def modal(op: ModalOp, *args: Formula) -> Formula:
    if len(args) != op.arity:
        raise ValueError(f"modality {op.text()} expects {op.arity} arguments, got {len(args)}")
    return _make(MODAL, op=op, children=tuple(args))


def atom(name: str, logic: str = "rel", negated: bool = False) -> Formula:
    return modal(ModalOp(logic, "natom" if negated else "atom", atom=name))


def dia(a: Formula) -> Formula:
    return modal(ModalOp("rel", "dia"), a)


def box(a: Formula) -> Formula:
    return modal(ModalOp("rel", "box"), a)


def var(name: str) -> Formula:
    return _make(VAR, var=name)


def negvar(name: str) -> Formula:
    return _make(NEGVAR, var=name)


def mu(name: str, body: Formula) -> Formula:
    return _make(MU, var=name, children=(body,))


def nu(name: str, body: Formula) -> Formula:
    return _make(NU, var=name, children=(body,))


def binder(kind: str, name: str, body: Formula) -> Formula:
    return _make(kind, var=name, children=(body,))


def conj(*fs: Formula) -> Formula:
    if not fs:
        return top()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = and_(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return bot()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = or_(f, out)
    return out


def rebuild(f: Formula, children: tuple[Formula, ...]) -> Formula:
    if children == f.children:
        return f
    return _make(f.kind, f.op, f.var, children)


def substitute(f: Formula, name: str, repl: Formula) -> Formula:
    """Replace the free occurrences of variable ``name`` by ``repl``.

    No capture avoidance is needed for clean formulae, where ``repl`` is closed
    or its free variables are bound outside ``f``.
    """
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if name not in g.free_vars():
            return g
        hit = memo.get(g)
        if hit is not None:
            return hit
        if g.kind == VAR:
            out = repl
        elif g.kind == NEGVAR:
            raise ValueError(f"cannot substitute into negated variable {name}")
        else:
            out = rebuild(g, tuple(go(c) for c in g.children))
        memo[g] = out
        return out

    return go(f)


def map_formula(f: Formula, fn: Callable[[Formula, tuple[Formula, ...]], Formula]) -> Formula:
    """Bottom-up rebuild: ``fn`` receives the node and its rewritten children."""
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is None:
            hit = fn(g, tuple(go(c) for c in g.children))
            memo[g] = hit
        return hit

    return go(f)


def atoms_of(f: Formula) -> list[str]:
    return sorted({g.op.atom for g in f.subformulae() if g.is_atom})


def logics_of(f: Formula) -> set[str]:
    return {g.op.logic for g in f.subformulae() if g.kind == MODAL and not g.op.is_atom}


# rendering ------------------------------------------------------------------

def _render(f: Formula) -> str:
    k = f.kind
    if k == TOP:
        return "true"
    if k == BOT:
        return "false"
    if k == VAR:
        return f.var
    if k == NEGVAR:
        return "!" + f.var
    if k == NOT:
        return "!" + _wrap(f.body)
    if k == AND:
        return f"{_wrap(f.left)} & {_wrap(f.right)}"
    if k == OR:
        return f"{_wrap(f.left)} | {_wrap(f.right)}"
    if k in BINDERS:
        return f"{k} {f.var}. {f.body}"
    op = f.op
    if op.is_atom:
        return op.text()
    if op.poly is None or op.poly.is_threshold():
        return f"{op.text()} {_wrap(f.children[0])}"
    return f"{op.text()}(" + ", ".join(str(c) for c in f.children) + ")"


def _wrap(f: Formula) -> str:
    s = str(f)
    if f.kind in (AND, OR) or f.kind in BINDERS:
        return f"({s})"
    return s
