"""Nondeterministic tracking parity automaton over choices and selections.

States are closure indices.  A letter is either a *choice* (one disjunct per
disjunction) or a *selection* (a set of argument positions of modal
literals).  Letters are never
materialized over the whole closure: ``relevant_letters`` enumerates only the
restrictions that matter for a given label.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable

from .formula import AND, BOT, MODAL, MU, NU, OR, TOP
from .formula.closure import ClosureTable, unfold


@dataclass(frozen=True, order=True)
class Letter:
    """Canonical restricted letter.

    For a choice, ``items`` is a sorted tuple of ``(disjunction, side)`` pairs
    with side 0 (left) or 1 (right).  For a selection it is a sorted tuple of
    ``(modal literal, argument position)`` pairs; a unary literal is selected
    by ``(m, 0)``.
    """

    kind: str  # "choice" | "sel"
    items: tuple

    @property
    def is_choice(self) -> bool:
        return self.kind == "choice"

    def restrict(self, label: Iterable[int]) -> "Letter":
        keep = set(label)
        return Letter(self.kind, tuple(x for x in self.items if x[0] in keep))

    def text(self, table: ClosureTable | None = None) -> str:
        if self.kind == "choice":
            return "tau{" + ",".join(f"{d}:{'LR'[s]}" for d, s in self.items) + "}"
        return "kappa{" + ",".join(f"{m}.{i}" for m, i in self.items) + "}"


def choice(items: Iterable[tuple[int, int]]) -> Letter:
    return Letter("choice", tuple(sorted(items)))


def selection(items: Iterable[tuple[int, int]]) -> Letter:
    return Letter("sel", tuple(sorted(set(items))))


class TrackingNPA:
    """The tracking automaton: states are closure indices, initial state 0."""

    def __init__(self, table: ClosureTable):
        self.table = table
        fs = table.formulas
        idx = table.index
        self.kind = [f.kind for f in fs]
        self.kids = [tuple(idx[c] for c in f.children) if f.kind in (AND, OR, MODAL) else () for f in fs]
        self.unfolding = [idx[unfold(f)] if f.kind in (MU, NU) else -1 for f in fs]
        self.is_atom = [f.kind == MODAL and f.op.is_atom for f in fs]
        self.priorities = list(table.alpha)
        self.initial = (0,)
        self._memo: dict[tuple[int, Letter], tuple[int, ...]] = {}
        self._lock = threading.Lock()

    @property
    def num_states(self) -> int:
        return len(self.kind)

    def priority(self, s: int) -> int:
        return self.priorities[s]

    @property
    def max_priority(self) -> int:
        return max(self.priorities)

    def delta(self, s: int, letter: Letter) -> tuple[int, ...]:
        key = (s, letter)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._delta(s, letter)
            with self._lock:
                self._memo[key] = hit
        return hit

    def _delta(self, s: int, letter: Letter) -> tuple[int, ...]:
        k = self.kind[s]
        if letter.kind == "choice":
            if k in (TOP, BOT):
                return ()
            if k == OR:
                side = dict(letter.items).get(s)
                if side is None:
                    raise KeyError(f"choice letter does not cover disjunction {s}")
                return (self.kids[s][side],)
            if k == AND:
                return tuple(sorted(set(self.kids[s])))
            if k in (MU, NU):
                return (self.unfolding[s],)
            if k == MODAL:
                return (s,)
            raise ValueError(k)
        # selection: a modal literal is tracked to its selected arguments only
        if k != MODAL:
            return ()
        return tuple(sorted({self.kids[s][i] for m, i in letter.items if m == s}))

    def post(self, label: Iterable[int], letter: Letter) -> frozenset[int]:
        out: set[int] = set()
        for s in label:
            out.update(self.delta(s, letter))
        return frozenset(out)

    def relevant_letters(self, label: Iterable[int]) -> tuple[list[Letter], list[Letter]]:
        return relevant_letters(self, label)

    def dump(self) -> str:
        lines = [f"npa states={self.num_states} initial=0 max_priority={self.max_priority}"]
        for s, f in enumerate(self.table.formulas):
            k = self.kind[s]
            if k == OR:
                trans = f"choice L->{self.kids[s][0]} R->{self.kids[s][1]}"
            elif k == AND:
                trans = "choice ->" + ",".join(map(str, self.kids[s]))
            elif k in (MU, NU):
                trans = f"choice ->{self.unfolding[s]}"
            elif k == MODAL and not self.is_atom[s]:
                trans = f"choice ->{s}; select ->" + ",".join(map(str, self.kids[s]))
            else:
                trans = "none"
            lines.append(f"{s} prio={self.priorities[s]} {trans} :: {f}")
        return "\n".join(lines)


def relevant_letters(npa: TrackingNPA, label: Iterable[int]) -> tuple[list[Letter], list[Letter]]:
    """Representatives of the letter classes that a label can distinguish.

    Choices are restricted to the disjunctions in the label.  Selections range
    over sets of argument positions of the non-nullary modal literals in the
    label; atoms have no arguments, so they never contribute.
    """
    lab = sorted(set(label))
    disj = [s for s in lab if npa.kind[s] == OR]
    mods = [s for s in lab if npa.kind[s] == MODAL and not npa.is_atom[s]]
    choices = [choice(zip(disj, sides)) for sides in itertools.product((0, 1), repeat=len(disj))]
    slots = [(m, i) for m in mods for i in range(len(npa.kids[m]))]
    sels = [selection(x for j, x in enumerate(slots) if mask >> j & 1) for mask in range(1 << len(slots))]
    return choices, sels


def build_tracking(table: ClosureTable) -> TrackingNPA:
    return TrackingNPA(table)
