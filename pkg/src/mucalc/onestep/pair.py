"""One-step pairs, witnesses and the independent witness validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

from ..formula.ast import ModalOp

Placeholder = Hashable


@dataclass(frozen=True)
class Literal:
    """A modal literal over placeholders: ``op(args...)``; atoms take no arguments."""

    op: ModalOp
    args: tuple[Placeholder, ...] = ()

    def __post_init__(self):
        if len(self.args) != self.op.arity:
            raise ValueError(f"{self.op.text()} expects {self.op.arity} arguments")

    @property
    def logic(self) -> str:
        return "atom" if self.op.is_atom else self.op.logic

    def text(self) -> str:
        if self.op.is_atom:
            return self.op.text()
        if self.op.poly is None:
            return f"{self.op.kind} {self.args[0]}"
        return f"{self.op.text()}(" + ",".join(map(str, self.args)) + ")"


def _sort_key(x):
    return (type(x).__name__, x) if not isinstance(x, tuple) else ("tuple", tuple(map(str, x)))


def sorted_placeholders(xs: Iterable[Placeholder]) -> tuple:
    return tuple(sorted(set(xs), key=_sort_key))


def theta_key(u: frozenset) -> tuple:
    return tuple(_sort_key(x) for x in sorted(u, key=_sort_key))


@dataclass(frozen=True)
class OneStepPair:
    """(gamma, Theta) over placeholders V.

    ``theta`` is stored deduplicated in a canonical order so that witnesses
    and backend runs are deterministic.
    """

    gamma: tuple[Literal, ...]
    theta: tuple[frozenset, ...]
    extra_vars: tuple[Placeholder, ...] = ()

    @staticmethod
    def make(gamma: Iterable[Literal], theta: Iterable[Iterable[Placeholder]],
             variables: Iterable[Placeholder] = ()) -> "OneStepPair":
        gam = tuple(sorted(set(gamma), key=lambda l: (l.op.logic, l.op.kind, l.op.atom or "",
                                                      str(l.op.poly), tuple(map(_sort_key, l.args)))))
        th = tuple(sorted({frozenset(u) for u in theta}, key=theta_key))
        return OneStepPair(gam, th, sorted_placeholders(variables))

    @property
    def variables(self) -> tuple:
        vs = set(self.extra_vars)
        for lit in self.gamma:
            vs.update(lit.args)
        for u in self.theta:
            vs.update(u)
        return sorted_placeholders(vs)

    @property
    def size(self) -> int:
        """size(gamma) + |V|."""
        return sum(l.op.size() + len(l.args) for l in self.gamma) + len(self.variables)

    def logics(self) -> set[str]:
        return {l.logic for l in self.gamma if l.logic != "atom"}

    def atom_literals(self) -> list[Literal]:
        return [l for l in self.gamma if l.op.is_atom]

    def modal_literals(self) -> list[Literal]:
        return [l for l in self.gamma if not l.op.is_atom]

    def restrict(self, logic: str) -> "OneStepPair":
        return OneStepPair(tuple(l for l in self.gamma if l.logic == logic), self.theta, self.extra_vars)

    def text(self) -> str:
        g = ", ".join(l.text() for l in self.gamma)
        t = ", ".join("{" + ",".join(map(str, sorted(u, key=_sort_key))) + "}" for u in self.theta)
        return f"gamma={{{g}}} theta={{{t}}}"


# witnesses -------------------------------------------------------------------


@dataclass(frozen=True)
class RelWitness:
    chosen: tuple[frozenset, ...]
    atoms: frozenset[str] = frozenset()
    logic: str = "rel"


@dataclass(frozen=True)
class GradedWitness:
    mult: tuple[tuple[frozenset, int], ...]
    atoms: frozenset[str] = frozenset()
    logic: str = "graded"

    def as_dict(self) -> dict[frozenset, int]:
        return dict(self.mult)


@dataclass(frozen=True)
class ProbWitness:
    weights: tuple[tuple[frozenset, Fraction], ...]
    atoms: frozenset[str] = frozenset()
    logic: str = "prob"

    def as_dict(self) -> dict[frozenset, Fraction]:
        return dict(self.weights)

    @property
    def support(self) -> int:
        return sum(1 for _, w in self.weights if w > 0)


@dataclass(frozen=True)
class FusionWitness:
    parts: tuple[tuple[str, object], ...]
    atoms: frozenset[str] = frozenset()
    logic: str = "fusion"

    def part(self, logic: str):
        return dict(self.parts).get(logic)


Witness = Union[RelWitness, GradedWitness, ProbWitness, FusionWitness]


@dataclass(frozen=True)
class Unresolved:
    """Third outcome of the nonlinear probabilistic search: no witness found at resolution epsilon."""

    epsilon: Fraction
    reason: str = "unsat-at-resolution"

    def __str__(self) -> str:
        return f"{self.reason}({self.epsilon})"


Outcome = Optional[Union[Witness, Unresolved]]


def is_sat(outcome: Outcome) -> bool:
    return outcome is not None and not isinstance(outcome, Unresolved)


# the validator -------------------------------------------------------------


def _measure(weights: Mapping[frozenset, Fraction | int], pred) -> Fraction:
    return sum((Fraction(w) for u, w in weights.items() if pred(u)), Fraction(0))


def literal_holds(lit: Literal, witness: Witness) -> bool:
    """Direct predicate-lifting evaluation of one literal at a witness."""
    op = lit.op
    if op.is_atom:
        return (op.atom in witness.atoms) == (op.kind == "atom")
    if isinstance(witness, FusionWitness):
        part = witness.part(op.logic)
        return part is not None and literal_holds(lit, part)
    if op.logic == "rel":
        if not isinstance(witness, RelWitness):
            return False
        a = lit.args[0]
        if op.kind == "dia":
            return any(a in u for u in witness.chosen)
        return all(a in u for u in witness.chosen)
    if op.logic == "graded" and isinstance(witness, GradedWitness):
        weights = witness.as_dict()
    elif op.logic == "prob" and isinstance(witness, ProbWitness):
        weights = witness.as_dict()
    else:
        return False
    if op.kind == "dia":
        vals = [_measure(weights, lambda u, a=a: a in u) for a in lit.args]
        return op.poly(vals) > 0
    vals = [_measure(weights, lambda u, a=a: a not in u) for a in lit.args]
    return op.poly(vals) <= 0


def witness_well_formed(pair: OneStepPair, witness: Witness) -> bool:
    theta = set(pair.theta)
    if isinstance(witness, RelWitness):
        return all(u in theta for u in witness.chosen)
    if isinstance(witness, GradedWitness):
        return all(u in theta and isinstance(m, int) and m >= 0 for u, m in witness.mult)
    if isinstance(witness, ProbWitness):
        ws = [w for _, w in witness.weights]
        return (all(u in theta for u, _ in witness.weights) and all(w >= 0 for w in ws)
                and sum(ws, Fraction(0)) == 1)
    if isinstance(witness, FusionWitness):
        return all(witness_well_formed(pair, w) and w.atoms == witness.atoms for _, w in witness.parts)
    return False


def validate(pair: OneStepPair, witness: Witness) -> bool:
    """True iff ``witness`` is an element of F(Theta) satisfying every literal of gamma."""
    if not witness_well_formed(pair, witness):
        return False
    return all(literal_holds(l, witness) for l in pair.gamma)


def atoms_consistent(pair: OneStepPair) -> Optional[frozenset[str]]:
    """The positive atom set if the atom literals are jointly consistent, else None."""
    pos = {l.op.atom for l in pair.atom_literals() if l.op.kind == "atom"}
    neg = {l.op.atom for l in pair.atom_literals() if l.op.kind == "natom"}
    return None if pos & neg else frozenset(pos)


def literal_index_bound(pair: OneStepPair) -> int:
    """Largest diamond index among graded literals (0 when there is none)."""
    best = Fraction(0)
    for l in pair.gamma:
        if l.op.logic == "graded" and l.op.kind == "dia":
            best = max(best, l.op.index())
    return int(best)


def normalize_pair(pair: OneStepPair) -> OneStepPair:
    """Equisatisfiable pair where every literal argument is a fresh placeholder.

    The argument at position i of the j-th literal becomes ``(j, i, a)``;
    each profile u maps to the set of fresh placeholders whose original
    argument lies in u.
    """
    fresh: list[tuple[tuple, Placeholder]] = []
    gamma = []
    for j, lit in enumerate(pair.gamma):
        new_args = []
        for i, a in enumerate(lit.args):
            name = (j, i, a)
            fresh.append((name, a))
            new_args.append(name)
        gamma.append(Literal(lit.op, tuple(new_args)))
    theta = [frozenset(n for n, a in fresh if a in u) for u in pair.theta]
    return OneStepPair.make(gamma, theta, [n for n, _ in fresh])
