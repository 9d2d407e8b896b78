"""Seeded random instance generators shared by the self-test and the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .coalgebra import Coalgebra
from .formula import ast as A
from .formula.ast import Formula, ModalOp
from .onestep.pair import Literal, OneStepPair
from .poly import Polynomial

PLACEHOLDERS = ("a", "b", "c", "d")


def _random_poly(rng: random.Random, logic: str, arity: int, linear: bool) -> Polynomial:
    terms = []
    for i in range(arity):
        e = [0] * arity
        e[i] = 1
        if logic == "graded":
            terms.append((tuple(e), rng.randint(1, 3)))
        else:
            terms.append((tuple(e), Fraction(rng.randint(1, 4), rng.choice((1, 2, 4)))))
    if not linear:
        e = [0] * arity
        e[rng.randrange(arity)] += 1
        e[rng.randrange(arity)] += 1
        coeff = rng.randint(1, 2) if logic == "graded" else Fraction(rng.randint(1, 3), 2)
        terms.append((tuple(e), coeff))
    const = -rng.randint(0, 2) if logic == "graded" else -Fraction(rng.randint(0, 4), 4)
    terms.append(((0,) * arity, const))
    return Polynomial(arity, terms)


def random_literal(rng: random.Random, logic: str, vs: Sequence[str], linear: bool = True) -> Literal:
    if rng.random() < 0.15:
        return Literal(ModalOp("rel" if logic == "fusion" else logic,
                               rng.choice(("atom", "natom")), atom=rng.choice(("p", "q"))))
    if logic == "fusion":
        logic = rng.choice(("rel", "prob"))
    kind = rng.choice(("dia", "box"))
    if logic == "rel":
        return Literal(ModalOp("rel", kind), (rng.choice(vs),))
    arity = rng.choice((1, 1, 2))
    poly = _random_poly(rng, logic, arity, linear or rng.random() < 0.5)
    return Literal(ModalOp(logic, kind, poly), tuple(rng.choice(vs) for _ in range(arity)))


def random_pair(rng: random.Random, logic: str, max_vars: int = 4, max_theta: int = 8,
                linear: bool = True) -> OneStepPair:
    vs = PLACEHOLDERS[: rng.randint(1, max_vars)]
    universe = [frozenset(x for i, x in enumerate(vs) if mask >> i & 1) for mask in range(1 << len(vs))]
    theta = rng.sample(universe, rng.randint(0, min(max_theta, len(universe))))
    gamma = [random_literal(rng, logic, vs, linear) for _ in range(rng.randint(1, 4))]
    return OneStepPair.make(gamma, theta, vs)


# formulae -------------------------------------------------------------------------


def random_formula(rng: random.Random, size: int, logic: str = "rel", atoms: Sequence[str] = ("p", "q"),
                   variables: Sequence[str] = ("X", "Y", "Z"), polyadic: float = 0.0) -> Formula:
    """A random closed formula with roughly ``size`` symbols (guarded or not).

    ``logic`` may be ``fusion``, mixing relational and probabilistic
    modalities.  With probability ``polyadic`` a graded or probabilistic
    modality gets two arguments and a random polynomial.
    """
    atom_logic = "rel" if logic == "fusion" else logic

    def leaf(bound):
        choices = ["atom", "atom", "const"] + (["var"] * 2 if bound else [])
        c = rng.choice(choices)
        if c == "atom":
            return A.atom(rng.choice(atoms), atom_logic, negated=rng.random() < 0.3)
        if c == "const":
            return rng.choice((A.top(), A.bot()))
        return A.var(rng.choice(bound))

    def modal(n: int, bound: list[str]) -> Formula:
        kind = rng.choice(("dia", "box"))
        lg = rng.choice(("rel", "prob")) if logic == "fusion" else logic
        if lg == "rel":
            return A.modal(ModalOp("rel", kind), go(n - 1, bound))
        if n > 3 and rng.random() < polyadic:
            k = rng.randint(1, n - 3)
            poly = _random_poly(rng, lg, 2, rng.random() < 0.5)
            return A.modal(ModalOp(lg, kind, poly), go(k, bound), go(n - 2 - k, bound))
        b = rng.randint(0, 1) if lg == "graded" else Fraction(rng.randint(0, 3), 4)
        return A.modal(ModalOp(lg, kind, Polynomial.threshold(b)), go(n - 1, bound))

    def go(n: int, bound: list[str]) -> Formula:
        if n <= 1:
            return leaf(bound)
        r = rng.random()
        if r < 0.3:
            k = rng.randint(1, n - 2) if n > 2 else 1
            l, rt = go(k, bound), go(max(1, n - 1 - k), bound)
            return A.and_(l, rt) if rng.random() < 0.5 else A.or_(l, rt)
        if r < 0.65:
            return modal(n, bound)
        free = [v for v in variables if v not in bound]
        if free and n > 2:
            x = free[0]
            kind = rng.choice((A.MU, A.NU))
            return A.binder(kind, x, go(n - 1, bound + [x]))
        return modal(n, bound)

    return go(size, [])


# models ---------------------------------------------------------------------------


def random_model(rng: random.Random, logics: Sequence[str], size: int,
                 atoms: Sequence[str] = ("p", "q"), max_out: int = 3) -> Coalgebra:
    """A random finite model with one transition component per logic."""
    model = Coalgebra(tuple(logics), size,
                      atoms=[frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(size)])
    for x in range(size):
        if model.succ is not None:
            model.succ[x] = frozenset(rng.sample(range(size), rng.randint(0, min(max_out, size))))
        if model.weights is not None:
            model.weights[x] = {y: rng.randint(1, 3) for y in rng.sample(range(size), rng.randint(0, min(max_out, size)))}
        if model.dist is not None:
            ys = rng.sample(range(size), rng.randint(1, min(max_out, size)))
            raw = [rng.randint(1, 4) for _ in ys]
            model.dist[x] = {y: Fraction(r, sum(raw)) for y, r in zip(ys, raw)}
    return model
