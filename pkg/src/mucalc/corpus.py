"""Curated formulae with known verdicts.

Relational verdicts are confirmed by exhaustive model search in the test
suite; SAT verdicts of the other logics are confirmed by extracting and
checking a model; their UNSAT verdicts follow from the short arguments given
in ``why``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import parse_logic


@dataclass(frozen=True)
class Entry:
    name: str
    logic: str
    text: str
    expected: str
    why: str = ""

    @property
    def logics(self) -> tuple[str, ...]:
        return parse_logic(self.logic)


CORPUS: tuple[Entry, ...] = (
    # relational
    Entry("ef", "rel", "mu X. (p | dia X)", "SAT"),
    Entry("mu-dia", "rel", "mu X. dia X", "UNSAT"),
    Entry("fair", "rel", "nu X. mu Y. ((p & dia X) | dia Y)", "SAT"),
    Entry("nu-dia", "rel", "nu X. dia X", "SAT"),
    Entry("contradiction", "rel", "p & !p", "UNSAT"),
    Entry("always-q-eventually-not", "rel", "(nu X. dia X & box X & q) & mu Y. (!q | dia Y)", "UNSAT"),
    Entry("well-founded", "rel", "mu X. box X", "SAT"),
    Entry("infinite-vs-well-founded", "rel", "(nu X. dia true & box X) & mu Y. box Y", "UNSAT"),
    Entry("ef-vs-ag", "rel", "(mu X. p | dia X) & (nu Y. !p & box Y)", "UNSAT"),
    Entry("fair-box", "rel", "nu X. mu Y. ((p & box X) | box Y)", "SAT"),
    Entry("two-successors", "rel", "dia p & dia !p & box (p | q)", "SAT"),
    Entry("box-clash", "rel", "dia (p & q) & box !p", "UNSAT"),
    Entry("gf-path", "rel", "nu X. (dia X & mu Y. (p | dia Y))", "SAT"),
    Entry("fair-vs-ag", "rel", "(nu X. mu Y. ((p & dia X) | dia Y)) & (nu Z. !p & box Z)", "UNSAT"),
    Entry("top", "rel", "true", "SAT"),
    Entry("bottom", "rel", "false", "UNSAT"),
    Entry("unguarded", "rel", "!q & box (mu X. dia p | ((X | !p) & X))", "SAT"),
    # graded
    Entry("binary-tree", "graded", "nu X. (a & <1> X)", "SAT"),
    Entry("poly-tree", "graded", "mu Y. (a | <3*x1 + x2^2 - 10>(c & Y, a & Y))", "SAT"),
    Entry("graded-count-clash", "graded", "<2> a & [1] !a", "UNSAT",
          "more than two a-successors but at most one"),
    Entry("graded-both", "graded", "<1> a & <1> !a", "SAT"),
    Entry("graded-empty", "graded", "<0> (a & !a)", "UNSAT", "a successor satisfying a contradiction"),
    Entry("graded-all-x", "graded", "nu X. (<1> X & [0] X)", "SAT"),
    Entry("graded-mu", "graded", "mu X. <0> X", "UNSAT", "least fixpoint of a diamond chain"),
    Entry("graded-poly-sum", "graded", "<x1 + x2 - 2>(a, c)", "SAT"),
    Entry("graded-none", "graded", "<1> a & [0] !a", "UNSAT", "two a-successors but none allowed"),
    # probabilistic
    Entry("safety", "prob", "nu X. (safe & <19/20> X)", "SAT"),
    Entry("half-half", "prob", "<1/2> a & <1/2> !a", "UNSAT", "complementary events cannot both exceed 1/2"),
    Entry("product", "prob", "<x1*x2 - 9/10>(a, c)", "SAT"),
    Entry("disjoint-halves", "prob", "<1/2> a & <1/2> c & [0] (!a | !c)", "UNSAT",
          "a and c almost surely disjoint, so their masses sum to at most 1"),
    Entry("prob-reach", "prob", "mu X. (p | <0> X)", "SAT"),
    Entry("prob-mu", "prob", "mu X. <0> X", "UNSAT", "least fixpoint of a diamond chain"),
    Entry("prob-as", "prob", "nu X. (a & [0] X)", "SAT"),
    Entry("variance-ok", "prob", "<x1*x2 - 1/5>(a, !a)", "SAT"),
    Entry("variance-too-big", "prob", "<x1*x2 - 1/3>(a, !a)", "UNSAT", "x(1-x) never exceeds 1/4"),
    # fusion of relational and probabilistic
    Entry("fusion-mixed", "fusion:rel,prob", "(dia p | <1/2> q) & box !p", "SAT"),
    Entry("fusion-loop", "fusion:rel,prob", "nu X. (dia X & [1/3] a & <2/3> (b & X))", "SAT"),
    Entry("fusion-clash", "fusion:rel,prob", "dia p & box !p & <1/2> q", "UNSAT",
          "the relational part alone is contradictory"),
    Entry("fusion-independent", "fusion:rel,prob", "(mu X. p | dia X) & (nu Y. !p & [0] Y)", "SAT"),
    Entry("fusion-prob-clash", "fusion:rel,prob", "dia a & <1/2> a & <1/2> !a", "UNSAT",
          "the probabilistic part alone is contradictory"),
)


def by_name(name: str) -> Entry:
    for e in CORPUS:
        if e.name == name:
            return e
    raise KeyError(name)
