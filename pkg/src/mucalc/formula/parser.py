"""Recursive-descent parser for the surface syntax.

Precedence is ``!`` > ``&`` > ``|``; modalities are prefix operators binding
like ``!``; ``mu``/``nu`` binders extend as far to the right as possible.
Identifiers are variables when bound by an enclosing binder and atoms
otherwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..poly import Polynomial
from . import ast as A
from .ast import Formula, ModalOp

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[!&|()<>\[\],.*^+\-~]|[¬∧∨◇□μν⊤⊥]))"
)
_UNICODE = {"¬": "!", "~": "!", "∧": "&", "∨": "|", "◇": "dia", "□": "box",
            "μ": "mu", "ν": "nu", "⊤": "true", "⊥": "false"}
KEYWORDS = {"true", "false", "dia", "box", "mu", "nu"}


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Token:
    kind: str  # num | id | sym | eof
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        value = m.group(kind)
        pos = m.start(kind)
        if kind == "sym" and value in _UNICODE:
            value = _UNICODE[value]
            kind = "id" if value.isalpha() else "sym"
        out.append(Token(kind, value, pos))
        i = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def _number(tok: Token) -> Fraction:
    return Fraction(tok.value)


class Parser:
    def __init__(self, text: str, logics: Sequence[str]):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.logics = tuple(logics)
        poly_logics = [lg for lg in self.logics if lg in ("graded", "prob")]
        if len(poly_logics) > 1:
            raise ValueError("at most one of graded/prob may be combined with rel")
        self.poly_logic: Optional[str] = poly_logics[0] if poly_logics else None
        self.atom_logic = self.logics[0]
        self.bound: list[str] = []

    # token helpers ---------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.pos, self.text)

    def accept(self, value: str) -> bool:
        if self.tok.kind in ("sym", "id") and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.tok
        if not self.accept(value):
            found = tok.value or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}", tok)
        return tok

    # grammar ---------------------------------------------------------------
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.value!r}")
        return f

    def formula(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = A.or_(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = A.and_(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("!"):
            return A.not_(self.unary())
        if tok.kind == "id" and tok.value in ("dia", "box"):
            self.i += 1
            if "rel" not in self.logics:
                raise self.error(f"modality {tok.value!r} not available in the selected logic", tok)
            return A.modal(ModalOp("rel", tok.value), self.unary())
        if tok.kind == "id" and tok.value in ("mu", "nu"):
            self.i += 1
            name_tok = self.tok
            if name_tok.kind != "id" or name_tok.value in KEYWORDS:
                raise self.error("expected a fixpoint variable", name_tok)
            self.i += 1
            self.expect(".")
            self.bound.append(name_tok.value)
            try:
                body = self.formula()
            finally:
                self.bound.pop()
            return A.binder(tok.value, name_tok.value, body)
        if tok.kind == "sym" and tok.value in ("<", "["):
            return self.poly_modal()
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "id":
            self.i += 1
            if tok.value == "true":
                return A.top()
            if tok.value == "false":
                return A.bot()
            if tok.value in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.value!r}", tok)
            if tok.value in self.bound:
                return A.var(tok.value)
            return A.atom(tok.value, self.atom_logic)
        raise self.error(f"unexpected {tok.value or 'end of input'!r}", tok)

    def poly_modal(self) -> Formula:
        open_tok = self.tok
        self.i += 1
        closer = ">" if open_tok.value == "<" else "]"
        kind = "dia" if open_tok.value == "<" else "box"
        if self.poly_logic is None:
            raise self.error("polynomial modalities need --logic graded or prob", open_tok)
        if self.tok.kind == "id" and self.tok.value in ("inf", "infinity"):
            raise self.error("infinite graded indices are not supported")
        terms = self.poly_terms(closer)
        self.expect(closer)
        nvars = max((len(e) for e, _ in terms), default=0)
        if nvars == 0:
            # threshold sugar: <b> phi stands for <x1 - b> phi
            bound = sum((c for _, c in terms), Fraction(0))
            if bound < 0:
                raise self.error("threshold index must be non-negative", open_tok)
            poly = Polynomial.threshold(bound)
            args = [self.unary()]
        else:
            self.expect("(")
            args = [self.formula()]
            while self.accept(","):
                args.append(self.formula())
            self.expect(")")
            if nvars > len(args):
                raise self.error(f"polynomial uses x{nvars} but only {len(args)} arguments given", open_tok)
            poly = Polynomial(len(args), terms)
        self.check_poly(poly, open_tok)
        return A.modal(ModalOp(self.poly_logic, kind, poly), *args)

    def check_poly(self, poly: Polynomial, tok: Token) -> None:
        if self.poly_logic == "graded":
            for e, c in poly.terms:
                if c.denominator != 1:
                    raise self.error("graded polynomials need integer coefficients", tok)
                if any(e) and c < 0:
                    raise self.error("graded polynomials need non-negative coefficients on non-constant monomials", tok)
            if poly.constant() > 0:
                raise self.error("graded polynomials need a non-positive constant", tok)

    def poly_terms(self, closer: str) -> list[tuple[tuple[int, ...], Fraction]]:
        terms = []
        sign = Fraction(1)
        if self.accept("-"):
            sign = Fraction(-1)
        else:
            self.accept("+")
        while True:
            coeff, exps = self.monomial()
            terms.append((exps, sign * coeff))
            if self.accept("+"):
                sign = Fraction(1)
            elif self.accept("-"):
                sign = Fraction(-1)
            else:
                break
        width = max((len(e) for e, _ in terms), default=0)
        return [(e + (0,) * (width - len(e)), c) for e, c in terms]

    def monomial(self) -> tuple[Fraction, tuple[int, ...]]:
        coeff = Fraction(1)
        exps: dict[int, int] = {}
        while True:
            tok = self.tok
            if tok.kind == "num":
                self.i += 1
                coeff *= _number(tok)
            elif tok.kind == "id" and re.fullmatch(r"[xX]\d+", tok.value):
                self.i += 1
                idx = int(tok.value[1:])
                if idx < 1:
                    raise self.error("polynomial variables start at x1", tok)
                power = 1
                if self.accept("^"):
                    ptok = self.tok
                    if ptok.kind != "num" or not ptok.value.isdigit():
                        raise self.error("expected a natural exponent", ptok)
                    self.i += 1
                    power = int(ptok.value)
                exps[idx] = exps.get(idx, 0) + power
            else:
                raise self.error(f"expected a polynomial term, found {tok.value or 'end of input'!r}", tok)
            if not self.accept("*"):
                break
        width = max(exps, default=0)
        return coeff, tuple(exps.get(i + 1, 0) for i in range(width))


def _check_positivity(f: Formula, text: str) -> None:
    """Reject bound variables occurring under an odd number of negations."""

    def go(g: Formula, neg: bool, scope: dict[str, bool]) -> None:
        if g.kind == A.VAR and g.var in scope and scope[g.var] != neg:
            raise ParseError(f"variable {g.var} occurs negated under its own binder", 0, text)
        if g.kind == A.NOT:
            go(g.body, not neg, scope)
        elif g.kind in A.BINDERS:
            go(g.body, neg, {**scope, g.var: neg})
        else:
            for c in g.children:
                go(c, neg, scope)

    go(f, False, {})


def parse(text: str, logic: str | Sequence[str] = "rel") -> Formula:
    """Parse ``text`` for the given logic (``rel``, ``graded``, ``prob`` or a list for fusion)."""
    logics = (logic,) if isinstance(logic, str) else tuple(logic)
    for lg in logics:
        if lg not in A.LOGICS:
            raise ValueError(f"unknown logic {lg!r}")
    f = Parser(text, logics).parse()
    _check_positivity(f, text)
    return f
