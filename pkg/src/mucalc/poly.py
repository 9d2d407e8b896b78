"""Exact multivariate polynomials used as modal indices.

Coefficients are ``Fraction`` values, exponents are tuples of non-negative
ints of a fixed length (the arity).  A polynomial is kept in canonical form:
monomials sorted by exponent vector, merged, zero coefficients dropped.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Number = int | Fraction


class Polynomial:
    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Iterable[tuple[Sequence[int], Number]]):
        merged: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) < arity:
                exps = exps + (0,) * (arity - len(exps))
            if len(exps) != arity or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for arity {arity}")
            merged[exps] = merged.get(exps, Fraction(0)) + Fraction(coeff)
        self.arity = arity
        self.terms: tuple[tuple[tuple[int, ...], Fraction], ...] = tuple(
            sorted((e, c) for e, c in merged.items() if c != 0)
        )
        self._hash = hash((arity, self.terms))

    # construction helpers -------------------------------------------------
    @classmethod
    def threshold(cls, bound: Number) -> "Polynomial":
        """The unary polynomial x1 - bound."""
        return cls(1, [((1,), 1), ((0,), -Fraction(bound))])

    @classmethod
    def from_dict(cls, arity: int, terms: Mapping[tuple[int, ...], Number]) -> "Polynomial":
        return cls(arity, terms.items())

    # queries --------------------------------------------------------------
    def constant(self) -> Fraction:
        zero = (0,) * self.arity
        for e, c in self.terms:
            if e == zero:
                return c
        return Fraction(0)

    def nonconstant_terms(self):
        return [(e, c) for e, c in self.terms if any(e)]

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def is_linear(self) -> bool:
        return self.degree() <= 1

    def used_vars(self) -> set[int]:
        return {i for e, _ in self.terms for i, k in enumerate(e) if k}

    def is_threshold(self) -> bool:
        """True for polynomials of the shape x1 - b with b >= 0."""
        if self.arity != 1:
            return False
        nc = self.nonconstant_terms()
        return nc == [((1,), Fraction(1))] and self.constant() <= 0

    def linear_coeffs(self) -> list[Fraction]:
        out = [Fraction(0)] * self.arity
        for e, c in self.terms:
            if sum(e) == 1:
                out[e.index(1)] = c
            elif sum(e) > 1:
                raise ValueError("polynomial is not linear")
        return out

    def size(self) -> int:
        """Bits needed to write down all coefficients and exponents in binary."""
        bits = 0
        for e, c in self.terms:
            bits += max(1, abs(c.numerator).bit_length()) + max(1, c.denominator.bit_length())
            bits += sum(max(1, k.bit_length()) for k in e)
        return bits

    # evaluation -----------------------------------------------------------
    def __call__(self, values: Sequence[Number]) -> Fraction:
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} values, got {len(values)}")
        total = Fraction(0)
        for e, c in self.terms:
            term = Fraction(c)
            for v, k in zip(values, e):
                if k:
                    term *= Fraction(v) ** k
            total += term
        return total

    def interval(self, boxes: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
        """Sound enclosure of the range over a box of non-negative intervals."""
        lo_total = Fraction(0)
        hi_total = Fraction(0)
        for e, c in self.terms:
            lo, hi = Fraction(1), Fraction(1)
            for (a, b), k in zip(boxes, e):
                if k:
                    lo *= a ** k
                    hi *= b ** k
            if c >= 0:
                lo_total += c * lo
                hi_total += c * hi
            else:
                lo_total += c * hi
                hi_total += c * lo
        return lo_total, hi_total

    def monotone_on_grid(self, steps: int = 4) -> bool:
        """Sampled check that the polynomial is non-decreasing in each variable on [0,1]^n."""
        import itertools

        grid = [Fraction(i, steps) for i in range(steps + 1)]
        for point in itertools.product(grid, repeat=self.arity):
            base = self(point)
            for i in range(self.arity):
                if point[i] < 1:
                    bumped = list(point)
                    bumped[i] = point[i] + Fraction(1, steps)
                    if self(bumped) < base:
                        return False
        return True

    # identity -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # highest degree first reads more naturally
        ordered = sorted(self.terms, key=lambda t: (-sum(t[0]), [-k for k in t[0]]))
        parts: list[str] = []
        for e, c in ordered:
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(f"x{i + 1}")
                elif k > 1:
                    factors.append(f"x{i + 1}^{k}")
            mag = abs(c)
            if factors:
                body = "*".join(factors) if mag == 1 else f"{_fmt(mag)}*" + "*".join(factors)
            else:
                body = _fmt(mag)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
