"""Branch-and-prune search for probabilistic pairs with nonlinear polynomials.

The unknowns are the weights of a fixed support.  Boxes in weight space are
split until each either violates some constraint on its whole range (pruned,
proved by exact interval arithmetic) or yields a point that satisfies every
constraint exactly.  Boxes narrower than epsilon that can be neither pruned
nor certified make the search inconclusive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..poly import Polynomial


@dataclass(frozen=True)
class PolyConstraint:
    """``poly(masses) > 0`` (strict) or ``poly(1 - masses) <= 0`` (box form).

    ``members[i]`` lists the support positions whose weight counts towards
    the i-th argument mass.
    """

    poly: Polynomial
    members: tuple[tuple[int, ...], ...]
    diamond: bool

    def masses(self, point: Sequence[Fraction]) -> list[Fraction]:
        return [sum((point[j] for j in m), Fraction(0)) for m in self.members]

    def holds(self, point: Sequence[Fraction]) -> bool:
        ms = self.masses(point)
        if self.diamond:
            return self.poly(ms) > 0
        return self.poly([1 - x for x in ms]) <= 0

    def possible(self, box: Sequence[tuple[Fraction, Fraction]]) -> bool:
        """False only if the constraint fails everywhere on the box."""
        ranges = []
        for m in self.members:
            lo = sum((box[j][0] for j in m), Fraction(0))
            hi = sum((box[j][1] for j in m), Fraction(0))
            ranges.append((min(lo, Fraction(1)), min(hi, Fraction(1))))
        if self.diamond:
            return self.poly.interval(ranges)[1] > 0
        comp = [(1 - hi, 1 - lo) for lo, hi in ranges]
        return self.poly.interval(comp)[0] <= 0


@dataclass
class SearchResult:
    point: Optional[list[Fraction]]
    exhausted: bool  # True when every box was pruned: the system is infeasible
    boxes: int


def simplex_search(dim: int, constraints: Sequence[PolyConstraint], epsilon: Fraction,
                   max_boxes: int = 4000) -> SearchResult:
    """Search weights w_0..w_{dim-1} >= 0 with sum 1 satisfying all constraints.

    The last weight is determined by the others; boxes range over the first
    dim-1 coordinates in [0,1].
    """
    free = dim - 1

    def full(point: Sequence[Fraction]) -> list[Fraction]:
        return list(point) + [1 - sum(point, Fraction(0))]

    def check(point: Sequence[Fraction]) -> Optional[list[Fraction]]:
        p = full(point)
        if p[-1] < 0:
            return None
        return p if all(c.holds(p) for c in constraints) else None

    def weight_box(box):
        lo_sum = sum((lo for lo, _ in box), Fraction(0))
        hi_sum = sum((hi for _, hi in box), Fraction(0))
        return list(box) + [(max(Fraction(0), 1 - hi_sum), 1 - lo_sum)]

    # cheap candidates first: vertices and the barycentre
    candidates = []
    for i in range(dim):
        candidates.append([Fraction(1) if j == i else Fraction(0) for j in range(free)])
    candidates.append([Fraction(1, dim)] * free)
    for cand in candidates:
        hit = check(cand)
        if hit is not None:
            return SearchResult(hit, False, 0)
    stack = [[(Fraction(0), Fraction(1))] * free]
    unresolved = False
    boxes = 0
    while stack:
        box = stack.pop()
        boxes += 1
        if boxes > max_boxes:
            return SearchResult(None, False, boxes)
        if sum((lo for lo, _ in box), Fraction(0)) > 1:
            continue
        wb = weight_box(box)
        if not all(c.possible(wb) for c in constraints):
            continue
        mid = [(lo + hi) / 2 for lo, hi in box]
        for cand in (mid, [lo for lo, _ in box], [hi for _, hi in box]):
            hit = check(cand)
            if hit is not None:
                return SearchResult(hit, False, boxes)
        widths = [hi - lo for lo, hi in box]
        if not widths or max(widths) < epsilon:
            unresolved = True
            continue
        k = max(range(free), key=lambda i: widths[i])
        lo, hi = box[k]
        m = (lo + hi) / 2
        left = list(box)
        right = list(box)
        left[k] = (lo, m)
        right[k] = (m, hi)
        stack.append(right)
        stack.append(left)
    return SearchResult(None, not unresolved, boxes)
