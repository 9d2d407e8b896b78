"""From the tracking parity automaton to its deterministic complement.

Pipeline: parity -> Buchi by guessing an even priority threshold, Buchi ->
deterministic parity by Safra trees with Piterman-style dynamic naming
(node names are ranks in creation order, compacted after every step), and
complementation by shifting every priority up by one.

All automata here share a small duck-typed interface: ``initial`` (tuple of
states), ``delta(state, letter)`` (tuple of successors), ``priority(state)``
and ``num_states``.  Acceptance is always max-parity: a run is accepting iff
the largest priority seen infinitely often is even.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import networkx as nx


class BudgetExhausted(RuntimeError):
    """Raised when a lazily built automaton exceeds its state cap."""


# ---------------------------------------------------------------------------
# explicit automata (tests, random instances)


@dataclass
class ExplicitNPA:
    num_states: int
    initial: tuple[int, ...]
    priorities: list[int]
    trans: dict[tuple[int, Hashable], tuple[int, ...]] = field(default_factory=dict)

    def delta(self, s: int, letter: Hashable) -> tuple[int, ...]:
        return self.trans.get((s, letter), ())

    def priority(self, s: int) -> int:
        return self.priorities[s]

    @property
    def max_priority(self) -> int:
        return max(self.priorities, default=0)


def random_npa(rng, max_states: int = 6, letters: Sequence[Hashable] = (0, 1, 2),
               priorities: Sequence[int] = (1, 2, 3, 4), density: float = 0.35) -> ExplicitNPA:
    n = rng.randint(1, max_states)
    prios = [rng.choice(list(priorities)) for _ in range(n)]
    trans = {}
    for s in range(n):
        for a in letters:
            succ = tuple(t for t in range(n) if rng.random() < density)
            if succ:
                trans[(s, a)] = succ
    return ExplicitNPA(n, (0,), prios, trans)


# ---------------------------------------------------------------------------
# parity -> Buchi


class BuchiAutomaton:
    """Threshold-guessing Buchi automaton for a parity automaton.

    State ``s * phases + j`` pairs NPA state ``s`` with phase ``j``: phase 0
    has not yet committed, phase ``j >= 1`` has committed to the even threshold
    ``thresholds[j-1]``: from then on no larger priority may be visited and the
    run is accepting when it visits the threshold itself.
    """

    def __init__(self, npa):
        self.npa = npa
        prios = {npa.priority(s) for s in range(npa.num_states)}
        self.thresholds = sorted(p for p in prios if p % 2 == 0)
        self.phases = 1 + len(self.thresholds)
        self.num_states = npa.num_states * self.phases
        init = []
        for s in npa.initial:
            init.extend(self._entries(s))
        self.initial = tuple(sorted(set(init)))
        self._memo: dict[tuple[int, Hashable], tuple[int, ...]] = {}

    def _entries(self, s: int) -> list[int]:
        p = self.npa.priority(s)
        out = [s * self.phases]
        out.extend(s * self.phases + j + 1 for j, t in enumerate(self.thresholds) if p <= t)
        return out

    def project(self, b: int) -> int:
        return b // self.phases

    def accepting(self, b: int) -> bool:
        s, j = divmod(b, self.phases)
        return j > 0 and self.npa.priority(s) == self.thresholds[j - 1]

    def delta(self, b: int, letter: Hashable) -> tuple[int, ...]:
        key = (b, letter)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        s, j = divmod(b, self.phases)
        out: list[int] = []
        for t in self.npa.delta(s, letter):
            if j == 0:
                out.extend(self._entries(t))
            elif self.npa.priority(t) <= self.thresholds[j - 1]:
                out.append(t * self.phases + j)
        res = tuple(sorted(set(out)))
        self._memo[key] = res
        return res


def parity_to_buchi(npa) -> BuchiAutomaton:
    return BuchiAutomaton(npa)


# ---------------------------------------------------------------------------
# Safra trees

# A tree is a tuple of nodes in creation order; node i is (parent, label)
# with parent -1 for the root (always node 0).  Names are positions, so the
# renaming after each step is implicit in the compaction.
Tree = tuple[tuple[int, frozenset[int]], ...]


@dataclass(frozen=True)
class SafraStep:
    tree: Tree
    removed: int | None  # smallest 1-based name of an old node that vanished
    marked: int | None  # smallest 1-based name of a node flashed green


def safra_step(nba: BuchiAutomaton, tree: Tree, letter: Hashable) -> SafraStep:
    n_old = len(tree)
    parents = [p for p, _ in tree]
    labels: list[frozenset[int]] = []
    for _, lab in tree:
        out: set[int] = set()
        for b in lab:
            out.update(nba.delta(b, letter))
        labels.append(frozenset(out))
    # spawn a youngest child holding the accepting states of every node
    for i in range(n_old):
        acc = frozenset(b for b in labels[i] if nba.accepting(b))
        if acc:
            parents.append(i)
            labels.append(acc)
    m = len(labels)
    children: list[list[int]] = [[] for _ in range(m)]
    for i in range(1, m):
        children[parents[i]].append(i)
    # horizontal merge: a state stays only in the oldest branch holding it
    for i in range(m):
        p = parents[i]
        if p < 0:
            continue
        lab = labels[i] & labels[p]
        for sib in children[p]:
            if sib >= i:
                break
            lab = lab - labels[sib]
        labels[i] = lab
    alive = [bool(labels[i]) for i in range(m)]
    # vertical merge: a node covered by its children flashes and loses them
    marked = None
    for i in range(m):
        if not alive[i]:
            continue
        kids = [c for c in children[i] if alive[c]]
        if kids and frozenset().union(*(labels[c] for c in kids)) == labels[i]:
            if marked is None:
                marked = i + 1
            stack = list(kids)
            while stack:
                c = stack.pop()
                alive[c] = False
                stack.extend(children[c])
    removed = next((i + 1 for i in range(n_old) if not alive[i]), None)
    rename = {}
    nodes = []
    for i in range(m):
        if alive[i]:
            rename[i] = len(nodes)
            nodes.append((rename[parents[i]] if parents[i] >= 0 else -1, labels[i]))
    return SafraStep(tuple(nodes), removed, marked)


class TrackingDPA:
    """Lazily built deterministic parity automaton (optionally complemented).

    A DPA state is a Safra tree together with the parity event of the step
    that produced it, so priorities live on states.  ``label(q)`` projects the
    root of the tree to automaton states of the underlying NPA.
    """

    def __init__(self, nba: BuchiAutomaton, max_states: int | None = None):
        self.nba = nba
        self.n = max(1, nba.num_states)
        self.max_states = max_states
        self.shift = 0
        self._trees: list[Tree] = []
        self._base: list[int] = []
        self._ids: dict[tuple[Tree, int], int] = {}
        self._trans: dict[tuple[int, Hashable], int] = {}
        self._labels: list[frozenset[int]] = []
        root = frozenset(nba.initial)
        tree: Tree = ((-1, root),) if root else ()
        self.initial_state = self._intern(tree, self.neutral)

    # priorities: min-parity events mapped to max-parity state priorities
    @property
    def neutral(self) -> int:
        return 1

    def _event_priority(self, step: SafraStep) -> int:
        a, r = step.marked, step.removed
        if a is not None and (r is None or a < r):
            pi = 2 * a
        elif r is not None:
            pi = 2 * r - 1
        else:
            return self.neutral
        return 2 * self.n + 2 - pi

    @property
    def max_priority(self) -> int:
        return 2 * self.n + 1 + self.shift

    def _intern(self, tree: Tree, prio: int) -> int:
        key = (tree, prio)
        q = self._ids.get(key)
        if q is None:
            if self.max_states is not None and len(self._trees) >= self.max_states:
                raise BudgetExhausted(f"deterministic automaton exceeded {self.max_states} states")
            q = len(self._trees)
            self._ids[key] = q
            self._trees.append(tree)
            self._base.append(prio)
            root = tree[0][1] if tree else frozenset()
            self._labels.append(frozenset(self.nba.project(b) for b in root))
        return q

    # public interface ---------------------------------------------------
    @property
    def initial(self) -> tuple[int, ...]:
        return (self.initial_state,)

    @property
    def num_states(self) -> int:
        return len(self._trees)

    def priority(self, q: int) -> int:
        return self._base[q] + self.shift

    def label(self, q: int) -> frozenset[int]:
        return self._labels[q]

    def tree(self, q: int) -> Tree:
        return self._trees[q]

    def step(self, q: int, letter: Hashable) -> int:
        key = (q, letter)
        hit = self._trans.get(key)
        if hit is None:
            st = safra_step(self.nba, self._trees[q], letter)
            hit = self._intern(st.tree, self._event_priority(st))
            self._trans[key] = hit
        return hit

    def delta(self, q: int, letter: Hashable) -> tuple[int, ...]:
        return (self.step(q, letter),)

    def complement(self) -> "TrackingDPA":
        return complement(self)

    def dump(self, states: Iterable[int] | None = None) -> str:
        qs = range(self.num_states) if states is None else states
        lines = [f"dpa states={self.num_states} initial={self.initial_state} shift={self.shift}"]
        for q in qs:
            tree = " ".join(f"[{p}:{','.join(map(str, sorted(lab)))}]" for p, lab in self._trees[q])
            lines.append(f"{q} prio={self.priority(q)} label={{{','.join(map(str, sorted(self.label(q))))}}} tree={tree or '-'}")
        return "\n".join(lines)


def determinize(nba: BuchiAutomaton, max_states: int | None = None) -> TrackingDPA:
    return TrackingDPA(nba, max_states)


def complement(dpa: TrackingDPA) -> TrackingDPA:
    """A view on the same state space with every priority raised by one."""
    view = object.__new__(TrackingDPA)
    view.__dict__.update(dpa.__dict__)
    view.shift = dpa.shift + 1
    return view


def co_determinize(npa, max_states: int | None = None) -> TrackingDPA:
    """The deterministic automaton for the complement of ``npa``'s language."""
    return complement(determinize(parity_to_buchi(npa), max_states))


# ---------------------------------------------------------------------------
# lasso oracles


def _max_cycle_parity_even(graph: nx.DiGraph, prio: dict, sources: Iterable) -> bool:
    """Is there a cycle reachable from ``sources`` whose largest priority is even?"""
    reach = set()
    for s in sources:
        if s in graph and s not in reach:
            reach |= nx.descendants(graph, s) | {s}
    sub = graph.subgraph(reach)
    for p in sorted({prio[v] for v in reach if prio[v] % 2 == 0}):
        low = sub.subgraph([v for v in reach if prio[v] <= p])
        for comp in nx.strongly_connected_components(low):
            if not any(prio[v] == p for v in comp):
                continue
            if len(comp) > 1 or any(low.has_edge(v, v) for v in comp):
                return True
    return False


def npa_accepts_lasso(npa, u: Sequence[Hashable], v: Sequence[Hashable]) -> bool:
    """Exact acceptance of u v^omega via the product of the lasso with the automaton."""
    if not v:
        raise ValueError("lasso period must be non-empty")
    word = list(u) + list(v)
    loop = len(u)
    g = nx.DiGraph()
    prio = {}
    start = [(s, 0) for s in npa.initial]
    stack = list(start)
    seen = set(start)
    while stack:
        node = stack.pop()
        s, i = node
        prio[node] = npa.priority(s)
        g.add_node(node)
        j = i + 1 if i + 1 < len(word) else loop
        for t in npa.delta(s, word[i]):
            nxt = (t, j)
            g.add_edge(node, nxt)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return _max_cycle_parity_even(g, prio, start)


def dpa_accepts_lasso(dpa, u: Sequence[Hashable], v: Sequence[Hashable]) -> bool:
    """Run a deterministic automaton on u v^omega until the period state repeats."""
    if not v:
        raise ValueError("lasso period must be non-empty")
    q = dpa.initial[0]
    for a in u:
        q = dpa.delta(q, a)[0]
    seen: dict[int, int] = {}
    history: list[int] = []  # max priority over each pass of v
    while q not in seen:
        seen[q] = len(history)
        best = dpa.priority(q)
        for a in v:
            q = dpa.delta(q, a)[0]
            best = max(best, dpa.priority(q))
        history.append(best)
    return max(history[seen[q]:]) % 2 == 0


def label_equation_holds(table, label: frozenset[int], letter, new_label: frozenset[int]) -> bool:
    """Check how labels evolve, computed straight from the formulae.

    Under a choice the new label collects every formula's tracked successors;
    under a selection it consists of the selected arguments of modal literals
    present in the label.
    """
    from .formula import AND, BOT, MODAL, MU, NU, OR, TOP, unfold

    fs = table.formulas
    idx = table.index
    expected: set[int] = set()
    if letter.kind == "choice":
        sides = dict(letter.items)
        for i in label:
            f = fs[i]
            if f.kind == OR:
                expected.add(idx[f.children[sides[i]]])
            elif f.kind == AND:
                expected.update(idx[c] for c in f.children)
            elif f.kind in (MU, NU):
                expected.add(idx[unfold(f)])
            elif f.kind == MODAL:
                expected.add(i)
            else:
                assert f.kind in (TOP, BOT)
    else:
        for i, j in letter.items:
            if i in label:
                expected.add(idx[fs[i].children[j]])
    return frozenset(expected) == new_label
