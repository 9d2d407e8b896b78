"""Parity games: Zielonka's algorithm with strategies, oracles, and game builders.

Conventions: player 0 is the existential player, player 1 the universal one;
the largest priority seen infinitely often decides a play (even: player 0
wins); a player who must move from a node without moves loses.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from .coalgebra import Coalgebra, modal_holds
from .formula import ast as A
from .formula.closure import ClosureTable, unfold

EXISTS, FORALL = 0, 1


@dataclass
class ParityGame:
    owner: list[int] = field(default_factory=list)
    priority: list[int] = field(default_factory=list)
    moves: list[list[int]] = field(default_factory=list)
    names: list[Hashable] = field(default_factory=list)
    initial: Optional[int] = None
    _ids: dict = field(default_factory=dict, repr=False)

    def add(self, name: Hashable, owner: int, priority: int) -> int:
        v = self._ids.get(name)
        if v is None:
            v = len(self.owner)
            self._ids[name] = v
            self.owner.append(owner)
            self.priority.append(priority)
            self.moves.append([])
            self.names.append(name)
        return v

    def node(self, name: Hashable) -> int:
        return self._ids[name]

    def has(self, name: Hashable) -> bool:
        return name in self._ids

    def edge(self, u: int, v: int) -> None:
        if v not in self.moves[u]:
            self.moves[u].append(v)

    def __len__(self) -> int:
        return len(self.owner)

    def check(self) -> None:
        n = len(self)
        for u, ms in enumerate(self.moves):
            for v in ms:
                if not 0 <= v < n:
                    raise ValueError(f"move {u}->{v} leaves the game")


@dataclass
class Solution:
    win: tuple[frozenset[int], frozenset[int]]
    strategy: tuple[dict[int, int], dict[int, int]]

    def winner(self, v: int) -> int:
        return EXISTS if v in self.win[0] else FORALL


# Zielonka --------------------------------------------------------------------------


def _attractor(g: ParityGame, player: int, target: set[int], domain: set[int],
               preds: list[list[int]]) -> tuple[set[int], dict[int, int]]:
    attr = set(target)
    strat: dict[int, int] = {}
    count = {v: sum(1 for w in g.moves[v] if w in domain) for v in domain}
    queue = list(target)
    while queue:
        w = queue.pop()
        for v in preds[w]:
            if v not in domain or v in attr:
                continue
            if g.owner[v] == player:
                attr.add(v)
                strat[v] = w
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def zielonka(g: ParityGame) -> Solution:
    """Winning regions and positional winning strategies for both players."""
    g.check()
    n = len(g)
    preds: list[list[int]] = [[] for _ in range(n)]
    for u, ms in enumerate(g.moves):
        for v in ms:
            preds[v].append(u)
    everything = set(range(n))
    # dead ends: the owner loses, so they seed the opponent's attractor
    stuck = [{v for v in everything if not g.moves[v] and g.owner[v] == p} for p in (0, 1)]
    win: list[set[int]] = [set(), set()]
    strat: list[dict[int, int]] = [{}, {}]
    rest = set(everything)
    for p in (0, 1):
        seed = stuck[1 - p] & rest
        if seed:
            attr, st = _attractor(g, p, seed, rest, preds)
            win[p] |= attr
            strat[p].update(st)
            rest -= attr
    w0, w1, s0, s1 = _zielonka(g, rest, preds)
    win[0] |= w0
    win[1] |= w1
    strat[0].update(s0)
    strat[1].update(s1)
    return Solution((frozenset(win[0]), frozenset(win[1])), (strat[0], strat[1]))


def _zielonka(g: ParityGame, nodes: set[int], preds) -> tuple[set[int], set[int], dict, dict]:
    if not nodes:
        return set(), set(), {}, {}
    d = max(g.priority[v] for v in nodes)
    i = d % 2
    top = {v for v in nodes if g.priority[v] == d}
    attr, attr_strat = _attractor(g, i, top, nodes, preds)
    sub = _zielonka(g, nodes - attr, preds)
    win_sub = [sub[0], sub[1]]
    strat_sub = [sub[2], sub[3]]
    if not win_sub[1 - i]:
        win_i = set(nodes)
        st = dict(strat_sub[i])
        st.update(attr_strat)
        for v in top:
            if g.owner[v] == i:
                st[v] = next(w for w in g.moves[v] if w in nodes)
        out_w = [set(), set()]
        out_s: list[dict] = [{}, {}]
        out_w[i] = win_i
        out_s[i] = st
        return out_w[0], out_w[1], out_s[0], out_s[1]
    opp = 1 - i
    battr, bstrat = _attractor(g, opp, win_sub[opp], nodes, preds)
    sub2 = _zielonka(g, nodes - battr, preds)
    w2 = [sub2[0], sub2[1]]
    s2 = [sub2[2], sub2[3]]
    out_w = [set(), set()]
    out_s = [{}, {}]
    out_w[opp] = w2[opp] | battr
    st = dict(s2[opp])
    st.update({v: w for v, w in strat_sub[opp].items() if v in win_sub[opp]})
    st.update(bstrat)
    out_s[opp] = st
    out_w[i] = w2[i]
    out_s[i] = dict(s2[i])
    return out_w[0], out_w[1], out_s[0], out_s[1]


# independent oracles ------------------------------------------------------------------


def _cpre(g: ParityGame, target: set[int]) -> set[int]:
    out = set()
    for v in range(len(g)):
        ms = g.moves[v]
        if g.owner[v] == EXISTS:
            if any(w in target for w in ms):
                out.add(v)
        elif all(w in target for w in ms):
            out.add(v)
    return out


def solve_nested(g: ParityGame) -> frozenset[int]:
    """Existential winning region as a nested fixpoint over the controllable predecessor.

    W = eta_d Z_d ... eta_0 Z_0. union_i (P_i cap Cpre(Z_i)), with nu for even
    and mu for odd priorities.
    """
    prios = sorted(set(g.priority)) or [0]
    d = max(prios)
    by_prio = {p: {v for v in range(len(g)) if g.priority[v] == p} for p in range(d + 1)}
    everything = set(range(len(g)))
    env: list[set[int]] = [set() for _ in range(d + 1)]

    def level(p: int) -> set[int]:
        if p < 0:
            out: set[int] = set()
            for i in range(d + 1):
                if by_prio[i]:
                    out |= by_prio[i] & _cpre(g, env[i])
            return out
        cur = set(everything) if p % 2 == 0 else set()
        while True:
            env[p] = cur
            nxt = level(p - 1)
            if nxt == cur:
                return cur
            cur = nxt

    return frozenset(level(d))


def strategy_wins(g: ParityGame, player: int, region: Iterable[int], strat: dict[int, int]) -> bool:
    """Check a positional strategy: from ``region`` every conform play is won by ``player``.

    The player's moves are fixed by ``strat``; all opponent moves stay
    possible.  Fails if the region is left, if the player is stuck inside it,
    or if some reachable cycle has a maximal priority of the wrong parity.
    """
    reg = set(region)
    h = nx.DiGraph()
    h.add_nodes_from(reg)
    for v in reg:
        if g.owner[v] == player:
            if not g.moves[v]:
                return False
            w = strat.get(v)
            if w is None or w not in g.moves[v] or w not in reg:
                return False
            h.add_edge(v, w)
        else:
            for w in g.moves[v]:
                if w not in reg:
                    return False
                h.add_edge(v, w)
    bad = 1 - player
    for p in sorted({g.priority[v] for v in reg if g.priority[v] % 2 == bad}):
        low = h.subgraph([v for v in reg if g.priority[v] <= p])
        for comp in nx.strongly_connected_components(low):
            if not any(g.priority[v] == p for v in comp):
                continue
            if len(comp) > 1 or any(low.has_edge(v, v) for v in comp):
                return False
    return True


def brute_force_solve(g: ParityGame, limit: int = 200000) -> frozenset[int]:
    """Existential winning region by trying every positional existential strategy.

    Positional strategies suffice by history-free determinacy.  Only for tiny games.
    """
    ex = [v for v in range(len(g)) if g.owner[v] == EXISTS and g.moves[v]]
    total = 1
    for v in ex:
        total *= len(g.moves[v])
    if total > limit:
        raise ValueError("too many strategies for brute force")
    won: set[int] = set()
    for picks in itertools.product(*(g.moves[v] for v in ex)):
        strat = dict(zip(ex, picks))
        h = nx.DiGraph()
        h.add_nodes_from(range(len(g)))
        for v in range(len(g)):
            if g.owner[v] == EXISTS:
                if v in strat:
                    h.add_edge(v, strat[v])
            else:
                h.add_edges_from((v, w) for w in g.moves[v])
        losing = {v for v in range(len(g)) if g.owner[v] == EXISTS and not g.moves[v]}
        for p in sorted({g.priority[v] for v in range(len(g)) if g.priority[v] % 2 == 1}):
            low = h.subgraph([v for v in range(len(g)) if g.priority[v] <= p])
            for comp in nx.strongly_connected_components(low):
                if any(g.priority[v] == p for v in comp) and (
                        len(comp) > 1 or any(low.has_edge(v, v) for v in comp)):
                    losing |= comp
        rev = h.reverse(copy=False)
        bad = set(losing)
        for v in losing:
            bad |= nx.descendants(rev, v)
        won |= set(range(len(g))) - bad
    return frozenset(won)


def random_game(rng, n: int, max_prio: int = 4, max_out: int = 3, dead_ends: float = 0.05) -> ParityGame:
    g = ParityGame()
    for v in range(n):
        g.add(v, rng.randrange(2), rng.randint(0, max_prio))
    for v in range(n):
        if rng.random() < dead_ends:
            continue
        for _ in range(rng.randint(1, max_out)):
            g.edge(v, rng.randrange(n))
    return g


def simulate_plays(g: ParityGame, player: int, region: Iterable[int], strat: dict[int, int], rng,
                   plays: int = 1000, length: int = 60) -> bool:
    """Random opponent plays against ``strat``: a play that falls into a repeated
    node is judged by the cycle it closes (both sides positional there)."""
    reg = sorted(region)
    if not reg:
        return True
    for _ in range(plays):
        v = rng.choice(reg)
        seen: dict[tuple[int, ...], int] = {}
        path = [v]
        choice_at: dict[int, int] = {}
        for _ in range(length):
            if not g.moves[v]:
                if g.owner[v] == player:
                    return False
                break
            if g.owner[v] == player:
                v = strat[v]
            else:
                w = choice_at.get(v)
                if w is None:
                    w = rng.choice(g.moves[v])
                    choice_at[v] = w
                v = w
            if v in path:
                cyc = path[path.index(v):]
                if max(g.priority[u] for u in cyc) % 2 != player:
                    return False
                break
            path.append(v)
    return True


# model checking games --------------------------------------------------------------


def _subsets(items: Sequence[int]) -> list[frozenset[int]]:
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def build_mc_game(model: Coalgebra, table: ClosureTable, max_nodes: int = 200000) -> ParityGame:
    """Model checking game over the closure: nodes (x, i) plus modal challenge nodes.

    Fixpoint literals get priority alpha - 1 (odd for mu, even for nu), all
    other nodes 0.  From a modal node the existential player proposes one set
    per argument (any tuple accepted by the lifting); the universal player
    then challenges one argument at one state.  A true atom leads to a node
    where the universal player is stuck, a false one leaves the existential
    player stuck.
    """
    g = ParityGame()
    fs = table.formulas
    idx = table.index
    states = list(model.states)
    subsets = _subsets(states)
    win_sink = g.add(("sink", "win"), FORALL, 0)
    for x in states:
        for i, f in enumerate(fs):
            k = f.kind
            owner = FORALL if k in (A.AND, A.TOP) else EXISTS
            prio = table.alpha[i] - 1 if k in A.BINDERS else 0
            g.add((x, i), owner, prio)
    for x in states:
        for i, f in enumerate(fs):
            v = g.node((x, i))
            k = f.kind
            if k in (A.AND, A.OR):
                for c in f.children:
                    g.edge(v, g.node((x, idx[c])))
            elif k in A.BINDERS:
                g.edge(v, g.node((x, idx[unfold(f)])))
            elif k == A.MODAL:
                if f.op.is_atom:
                    if modal_holds(model, x, f.op, []):
                        g.edge(v, win_sink)
                    continue
                args = [idx[c] for c in f.children]
                for tup in itertools.product(subsets, repeat=len(args)):
                    if not modal_holds(model, x, f.op, tup):
                        continue
                    c = g.add(("pick", tup, tuple(args)), FORALL, 0)
                    g.edge(v, c)
                    if not g.moves[c]:
                        for d, a in zip(tup, args):
                            for y in sorted(d):
                                g.edge(c, g.node((y, a)))
                    if len(g) > max_nodes:
                        raise ValueError("model checking game exceeds the node cap")
    return g


# fixpoint games ----------------------------------------------------------------------


def build_fixpoint_game(universe: Sequence[Hashable], depth: int,
                        candidates: Callable[[Hashable], Iterable[tuple[frozenset, ...]]]) -> ParityGame:
    """Game for eta_depth X_depth ... eta_1 X_1. f(X) (mu at odd, nu at even levels).

    ``candidates(q)`` lists tuples X = (X_1..X_depth) with q in f(X); for a
    monotone f it suffices to list the minimal ones.  The existential player
    picks a tuple at q, the universal player picks a level l and a node q' in
    X_l, passing through an intermediate node of priority l.
    """
    g = ParityGame()
    for q in universe:
        g.add(("q", q), EXISTS, 0)
    for q in universe:
        v = g.node(("q", q))
        for tup in candidates(q):
            if len(tup) != depth:
                raise ValueError("candidate tuple has the wrong length")
            t = g.add(("t", tup), FORALL, 0)
            g.edge(v, t)
            if g.moves[t]:
                continue
            for l, xs in enumerate(tup, start=1):
                for q2 in sorted(xs, key=repr):
                    m = g.add(("m", l, q2), EXISTS, l)
                    g.edge(t, m)
                    g.edge(m, g.node(("q", q2)))
    return g


def fixpoint_game_winners(universe: Sequence[Hashable], depth: int, candidates) -> frozenset:
    g = build_fixpoint_game(universe, depth, candidates)
    sol = zielonka(g)
    return frozenset(q for q in universe if g.node(("q", q)) in sol.win[0])
