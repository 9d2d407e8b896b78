"""Global caching: expand the co-determinized tracking automaton on the fly and
decide satisfiability by nested fixpoints of one-step propagation.

Every expanded node q has a label (a set of closure indices), a priority, and
its successors under all relevant choices and selections.  ``f_Q`` keeps the
nodes from which the existential player can make a propagational step and a
one-step satisfiable modal step into a given vector of node sets; ``g_Q``
is its dual for the universal player.  Their nested fixpoints decide the
satisfiability game restricted to the expanded part.
"""
from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import networkx as nx

from .config import EngineOptions
from .determinize import BudgetExhausted, co_determinize, label_equation_holds
from .formula import BOT, MODAL, Formula, fl_closure, normalize, parse
from .onestep import Literal, OneStepPair, Unresolved, solve_pair
from .tracking import Letter, TrackingNPA

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"

Vector = list[frozenset[int]]


class LabelEquationError(AssertionError):
    pass


# generic nested fixpoints ---------------------------------------------------------------


def nested_fixpoint(universe: frozenset, binders: Sequence[str], f: Callable[[Vector], frozenset],
                    counter: Optional[list[int]] = None) -> frozenset:
    """eta_m X_m ... eta_1 X_1. f(X) by naive nested Kleene iteration.

    ``binders[i]`` is ``"mu"`` or ``"nu"`` for level i+1 (innermost first).
    """
    m = len(binders)
    env: Vector = [frozenset()] * m

    def fix(i: int) -> frozenset:
        if i < 0:
            if counter is not None:
                counter[0] += 1
            return f(env)
        cur = frozenset() if binders[i] == "mu" else universe
        while True:
            env[i] = cur
            nxt = fix(i - 1)
            if nxt == cur:
                return cur
            cur = nxt

    return fix(m - 1)


@dataclass
class StageLog:
    """For each node of the fixpoint: the argument vector that justifies it and
    its stage at every mu level (outermost first)."""

    binders: tuple[str, ...]
    value: frozenset
    witness: dict = field(default_factory=dict)
    rank: dict = field(default_factory=dict)

    def mu_levels(self) -> list[int]:
        return [i for i in reversed(range(len(self.binders))) if self.binders[i] == "mu"]

    def rank_from(self, q, level: int) -> tuple[int, ...]:
        """Stages at the mu levels >= ``level`` (outermost first)."""
        return tuple(r for i, r in zip(self.mu_levels(), self.rank[q]) if i >= level)


def nested_fixpoint_stages(universe: frozenset, binders: Sequence[str],
                           f: Callable[[Vector], frozenset]) -> StageLog:
    """The fixpoint together with a justifying vector per node.

    At a nu level the final value is fixed and the recursion continues; at a
    mu level the approximants are replayed and every node is handled, with
    the previous approximant in place, in the round where it first appears.
    At the bottom each node q in its round satisfies q in f(vector).
    """
    m = len(binders)
    env: Vector = [frozenset()] * m
    log = StageLog(tuple(binders), frozenset())

    def fix(i: int) -> frozenset:
        if i < 0:
            return f(env)
        cur = frozenset() if binders[i] == "mu" else universe
        while True:
            env[i] = cur
            nxt = fix(i - 1)
            if nxt == cur:
                return cur
            cur = nxt

    def extract(i: int, todo: frozenset, stages: tuple[int, ...]) -> None:
        if not todo:
            return
        if i < 0:
            vec = tuple(env)
            for q in todo:
                log.witness[q] = vec
                log.rank[q] = stages
            return
        if binders[i] == "nu":
            val = fix(i)
            env[i] = val
            extract(i - 1, todo & val, stages)
            return
        cur: frozenset = frozenset()
        step = 0
        while True:
            env[i] = cur
            nxt = fix(i - 1)
            fresh = (nxt - cur) & todo
            if fresh:
                env[i] = cur
                extract(i - 1, fresh, stages + (step,))
            if nxt == cur:
                break
            cur = nxt
            step += 1
        env[i] = cur

    top = fix(m - 1)
    log.value = top
    extract(m - 1, top, ())
    return log


# solver state ---------------------------------------------------------------------


@dataclass
class Stats:
    closure_size: int = 0
    alternation_depth: int = 0
    expanded: int = 0
    dpa_states: int = 0
    backend_calls: int = 0
    backend_cache_hits: int = 0
    sweeps: int = 0
    peak_sweeps: int = 0
    solves: int = 0
    label_checks: int = 0
    unresolved: int = 0
    wall_time: float = 0.0

    def lines(self) -> list[str]:
        return [f"{k} {v:.3f}" if isinstance(v, float) else f"{k} {v}" for k, v in self.__dict__.items()]


class SolverState:
    def __init__(self, chi: Formula, logics: Sequence[str], options: Optional[EngineOptions] = None):
        self.options = options or EngineOptions()
        self.chi = chi
        self.logics = tuple(logics)
        self.table = fl_closure(chi)
        self.npa = TrackingNPA(self.table)
        self.dpa = co_determinize(self.npa, self.options.max_dpa_states)
        self.q_init = self.dpa.initial_state
        self.stats = Stats(closure_size=self.table.n0, alternation_depth=self.table.k)
        self.Q: list[int] = []
        self.in_Q: set[int] = set()
        self._fifo: deque[int] = deque([self.q_init])
        self._heap: list[tuple[int, int, int]] = [(1, 0, self.q_init)]
        self._pushes = 1
        self.in_U: set[int] = {self.q_init}
        self.choice_succ: dict[int, list[tuple[Letter, int]]] = {}
        self.sel_succ: dict[int, list[tuple[Letter, int]]] = {}
        self.poisoned: set[int] = set()
        self._gamma: dict[frozenset[int], tuple[Literal, ...]] = {}
        self._oss: dict[tuple[frozenset[int], frozenset[frozenset[int]]], object] = {}
        fs = self.table.formulas
        self._bot = {i for i, f in enumerate(fs) if f.kind == BOT}
        self._modal = {i for i, f in enumerate(fs) if f.kind == MODAL}
        self._targets: dict[int, tuple[int, ...]] = {}
        self._sel_labels: dict[int, tuple[tuple[int, frozenset[int]], ...]] = {}

    # basic accessors -------------------------------------------------------
    def label(self, q: int) -> frozenset[int]:
        return self.dpa.label(q)

    def priority(self, q: int) -> int:
        return self.dpa.priority(q)

    def modal_part(self, q: int) -> frozenset[int]:
        return self.label(q) & self._modal

    @property
    def frontier(self) -> set[int]:
        return self.in_U

    def successors(self, q: int) -> list[int]:
        return [t for _, t in self.choice_succ[q]] + [t for _, t in self.sel_succ[q]]

    # expansion -------------------------------------------------------------
    def pop(self) -> int:
        if self.options.expansion_order == "fifo":
            q = self._fifo.popleft()
        else:
            _, _, q = heapq.heappop(self._heap)
        self.in_U.discard(q)
        return q

    def push(self, q: int) -> None:
        if q in self.in_Q or q in self.in_U:
            return
        self.in_U.add(q)
        if self.options.expansion_order == "fifo":
            self._fifo.append(q)
        else:
            heapq.heappush(self._heap, (len(self.label(q)), self._pushes, q))
            self._pushes += 1

    def expand(self, q: int) -> None:
        if q in self.in_Q:
            raise ValueError(f"node {q} already expanded")
        self.in_U.discard(q)
        self.Q.append(q)
        self.in_Q.add(q)
        lab = self.label(q)
        choices, sels = self.npa.relevant_letters(lab)
        cs, ss = [], []
        for letters, out in ((choices, cs), (sels, ss)):
            for a in letters:
                t = self.dpa.step(q, a)
                if self.options.check_labels:
                    self.stats.label_checks += 1
                    if not label_equation_holds(self.table, lab, a, self.label(t)):
                        raise LabelEquationError(f"label equation fails at node {q} under {a.text()}")
                out.append((a, t))
                self.push(t)
        self.choice_succ[q] = cs
        self.sel_succ[q] = ss
        # flat copies for the propagation hot loop
        self._targets[q] = tuple(sorted({t for _, t in cs}))
        self._sel_labels[q] = tuple((t, self.label(t)) for t in sorted({t for _, t in ss}))
        self.stats.expanded = len(self.Q)
        self.stats.dpa_states = self.dpa.num_states

    # one-step pairs ------------------------------------------------------------
    def gamma(self, mods: frozenset[int]) -> tuple[Literal, ...]:
        hit = self._gamma.get(mods)
        if hit is None:
            fs = self.table.formulas
            idx = self.table.index
            hit = tuple(Literal(fs[i].op, tuple(idx[c] for c in fs[i].children)) for i in sorted(mods))
            self._gamma[mods] = hit
        return hit

    def pair(self, q: int, theta) -> OneStepPair:
        return OneStepPair.make(self.gamma(self.modal_part(q)), theta)

    def one_step(self, q: int, theta: frozenset[frozenset[int]]):
        key = (self.modal_part(q), theta)
        hit = self._oss.get(key, self)
        if hit is not self:
            self.stats.backend_cache_hits += 1
            return hit
        self.stats.backend_calls += 1
        out = solve_pair(OneStepPair.make(self.gamma(key[0]), theta), self.logics, self.options.epsilon)
        if isinstance(out, Unresolved):
            self.stats.unresolved += 1
        self._oss[key] = out
        return out

    # propagation -----------------------------------------------------------------
    def effective_priorities(self, nodes) -> dict[int, int]:
        """Priorities used by propagation: the automaton's, or compressed ones.

        Compression works per strongly connected component of the explored
        graph: the top priority of a component is lowered as far as parity
        allows above the recursively compressed rest, and nodes on no cycle
        get 0.  The parity of the maximum on every cycle is unchanged, so
        the fixpoints are too, but far fewer levels remain.
        """
        nodes = frozenset(nodes)
        if not self.options.compress_priorities:
            return {q: self.priority(q) for q in nodes}
        g = nx.DiGraph()
        g.add_nodes_from(nodes)
        g.add_edges_from((q, t) for q in nodes for t in self.successors(q) if t in nodes)
        out = {q: 0 for q in nodes}

        def go(part: set[int]) -> int:
            top = -1
            for comp in nx.strongly_connected_components(g.subgraph(part)):
                if len(comp) == 1:
                    (v,) = comp
                    if not g.has_edge(v, v):
                        continue
                m = max(self.priority(q) for q in comp)
                heads = {q for q in comp if self.priority(q) == m}
                base = go(comp - heads)
                val = max(base, 0)
                if val % 2 != m % 2:
                    val += 1
                for q in heads:
                    out[q] = val
                top = max(top, val)
            return top

        go(set(nodes))
        return out

    def levels(self, nodes) -> tuple[dict[int, int], tuple[str, ...]]:
        """Level of every node and the binder of every level (innermost first).

        Unused priorities bind variables that f never reads, and adjacent
        binders of the same kind merge, so nothing is lost.
        """
        eff = self.effective_priorities(nodes)
        prios = sorted(set(eff.values()))
        level_of: dict[int, int] = {}
        binders: list[str] = []
        for p in prios:
            kind = "nu" if p % 2 == 0 else "mu"
            if not binders or binders[-1] != kind:
                binders.append(kind)
            level_of[p] = len(binders) - 1
        return {q: level_of[eff[q]] for q in eff}, tuple(binders)

    def f_member(self, q: int, xp: frozenset[int]) -> bool:
        if self.label(q) & self._bot:
            return False
        if not any(t in xp for t in self._targets[q]):
            return False
        theta = frozenset(lab for t, lab in self._sel_labels[q] if t in xp)
        out = self.one_step(q, theta)
        if isinstance(out, Unresolved):
            self.poisoned.add(q)
            return False
        return out is not None

    def g_member(self, q: int, xp: frozenset[int]) -> bool:
        if self.label(q) & self._bot:
            return True
        if all(t in xp for t in self._targets[q]):
            return True
        theta = frozenset(lab for t, lab in self._sel_labels[q] if t not in xp)
        out = self.one_step(q, theta)
        if isinstance(out, Unresolved):
            self.poisoned.add(q)
            return False
        return out is None

    def propagation(self, dual: bool = False):
        """(universe, binders, vector function) for E (or A when ``dual``)."""
        nodes = frozenset(self.Q)
        prio, binders = self.levels(nodes)
        member = self.g_member if dual else self.f_member

        # q's membership only reads its successors inside env[prio[q]], so a
        # call re-evaluates just the predecessors of nodes that changed there
        preds: dict[int, set[int]] = {q: set() for q in nodes}
        for q in nodes:
            for t in self.successors(q):
                if t in preds:
                    preds[t].add(q)
        memo: dict[str, object] = {"env": None, "out": None}

        def fn(env: Vector) -> frozenset[int]:
            prev = memo["env"]
            if prev is None:
                out = {q for q in nodes if member(q, env[prio[q]])}
            else:
                out = set(memo["out"])
                dirty = set()
                for lvl, (old, new) in enumerate(zip(prev, env)):
                    if old is new:
                        continue
                    for t in old ^ new:
                        dirty.update(q for q in preds[t] if prio[q] == lvl)
                for q in dirty:
                    if member(q, env[prio[q]]):
                        out.add(q)
                    else:
                        out.discard(q)
            memo["env"] = list(env)
            memo["out"] = frozenset(out)
            return memo["out"]

        if dual:
            binders = tuple("nu" if b == "mu" else "mu" for b in binders)
        return nodes, binders, fn

    def f_Q(self, xs: dict[int, frozenset[int]]) -> frozenset[int]:
        """f_Q with X given per priority (missing priorities mean the empty set)."""
        return frozenset(q for q in self.Q if self.f_member(q, xs.get(self.priority(q), frozenset())))

    def g_Q(self, xs: dict[int, frozenset[int]]) -> frozenset[int]:
        return frozenset(q for q in self.Q if self.g_member(q, xs.get(self.priority(q), frozenset())))

    def _solve(self, dual: bool) -> frozenset[int]:
        if not self.Q:
            return frozenset()
        nodes, binders, fn = self.propagation(dual)
        counter = [0]
        out = nested_fixpoint(nodes, binders, fn, counter)
        self.stats.solves += 1
        self.stats.sweeps += counter[0]
        self.stats.peak_sweeps = max(self.stats.peak_sweeps, counter[0])
        return out

    def solve_E(self) -> frozenset[int]:
        return self._solve(False)

    def solve_A(self) -> frozenset[int]:
        return self._solve(True)

    def stage_log(self) -> StageLog:
        nodes, binders, fn = self.propagation(False)
        return nested_fixpoint_stages(nodes, binders, fn)


# driver ----------------------------------------------------------------------------


@dataclass
class Result:
    verdict: str
    stats: Stats
    state: Optional[SolverState] = None
    reason: str = ""
    win: frozenset[int] = frozenset()
    model: object = None
    tableau: object = None
    verified: Optional[bool] = None

    @property
    def exit_code(self) -> int:
        return {SAT: 10, UNSAT: 20, UNKNOWN: 30}[self.verdict]


def prepare(formula: Formula | str, logics: Sequence[str]) -> Formula:
    f = parse(formula, list(logics)) if isinstance(formula, str) else formula
    return normalize(f)


def run(formula: Formula | str, logics: Sequence[str] = ("rel",), options: Optional[EngineOptions] = None) -> Result:
    """Decide satisfiability; optionally extract and verify a model on SAT."""
    opts = options or EngineOptions()
    start = time.perf_counter()
    chi = prepare(formula, logics)
    st = SolverState(chi, logics, opts)
    verdict, reason, win = UNKNOWN, "", frozenset()
    try:
        while st.in_U:
            if opts.max_nodes is not None and len(st.Q) >= opts.max_nodes:
                reason = f"node budget of {opts.max_nodes} exhausted"
                break
            st.expand(st.pop())
            if opts.solve_every and len(st.Q) % opts.solve_every == 0 and st.in_U:
                e = st.solve_E()
                if st.q_init in e:
                    verdict, win = SAT, e
                    break
                if st.q_init in st.solve_A():
                    verdict = UNSAT
                    break
        if verdict == UNKNOWN:
            e = st.solve_E()
            if st.q_init in e:
                verdict, win = SAT, e
            elif not st.in_U and not st.poisoned:
                verdict = UNSAT
            elif st.q_init in st.solve_A():
                verdict = UNSAT
            elif st.poisoned and not reason:
                reason = "nonlinear one-step search inconclusive at the configured resolution"
    except BudgetExhausted as exc:
        verdict, reason = UNKNOWN, str(exc)
    st.stats.expanded = len(st.Q)
    st.stats.dpa_states = st.dpa.num_states
    res = Result(verdict, st.stats, st, reason, win)
    if verdict == SAT and (opts.extract_model or opts.verify or opts.deep_verify):
        from .model import build_model

        built = build_model(st)
        res.model = built.model
        res.tableau = built
        if opts.verify or opts.deep_verify:
            res.verified = built.verify(deep=opts.deep_verify)
    st.stats.wall_time = time.perf_counter() - start
    return res
