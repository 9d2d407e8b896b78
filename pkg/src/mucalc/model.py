"""From a winning fixpoint to a verified model.

The stage log of the existential fixpoint yields a positional strategy: one
propagational letter and a set of selections per node.  Following it from
the initial node gives a pre-tableau; its state nodes (those whose label
already holds every modal literal of their local path) carry the model, with
transitions obtained by pushing one-step witnesses forward along the first
state node of each successor's local path.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import networkx as nx

from .coalgebra import Coalgebra, modal_holds, satisfies, semantics_eval
from .engine import SolverState, StageLog
from .onestep import (
    FusionWitness, GradedWitness, OneStepPair, ProbWitness, RelWitness, Unresolved, support_bound, validate,
)
from .tracking import Letter


class TableauError(AssertionError):
    """A construction invariant failed; this signals a bug, never a verdict."""


@dataclass
class Strategy:
    tau: dict[int, tuple[Letter, int]]
    xi: dict[int, tuple[tuple[Letter, int], ...]]
    log: StageLog


def extract_strategy(state: SolverState, log: Optional[StageLog] = None) -> Strategy:
    log = log or state.stage_log()
    if state.q_init not in log.value:
        raise ValueError("the initial node is not in the existential fixpoint")
    level, _ = state.levels(state.Q)
    tau: dict[int, tuple[Letter, int]] = {}
    xi: dict[int, tuple[tuple[Letter, int], ...]] = {}
    for q in log.value:
        target = log.witness[q][level[q]]
        pick = next(((a, t) for a, t in state.choice_succ[q] if t in target), None)
        if pick is None:
            raise TableauError(f"node {q} has no propagational move into its witness set")
        tau[q] = pick
        xi[q] = tuple((a, t) for a, t in state.sel_succ[q] if t in target)
    return Strategy(tau, xi, log)


@dataclass
class PreTableau:
    state: SolverState
    nodes: list[int]
    local: dict[int, tuple[Letter, int]]
    modal: dict[int, tuple[tuple[Letter, int], ...]]

    @property
    def root(self) -> int:
        return self.state.q_init

    def edges(self):
        for q in self.nodes:
            a, t = self.local[q]
            yield q, a, t
            for a, t in self.modal[q]:
                yield q, a, t

    def theta(self, q: int) -> frozenset[frozenset[int]]:
        return frozenset(self.state.label(t) for _, t in self.modal[q])

    def violations(self) -> list[str]:
        st = self.state
        errs = []
        if st.q_init not in self.nodes:
            errs.append("initial node missing")
        inside = set(self.nodes)
        for q in self.nodes:
            if st.label(q) & st._bot:
                errs.append(f"{q}: bottom in label")
            for q0, a, t in [(q, *self.local[q])] + [(q, a, t) for a, t in self.modal[q]]:
                if st.dpa.step(q0, a) != t:
                    errs.append(f"{q}: edge under {a.text()} is not a transition")
                if t not in inside:
                    errs.append(f"{q}: edge leaves the node set")
            if not self.local[q][0].is_choice or any(a.is_choice for a, _ in self.modal[q]):
                errs.append(f"{q}: letters of the wrong kind")
            out = st.one_step(q, self.theta(q))
            if out is None or isinstance(out, Unresolved):
                errs.append(f"{q}: modal step not one-step satisfiable")
        return errs


def build_pretableau(state: SolverState, strategy: Strategy) -> PreTableau:
    order: list[int] = []
    seen = {state.q_init}
    queue = deque([state.q_init])
    while queue:
        q = queue.popleft()
        order.append(q)
        if q not in strategy.tau:
            raise TableauError(f"strategy undefined at reachable node {q}")
        for _, t in (strategy.tau[q],) + strategy.xi[q]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    pt = PreTableau(state, order, {q: strategy.tau[q] for q in order}, {q: strategy.xi[q] for q in order})
    errs = pt.violations()
    if errs:
        raise TableauError("; ".join(errs[:5]))
    return pt


def verify_tableau(pt: PreTableau) -> bool:
    """Every reachable cycle has an even maximal priority."""
    g = nx.DiGraph()
    g.add_nodes_from(pt.nodes)
    g.add_edges_from((q, t) for q, _, t in pt.edges())
    reach = nx.descendants(g, pt.root) | {pt.root}
    prio = {q: pt.state.priority(q) for q in reach}
    for p in sorted({v for v in prio.values() if v % 2 == 1}):
        low = g.subgraph([q for q in reach if prio[q] <= p])
        for comp in nx.strongly_connected_components(low):
            if any(prio[q] == p for q in comp) and (len(comp) > 1 or any(low.has_edge(q, q) for q in comp)):
                return False
    return True


# state nodes --------------------------------------------------------------------------


@dataclass
class StateNodes:
    path: dict[int, list[int]]
    cumulative: dict[int, frozenset[int]]
    states: list[int]
    ceil: dict[int, int]


def state_nodes(pt: PreTableau) -> StateNodes:
    st = pt.state
    path: dict[int, list[int]] = {}
    cum: dict[int, frozenset[int]] = {}
    for q in pt.nodes:
        seq = [q]
        seen = {q}
        while True:
            t = pt.local[seq[-1]][1]
            if t in seen:
                break
            seen.add(t)
            seq.append(t)
        path[q] = seq
        cum[q] = frozenset().union(*(st.label(u) for u in seq))
    states = [q for q in pt.nodes if st.modal_part(q) == cum[q] & st._modal]
    is_state = set(states)
    ceil = {}
    for q in pt.nodes:
        hit = next((u for u in path[q] if u in is_state), None)
        if hit is None:
            raise TableauError(f"no state node on the local path of {q}")
        ceil[q] = hit
    return StateNodes(path, cum, states, ceil)


# coherent coalgebra -----------------------------------------------------------------------


@dataclass
class BuiltModel:
    pretableau: PreTableau
    nodes: StateNodes
    full: Coalgebra  # the coherent structure on all state nodes
    index: dict[int, int]  # state node -> state of ``full``
    model: Optional[Coalgebra] = None  # the part generated by the root
    witnesses: dict[int, object] = field(default_factory=dict)
    pairs: dict[int, OneStepPair] = field(default_factory=dict)
    strategy: Optional[Strategy] = None

    @property
    def state(self) -> SolverState:
        return self.pretableau.state

    def pseudo_extension(self, psi: int) -> frozenset[int]:
        return frozenset(self.index[self.nodes.ceil[u]] for u in self.pretableau.nodes
                         if psi in self.nodes.cumulative[u])

    def coherence_violations(self) -> list[str]:
        st = self.state
        fs = st.table.formulas
        idx = st.table.index
        errs = []
        ext_cache: dict[int, frozenset[int]] = {}

        def psem(i: int) -> frozenset[int]:
            if i not in ext_cache:
                ext_cache[i] = self.pseudo_extension(i)
            return ext_cache[i]

        for q in self.nodes.states:
            x = self.index[q]
            succ = frozenset(self.index[self.nodes.ceil[t]] for _, t in self.pretableau.modal[q])
            for i in sorted(st.modal_part(q)):
                f = fs[i]
                args = [psem(idx[c]) & succ for c in f.children]
                if not modal_holds(self.full, x, f.op, args):
                    errs.append(f"state node {q}: {f} not witnessed")
        return errs

    def verify(self, deep: bool = False) -> bool:
        return verify_truth(self, deep)

    def branching(self) -> list[tuple[int, str, int, int]]:
        """(state, logic, successors with positive mass, allowed bound) per model state."""
        out = []
        for q in self.nodes.states:
            x = self.index[q]
            pair = self.pairs[q]
            if self.full.dist is not None:
                prob_pair = pair.restrict("prob") if len(self.state.logics) > 1 else pair
                n = sum(1 for w in self.full.dist[x].values() if w > 0)
                out.append((x, "prob", n, support_bound(prob_pair)))
            if self.full.succ is not None:
                rel_lits = [l for l in pair.gamma if not l.op.is_atom and l.op.logic == "rel"]
                out.append((x, "rel", len(self.full.succ[x]), len(rel_lits)))
        return out


def _components(witness) -> list:
    if isinstance(witness, FusionWitness):
        return [w for _, w in witness.parts]
    return [witness]


def build_coherent_coalgebra(pt: PreTableau, sn: StateNodes) -> BuiltModel:
    st = pt.state
    index = {q: i for i, q in enumerate(sn.states)}
    model = Coalgebra(st.logics, len(sn.states), index[sn.ceil[pt.root]])
    built = BuiltModel(pt, sn, model, index)
    atoms = []
    for q in sn.states:
        x = index[q]
        theta = pt.theta(q)
        pair = st.pair(q, theta)
        w = st.one_step(q, theta)
        if w is None or isinstance(w, Unresolved) or not validate(pair, w):
            raise TableauError(f"state node {q}: no valid one-step witness")
        built.witnesses[q] = w
        built.pairs[q] = pair
        # section of the label map: least node id per label
        section: dict[frozenset[int], int] = {}
        for _, t in pt.modal[q]:
            lab = st.label(t)
            if lab not in section or t < section[lab]:
                section[lab] = t

        def image(u: frozenset[int]) -> int:
            return index[sn.ceil[section[u]]]

        atoms.append(w.atoms)
        for part in _components(w):
            if isinstance(part, RelWitness):
                model.succ[x] = frozenset(image(u) for u in part.chosen)
            elif isinstance(part, GradedWitness):
                row: dict[int, int] = {}
                for u, m in part.mult:
                    if m:
                        row[image(u)] = row.get(image(u), 0) + m
                model.weights[x] = row
            elif isinstance(part, ProbWitness):
                drow: dict[int, Fraction] = {}
                for u, p in part.weights:
                    if p:
                        drow[image(u)] = drow.get(image(u), Fraction(0)) + p
                model.dist[x] = drow
    model.atoms = atoms
    errs = model.check()
    if errs:
        raise TableauError("; ".join(errs))
    errs = built.coherence_violations()
    if errs:
        raise TableauError("; ".join(errs[:5]))
    built.model = model.generated()[0]
    return built


def verify_truth(built: BuiltModel, deep: bool = False) -> bool:
    """The root of the reported model satisfies the target formula; in deep
    mode every pseudo-extension over the full structure is contained in the
    real extension."""
    st = built.state
    if not satisfies(built.model, st.chi):
        return False
    if deep:
        fs = st.table.formulas
        memo: dict = {}
        for u in built.pretableau.nodes:
            x = built.index[built.nodes.ceil[u]]
            for i in built.nodes.cumulative[u]:
                if x not in semantics_eval(built.full, fs[i], memo=memo):
                    return False
    return True


def build_model(state: SolverState, log: Optional[StageLog] = None) -> BuiltModel:
    strategy = extract_strategy(state, log)
    pt = build_pretableau(state, strategy)
    if not verify_tableau(pt):
        raise TableauError("strategy-derived pre-tableau has an odd-dominated cycle")
    built = build_coherent_coalgebra(pt, state_nodes(pt))
    built.strategy = strategy
    return built
