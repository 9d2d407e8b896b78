"""Randomized cross-checks between the solver components and independent oracles.

Each suite draws its instances from a seeded generator and reports how many
agreed.  The same suites back the ``selftest`` subcommand and the test suite.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .coalgebra import semantics_eval
from .config import EngineOptions
from .determinize import co_determinize, dpa_accepts_lasso, npa_accepts_lasso, random_npa
from .engine import SAT, SolverState, nested_fixpoint, run
from .formula import fl_closure, normalize
from .games import build_fixpoint_game, build_mc_game, zielonka
from .modelsearch import has_model
from .onestep import OracleBudgetError, Unresolved, is_sat, oss_brute, solve_pair, validate
from .randgen import random_formula, random_model, random_pair


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    total: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, what: Callable[[], str]) -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 10:
            self.failures.append(what())

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        return f"{self.name}: {self.passed}/{self.total} {'pass' if self.ok else 'FAIL'}"


# determinization ------------------------------------------------------------------


def random_lasso(rng: random.Random, letters, max_len: int = 8):
    u = [rng.choice(letters) for _ in range(rng.randint(0, max_len))]
    v = [rng.choice(letters) for _ in range(rng.randint(1, max_len))]
    return u, v


def suite_determinize(rng: random.Random, cases: int = 1000, per_npa: int = 50,
                      letters=(0, 1, 2), priorities=(1, 2, 3, 4)) -> SuiteReport:
    """The complemented deterministic automaton accepts a lasso iff the NPA rejects it."""
    rep = SuiteReport("determinize")
    npa = dpa = None
    for i in range(cases):
        if i % per_npa == 0:
            npa = random_npa(rng, 6, letters, priorities)
            dpa = co_determinize(npa)
        u, v = random_lasso(rng, letters)
        ok = dpa_accepts_lasso(dpa, u, v) != npa_accepts_lasso(npa, u, v)
        rep.record(ok, lambda: f"npa={npa} lasso={u}({v})^w")
    return rep


# one-step backends -----------------------------------------------------------------


def suite_onestep(rng: random.Random, cases: int = 1000, logic: str = "rel") -> SuiteReport:
    """Backend verdicts equal brute-force verdicts; SAT witnesses validate."""
    rep = SuiteReport(f"onestep-{logic}")
    logics = ("rel", "prob") if logic == "fusion" else (logic,)
    oracle_logic = "fusion:rel,prob" if logic == "fusion" else logic
    while rep.total < cases:
        pair = random_pair(rng, logic, linear=True)
        try:
            expected = oss_brute(pair, oracle_logic)
        except OracleBudgetError:
            continue
        got = solve_pair(pair, logics)
        ok = not isinstance(got, Unresolved) and is_sat(got) == (expected is not None)
        if ok and got is not None:
            ok = validate(pair, got)
        rep.record(ok, lambda: f"{pair}: backend={got} oracle={expected}")
    return rep


# fixpoints versus games ---------------------------------------------------------------


def fixpoint_binders(depth: int) -> tuple[str, ...]:
    """Binders of the fixpoint game: level l is mu when l is odd."""
    return tuple("mu" if (i + 1) % 2 else "nu" for i in range(depth))


def random_monotone(rng: random.Random, size: int, depth: int, max_cands: int = 3):
    """A monotone vector function given by minimal candidate tuples per node."""
    universe = list(range(size))
    cands: dict[int, list[tuple[frozenset, ...]]] = {}
    for q in universe:
        cands[q] = [tuple(frozenset(x for x in universe if rng.random() < 0.25) for _ in range(depth))
                    for _ in range(rng.randint(0, max_cands))]

    def f(env) -> frozenset:
        return frozenset(q for q in universe
                         if any(all(c <= x for c, x in zip(tup, env)) for tup in cands[q]))

    return universe, cands, f


def engine_candidates(st: SolverState, limit: int = 4096):
    """Minimal-enough argument tuples of f_Q per node, indexed by raw priority.

    Raw priorities are shifted so that level l of the game (mu at odd l)
    carries priority l.  Returns None when a node has too many selection
    successors to enumerate.
    """
    nodes = set(st.Q)
    shift = 2
    depth = max((st.priority(q) for q in nodes), default=0) + shift
    table: dict[int, list[tuple[frozenset, ...]]] = {}
    for q in st.Q:
        out: list[tuple[frozenset, ...]] = []
        table[q] = out
        if st.label(q) & st._bot:
            continue
        level = st.priority(q) + shift
        sels = sorted({t for _, t in st.sel_succ[q] if t in nodes})
        if 1 << len(sels) > limit:
            return None, depth
        good = []
        for r in range(len(sels) + 1):
            for sub in itertools.combinations(sels, r):
                s = frozenset(sub)
                if any(g <= s for g in good):
                    continue
                o = st.one_step(q, frozenset(st.label(t) for t in s))
                if o is not None and not isinstance(o, Unresolved):
                    good.append(s)
        for _, t in st.choice_succ[q]:
            if t not in nodes:
                continue
            for s in good:
                tup = [frozenset()] * depth
                tup[level - 1] = s | {t}
                out.append(tuple(tup))
    return table, depth


def suite_fixpoint(rng: random.Random, cases: int = 50, engine_cases: int = 20) -> SuiteReport:
    """Nested fixpoints equal the existential winning region of the fixpoint game."""
    rep = SuiteReport("fixpoint-game")
    for _ in range(cases):
        size, depth = rng.randint(1, 8), rng.randint(1, 4)
        universe, cands, f = random_monotone(rng, size, depth)
        fp = nested_fixpoint(frozenset(universe), fixpoint_binders(depth), f)
        g = build_fixpoint_game(universe, depth, lambda q: cands[q])
        sol = zielonka(g)
        win = frozenset(q for q in universe if g.node(("q", q)) in sol.win[0])
        rep.record(fp == win, lambda: f"random instance {cands}: fixpoint={set(fp)} game={set(win)}")
    done = 0
    while done < engine_cases:
        phi = random_formula(rng, rng.randint(3, 10))
        res = run(phi, ("rel",), EngineOptions(max_nodes=60))
        st = res.state
        if st is None or not st.Q:
            continue
        cand, depth = engine_candidates(st)
        if cand is None:
            continue
        done += 1
        e = st.solve_E()
        g = build_fixpoint_game(list(st.Q), depth, lambda q: cand[q])
        sol = zielonka(g)
        win = frozenset(q for q in st.Q if g.node(("q", q)) in sol.win[0])
        rep.record(e == win, lambda: f"{phi}: E={set(e)} game={set(win)}")
    return rep


# model checking games ------------------------------------------------------------------


def suite_mcgame(rng: random.Random, formulas: int = 20, models: int = 5, max_states: int = 4,
                 logic: Optional[str] = None) -> SuiteReport:
    """The existential player wins (x, psi) iff x satisfies psi, for every closure formula."""
    rep = SuiteReport("mc-game")
    for _ in range(formulas):
        lg = logic or rng.choice(("rel", "graded", "prob", "fusion"))
        logics = ("rel", "prob") if lg == "fusion" else (lg,)
        phi = normalize(random_formula(rng, rng.randint(2, 8), lg, polyadic=0.3))
        table = fl_closure(phi)
        for _ in range(models):
            m = random_model(rng, logics, rng.randint(1, max_states))
            g = build_mc_game(m, table)
            sol = zielonka(g)
            memo: dict = {}
            for i, psi in enumerate(table.formulas):
                ext = semantics_eval(m, psi, memo=memo)
                win = frozenset(x for x in m.states if g.node((x, i)) in sol.win[0])
                rep.record(win == ext, lambda: f"{phi} / {psi}: game={set(win)} semantics={set(ext)}")
    return rep


# relational solver versus model search ---------------------------------------------------


def suite_oracle(rng: random.Random, cases: int = 200, max_size: int = 12, states: int = 3) -> SuiteReport:
    """Relational verdicts against exhaustive search over small Kripke models."""
    rep = SuiteReport("relational-oracle")
    for _ in range(cases):
        phi = random_formula(rng, rng.randint(2, max_size))
        res = run(phi, ("rel",), EngineOptions(verify=True))
        if res.verdict == SAT:
            ok = bool(res.verified)
        else:
            # a small model must never coexist with UNSAT or UNKNOWN
            ok = not has_model(normalize(phi), states)
        rep.record(ok, lambda: f"{phi}: solver={res.verdict} verified={res.verified}")
    return rep


SUITES = ("determinize", "onestep", "fixpoint", "mcgame", "oracle")


def run_suite(name: str, seed: int = 0, cases: Optional[int] = None, logic: str = "rel") -> SuiteReport:
    rng = random.Random(seed)
    if name == "determinize":
        return suite_determinize(rng, cases or 1000)
    if name == "onestep":
        return suite_onestep(rng, cases or 300, logic)
    if name == "fixpoint":
        return suite_fixpoint(rng, cases or 50)
    if name == "mcgame":
        return suite_mcgame(rng, cases or 20)
    if name == "oracle":
        return suite_oracle(rng, cases or 100)
    raise ValueError(f"unknown suite {name!r}")
