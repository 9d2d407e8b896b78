"""Solver statistics on parameterized formula families.

Families grow the closure (nested reachability), the alternation depth
(nested fixpoint chains) or the number of competing probabilistic
constraints; each row reports closure size, depth, expanded nodes, backend
calls, fixpoint sweeps and time.
"""
import argparse
import time

from mucalc.config import EngineOptions
from mucalc.engine import run


def reach_chain(n: int) -> str:
    # eventually p1, and from there eventually p2, ... : satisfiable
    out = "true"
    for i in reversed(range(1, n + 1)):
        out = f"mu X{i}. ((p{i} & {out}) | dia X{i})"
    return out


def alternation(n: int) -> str:
    # nu/mu chain where every variable is reachable from the innermost body
    names = [f"X{i}" for i in range(1, n + 1)]
    body = "(" + " | ".join(f"(p{i} & dia {x})" for i, x in enumerate(names, 1)) + ")"
    for i, x in reversed(list(enumerate(names, 1))):
        body = f"{'nu' if i % 2 else 'mu'} {x}. {body}"
    return body


def prob_disjoint(n: int, slack: int) -> str:
    # n almost surely disjoint events, each above 1/(n+slack)
    atoms = [f"a{i}" for i in range(n)]
    parts = [f"<1/{n + slack}> {a}" for a in atoms]
    parts += [f"[0] (!{a} | !{b})" for i, a in enumerate(atoms) for b in atoms[i + 1:]]
    return " & ".join(parts)


FAMILIES = {
    "reach": (reach_chain, "rel"),
    "alternation": (alternation, "rel"),
    "prob-split": (lambda n: prob_disjoint(n, 1), "prob"),  # satisfiable
    "prob-crowd": (lambda n: prob_disjoint(n, 0), "prob"),  # masses exceed 1: unsatisfiable
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=FAMILIES, action="append")
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    print(f"{'family':12} {'n':>2} {'verdict':8} {'|F|':>4} {'k':>2} {'nodes':>6} {'dpa':>6} {'calls':>6} "
          f"{'sweeps':>7} {'time':>8}")
    for name in args.family or list(FAMILIES):
        make, logic = FAMILIES[name]
        for n in range(1, args.max_n + 1):
            t = time.perf_counter()
            res = run(make(n), (logic,), EngineOptions(verify=True))
            s = res.stats
            print(f"{name:12} {n:>2} {res.verdict:8} {s.closure_size:>4} {s.alternation_depth:>2} {s.expanded:>6} "
                  f"{s.dpa_states:>6} {s.backend_calls:>6} {s.sweeps:>7} {time.perf_counter() - t:>7.2f}s", flush=True)


if __name__ == "__main__":
    main()
