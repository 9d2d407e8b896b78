"""Random stress test of the whole pipeline.

Relational formulae are checked against exhaustive small-model search; for
the other logics, SAT verdicts must come with a verified model and UNSAT
verdicts must survive random models of the same logic.
"""
import argparse
import random
import time

from mucalc.coalgebra import semantics_eval
from mucalc.config import EngineOptions
from mucalc.engine import SAT, UNSAT, run
from mucalc.formula import normalize
from mucalc.modelsearch import has_model
from mucalc.randgen import random_formula, random_model

LOGICS = {"rel": ("rel",), "graded": ("graded",), "prob": ("prob",), "fusion": ("rel", "prob")}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cases", type=int, default=300)
    ap.add_argument("--max-size", type=int, default=14)
    ap.add_argument("--logic", choices=[*LOGICS, "mixed"], default="mixed")
    ap.add_argument("--max-nodes", type=int, default=3000)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    counts: dict[tuple[str, str], int] = {}
    slowest: list[tuple[float, str]] = []
    bad = 0
    start = time.perf_counter()
    for _ in range(args.cases):
        logic = rng.choice(list(LOGICS)) if args.logic == "mixed" else args.logic
        logics = LOGICS[logic]
        phi = random_formula(rng, rng.randint(2, args.max_size), logic, polyadic=0.4)
        t = time.perf_counter()
        res = run(phi, logics, EngineOptions(deep_verify=True, max_nodes=args.max_nodes))
        slowest.append((time.perf_counter() - t, f"[{logic}] {phi}"))
        counts[(logic, res.verdict)] = counts.get((logic, res.verdict), 0) + 1
        if res.verdict == SAT and not res.verified:
            print("unverified", logic, phi)
            bad += 1
        elif res.verdict == UNSAT:
            chi = normalize(phi)
            if logic == "rel":
                if has_model(chi, 3):
                    print("small model for UNSAT", phi)
                    bad += 1
            elif any(semantics_eval(random_model(rng, logics, rng.randint(1, 3)), chi) for _ in range(30)):
                print("random model for UNSAT", logic, phi)
                bad += 1
    for key in sorted(counts):
        print(f"{key[0]:7} {key[1]:8} {counts[key]}")
    print(f"violations {bad}, {time.perf_counter() - start:.1f}s")
    for dt, text in sorted(slowest, reverse=True)[:3]:
        print(f"  {dt:.2f}s {text}")


if __name__ == "__main__":
    main()
