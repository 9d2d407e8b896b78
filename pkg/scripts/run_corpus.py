"""Decide every corpus formula and print verdict, verification and statistics."""
import argparse
import time

from mucalc.config import EngineOptions
from mucalc.corpus import CORPUS
from mucalc.engine import run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--solve-every", type=int, default=0)
    ap.add_argument("--no-compress", action="store_true")
    args = ap.parse_args()
    opts = dict(deep_verify=True, solve_every=args.solve_every, compress_priorities=not args.no_compress)
    bad = 0
    total = time.perf_counter()
    print(f"{'name':28} {'logic':16} {'verdict':8} {'expected':8} {'verified':8} {'|F|':>4} {'k':>2} "
          f"{'nodes':>6} {'calls':>6} {'sweeps':>7} {'time':>7}")
    for e in CORPUS:
        t = time.perf_counter()
        res = run(e.text, e.logics, EngineOptions(**opts))
        dt = time.perf_counter() - t
        s = res.stats
        bad += res.verdict != e.expected or res.verified is False
        print(f"{e.name:28} {e.logic:16} {res.verdict:8} {e.expected:8} {str(res.verified):8} "
              f"{s.closure_size:>4} {s.alternation_depth:>2} {s.expanded:>6} {s.backend_calls:>6} "
              f"{s.sweeps:>7} {dt:>6.2f}s")
    print(f"{len(CORPUS) - bad}/{len(CORPUS)} as expected in {time.perf_counter() - total:.1f}s")


if __name__ == "__main__":
    main()
