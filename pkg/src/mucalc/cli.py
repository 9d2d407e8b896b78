"""Command-line front end.

Exit codes of ``solve``: 10 SAT, 20 UNSAT, 30 UNKNOWN, 1 on any error
(including a model that fails verification).  ``oracle`` and ``selftest``
exit 0 on success and 1 otherwise.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .config import EngineOptions, RunConfig, parse_logic
from .engine import SAT, run
from .formula import ParseError, normalize, parse
from .coalgebra import ModelFormatError, dump_model, load_model, satisfies

EXIT_ERROR = 1


def _solve_parser(sub) -> None:
    p = sub.add_parser("solve", help="decide satisfiability of a formula")
    p.add_argument("formula", nargs="?", help="inline formula (or use --formula / --file)")
    p.add_argument("--formula", dest="formula_flag", metavar="TEXT", help="inline formula")
    p.add_argument("--file", dest="input_path", help="read the formula from a file")
    p.add_argument("--logic", default="rel", help="rel, graded, prob, fusion or fusion:A,B")
    p.add_argument("--solve-every", type=int, default=0, metavar="N",
                   help="also solve after every N expansions (0: only at the end)")
    p.add_argument("--expansion-order", choices=("fifo", "label-size"), default="fifo")
    p.add_argument("--max-nodes", type=int, default=20000)
    p.add_argument("--max-dpa-states", type=int, default=200000)
    p.add_argument("--epsilon", type=Fraction, default=None,
                   help="resolution of the nonlinear probabilistic search")
    p.add_argument("--no-compress", action="store_true", help="use raw automaton priorities")
    p.add_argument("--verify", action="store_true", help="extract a model and check the formula on it")
    p.add_argument("--deep-verify", action="store_true", help="also check every tableau label")
    p.add_argument("--extract-model", metavar="PATH", help="write the model ('-' for stdout)")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time in the statistics")
    p.add_argument("--dump-npa", action="store_true")
    p.add_argument("--dump-dpa", action="store_true", help="print the explored automaton states")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mucalc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    _solve_parser(sub)

    o = sub.add_parser("oracle", help="exhaustive search over small Kripke models")
    o.add_argument("formula")
    o.add_argument("--states", type=int, default=3, help="largest model size to try")
    o.add_argument("--atoms", default=None, help="comma-separated atoms (default: those of the formula)")

    s = sub.add_parser("selftest", help="randomized cross-checks against independent oracles")
    s.add_argument("--suite", default="all", help="determinize, onestep, fixpoint, mcgame, oracle or all")
    s.add_argument("--cases", type=int, default=None)
    s.add_argument("--logic", default="rel", help="backend for the onestep suite")
    s.add_argument("--seed", type=int, default=0)
    return ap


def cmd_solve(args, out) -> int:
    opts = EngineOptions(
        solve_every=args.solve_every,
        expansion_order=args.expansion_order,
        max_nodes=args.max_nodes,
        max_dpa_states=args.max_dpa_states,
        compress_priorities=not args.no_compress,
        extract_model=args.extract_model is not None,
        verify=args.verify,
        deep_verify=args.deep_verify,
    )
    if args.epsilon is not None:
        opts.epsilon = args.epsilon
    if args.formula is not None and args.formula_flag is not None:
        raise ValueError("formula given twice")
    formula = args.formula if args.formula is not None else args.formula_flag
    cfg = RunConfig(logic=parse_logic(args.logic), formula=formula, input_path=args.input_path,
                    engine=opts, model_path=args.extract_model, stats=args.stats,
                    dump_npa=args.dump_npa, dump_dpa=args.dump_dpa)
    if cfg.formula is None and cfg.input_path is None:
        raise ValueError("no formula given")
    res = run(cfg.read_formula(), cfg.logic, cfg.engine)
    print(res.verdict + (f" ({res.reason})" if res.reason else ""), file=out)
    if res.verified is not None:
        print(f"verified {'yes' if res.verified else 'NO'}", file=out)
    if cfg.stats:
        for line in res.stats.lines():
            if line.startswith("wall_time") and not args.timing:
                continue
            print("stat " + line, file=out)
    if cfg.dump_npa:
        print(res.state.npa.dump(), file=out)
    if cfg.dump_dpa:
        print(res.state.dpa.dump(sorted(res.state.Q)), file=out)
    if res.verdict == SAT and cfg.model_path is not None:
        text = dump_model(res.model)
        if cfg.model_path == "-":
            print(text, end="", file=out)
        else:
            with open(cfg.model_path, "w", encoding="utf-8") as fh:
                fh.write(text)
            if res.verified is not None:
                with open(cfg.model_path, encoding="utf-8") as fh:
                    back = fh.read()
                loaded = load_model(back)
                ok = dump_model(loaded) == back and satisfies(loaded, res.state.chi)
                print(f"model file re-check {'yes' if ok else 'NO'}", file=out)
                if not ok:
                    return EXIT_ERROR
    if res.verified is False:
        return EXIT_ERROR
    return res.exit_code


def cmd_oracle(args, out) -> int:
    from .modelsearch import find_model

    phi = normalize(parse(args.formula, "rel"))
    atoms = [a for a in args.atoms.split(",") if a] if args.atoms is not None else None
    found = find_model(phi, args.states, atoms)
    if found is None:
        print(f"none up to {args.states} states", file=out)
    else:
        print(f"model found ({found.states} states, root {found.state})", file=out)
        model = found.model
        model.root = found.state
        print(dump_model(model), end="", file=out)
    return 0


def cmd_selftest(args, out) -> int:
    from .selftest import SUITES, run_suite

    names = SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for name in names:
        rep = run_suite(name, RunConfig(seed=args.seed).seed, args.cases, args.logic)
        print(rep.line(), file=out)
        for f in rep.failures:
            print("  " + f, file=out)
        ok &= rep.ok
    return 0 if ok else EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args, out)
        if args.command == "oracle":
            return cmd_oracle(args, out)
        return cmd_selftest(args, out)
    except (ParseError, ModelFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
