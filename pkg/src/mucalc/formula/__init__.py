"""Formula syntax, parsing, normalization and closure analysis."""
from .ast import (
    AND, BOT, MODAL, MU, NEGVAR, NOT, NU, OR, TOP, VAR, Formula, ModalOp,
    and_, atom, atoms_of, binder, bot, box, conj, dia, disj, logics_of, modal,
    mu, negvar, not_, nu, or_, substitute, top, var,
)
from .closure import ClosureTable, alternation_depths, distinct_subformulae, fl_closure, unfold
from .normalize import is_clean, is_irredundant, negvars_ok, nnf, normalize
from .parser import ParseError, parse

__all__ = [
    "AND", "BOT", "MODAL", "MU", "NEGVAR", "NOT", "NU", "OR", "TOP", "VAR",
    "ClosureTable", "Formula", "ModalOp", "ParseError",
    "alternation_depths", "and_", "atom", "atoms_of", "binder", "bot", "box",
    "conj", "dia", "disj", "distinct_subformulae", "fl_closure", "is_clean",
    "is_irredundant", "logics_of", "modal", "mu", "negvar", "negvars_ok", "nnf",
    "normalize", "not_", "nu", "or_", "parse", "substitute", "top", "unfold", "var",
]
