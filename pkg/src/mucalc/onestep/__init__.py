"""One-step pairs and their satisfiability backends."""
from .backends import (
    DEFAULT_EPSILON, ContractError, graded_bound, oss_for_logic, oss_fusion, oss_graded,
    oss_probabilistic, oss_relational, solve_pair, support_bound,
)
from .oracle import OracleBudgetError, oss_brute
from .pair import (
    FusionWitness, GradedWitness, Literal, OneStepPair, Outcome, ProbWitness, RelWitness,
    Unresolved, Witness, atoms_consistent, is_sat, literal_holds, normalize_pair, validate,
)

__all__ = [
    "DEFAULT_EPSILON", "ContractError", "FusionWitness", "GradedWitness", "Literal", "OneStepPair",
    "OracleBudgetError", "Outcome", "ProbWitness", "RelWitness", "Unresolved", "Witness",
    "atoms_consistent", "graded_bound", "is_sat", "literal_holds", "normalize_pair", "oss_brute",
    "oss_for_logic", "oss_fusion", "oss_graded", "oss_probabilistic", "oss_relational",
    "solve_pair", "support_bound", "validate",
]
