"""Randomized approximate model counting for k-CNF formulas."""

from .formula import (
    Assignment,
    Clause,
    CnfFormula,
    GuardError,
    ParseError,
    PartialAssignment,
    brute_force_count,
    dpll_count,
    evaluate,
    parse_dimacs,
    random_kcnf,
    restrict,
    to_dimacs,
)
from .engine import (
    SatOutcome,
    SolverConfig,
    beta_for,
    compute_mu,
    decide,
    walk_try,
)
from .enumeration import EnumResult, TreeStats, count_up_to, lower_bound_report
from .gf2 import (
    EchelonForm,
    Gf2System,
    eliminate,
    enumerate_solutions,
    prefix,
    random_system,
    sample_solution,
)
from .scheme import (
    ApproxResult,
    SchemeConfig,
    approximate_count,
    cutoff,
    sample_estimate,
    sixteen_approx,
)
from .upper import ConstrainedFormula, UpperResult, is_satisfiable_constrained, upper_bound

__all__ = [
    "Assignment",
    "Clause",
    "CnfFormula",
    "GuardError",
    "ParseError",
    "PartialAssignment",
    "brute_force_count",
    "dpll_count",
    "evaluate",
    "parse_dimacs",
    "random_kcnf",
    "restrict",
    "to_dimacs",
    "SatOutcome",
    "SolverConfig",
    "beta_for",
    "compute_mu",
    "decide",
    "walk_try",
    "EnumResult",
    "TreeStats",
    "count_up_to",
    "lower_bound_report",
    "EchelonForm",
    "Gf2System",
    "eliminate",
    "enumerate_solutions",
    "prefix",
    "random_system",
    "sample_solution",
    "ApproxResult",
    "SchemeConfig",
    "approximate_count",
    "cutoff",
    "sample_estimate",
    "sixteen_approx",
    "ConstrainedFormula",
    "UpperResult",
    "is_satisfiable_constrained",
    "upper_bound",
]

__version__ = "0.1.0"
