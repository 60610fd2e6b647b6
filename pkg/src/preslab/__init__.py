"""Executable preservation-theorem notions on finite relational structures.

Cores and k-ary covers, bounded searches for PSC(k)/PCE(k) counterexamples,
their per-structure duality, prenex classification, relativization and
existential closure, all over finite structures with a first-order
formula language.
"""
from . import corpus
from .analysis import (
    CoreReport,
    CounterexampleReport,
    CoverReport,
    bounded_equiv,
    duality_check,
    existential_closure_oracle,
    infer_vocabulary,
    is_core,
    is_existentially_closed_in,
    is_k_ary_covered_extension,
    minimal_cores,
    pce_counterexample_at,
    pce_counterexample_search,
    psc_counterexample_search,
    witness_sets_are_cores,
)
from .evaluator import WitnessSet, evaluate, models_theory, witnesses
from .logic import (
    EMPTY,
    GRAPH,
    And,
    Atom,
    Const,
    Eq,
    Exists,
    FiniteStructure,
    Forall,
    Formula,
    Iff,
    Implies,
    LogicError,
    Not,
    Or,
    Theory,
    Var,
    Vocabulary,
    expand_with_parameters,
    free_variables,
    reduct,
    validate_structure,
)
from .normal_forms import PrefixClass, PrenexForm, classify_prefix, relativize, to_nnf, to_prenex
from .reports import render_report
from .substructures import (
    SearchBudget,
    are_isomorphic,
    enumerate_structures,
    induced_substructure,
    is_substructure,
    substructure_universes,
)
from .syntax import ParseError, SourceSpan, parse_formula, parse_structures, print_formula, print_structure

__version__ = "0.1.0"

__all__ = [
    "CoreReport",
    "CounterexampleReport",
    "CoverReport",
    "bounded_equiv",
    "duality_check",
    "existential_closure_oracle",
    "infer_vocabulary",
    "is_core",
    "is_existentially_closed_in",
    "is_k_ary_covered_extension",
    "minimal_cores",
    "pce_counterexample_at",
    "pce_counterexample_search",
    "psc_counterexample_search",
    "witness_sets_are_cores",
    "WitnessSet",
    "evaluate",
    "models_theory",
    "witnesses",
    "EMPTY",
    "GRAPH",
    "And",
    "Atom",
    "Const",
    "Eq",
    "Exists",
    "FiniteStructure",
    "Forall",
    "Formula",
    "Iff",
    "Implies",
    "LogicError",
    "Not",
    "Or",
    "Theory",
    "Var",
    "Vocabulary",
    "expand_with_parameters",
    "free_variables",
    "reduct",
    "validate_structure",
    "PrefixClass",
    "PrenexForm",
    "classify_prefix",
    "relativize",
    "to_nnf",
    "to_prenex",
    "render_report",
    "SearchBudget",
    "are_isomorphic",
    "enumerate_structures",
    "induced_substructure",
    "is_substructure",
    "substructure_universes",
    "ParseError",
    "SourceSpan",
    "parse_formula",
    "parse_structures",
    "print_formula",
    "print_structure",
    "corpus",
]
