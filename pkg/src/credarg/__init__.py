"""Exact evaluation of uncertain arguments over credal sets."""

from .credal import (
    CredalSet,
    Distribution,
    Interval,
    ProbStatement,
    as_fraction,
    assert_consistent,
    cond_bounds,
    credal_set,
    lower_prob,
    prob_bounds,
    restrict,
    upper_prob,
)
from .decision import Act, DecisionProblem, choose, expected_utility_interval
from .dsl import ArgumentFile, parse_argument_file, render_argument_file
from .logic import BOTTOM, TOP, Formula, WorldSet, WorldSpace, models, parse_formula, render, world_space
from .schema import (
    AuditReport,
    EliminationReport,
    SchemaIArgument,
    SchemaIIArgument,
    UncertaintyPremise,
    Verdict,
    combine_premises,
    conjunction_audit,
    eliminate,
    evaluate_schema_i,
    evaluate_schema_ii,
    expansion_terms,
    frechet_lower,
)

__all__ = [
    "Act",
    "ArgumentFile",
    "AuditReport",
    "BOTTOM",
    "CredalSet",
    "DecisionProblem",
    "Distribution",
    "EliminationReport",
    "Formula",
    "Interval",
    "ProbStatement",
    "SchemaIArgument",
    "SchemaIIArgument",
    "TOP",
    "UncertaintyPremise",
    "Verdict",
    "WorldSet",
    "WorldSpace",
    "as_fraction",
    "assert_consistent",
    "choose",
    "combine_premises",
    "cond_bounds",
    "conjunction_audit",
    "credal_set",
    "eliminate",
    "evaluate_schema_i",
    "evaluate_schema_ii",
    "expansion_terms",
    "expected_utility_interval",
    "frechet_lower",
    "lower_prob",
    "max_entropy",
    "models",
    "oracle_bounds",
    "parse_argument_file",
    "parse_formula",
    "prob_bounds",
    "render",
    "render_argument_file",
    "restrict",
    "upper_prob",
    "world_space",
]

__version__ = "0.1.0"

_LAZY = {"max_entropy": "maxent", "oracle_bounds": "oracle"}


def __getattr__(name):
    # these pull in scipy; load them on first use
    if name in _LAZY:
        import importlib

        return getattr(importlib.import_module(f".{_LAZY[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
