"""Knowledge-base exploration: well-founded semantics feeding a stable-model enumerator."""

__version__ = "0.1.0"

from .bridge import emit_xgf, parse_xgf
from .engine import Answer, Mode, QueryResult, query_answer
from .errors import (
    FormatError,
    InternalPredicateClash,
    OracleTooLarge,
    ParseError,
    ResourceLimitExceeded,
    SafetyError,
    XnmrError,
)
from .grounder import AtomTable, GroundProgram, GroundRule, ResourceLimits, relevant_ground
from .solver import Assignment, Conflict, StableModel, StableSolver, enumerate_stable, expand, is_stable_model
from .syntax import Atom, Literal, Program, Query, Rule, Term, parse_program, parse_query
from .wfs import ResidualProgram, WfsResult, extract_residual, gl_reduct_least_model, well_founded

__all__ = [
    "Answer", "Assignment", "Atom", "AtomTable", "Conflict", "FormatError", "GroundProgram",
    "GroundRule", "InternalPredicateClash", "Literal", "Mode", "OracleTooLarge", "ParseError",
    "Program", "Query", "QueryResult", "ResidualProgram", "ResourceLimitExceeded",
    "ResourceLimits", "Rule", "SafetyError", "StableModel", "StableSolver", "Term", "WfsResult",
    "XnmrError", "emit_xgf", "enumerate_stable", "expand", "extract_residual",
    "gl_reduct_least_model", "is_stable_model", "parse_program", "parse_query", "parse_xgf",
    "query_answer", "relevant_ground", "well_founded",
]
