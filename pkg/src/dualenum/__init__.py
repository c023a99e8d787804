"""Projected model enumeration with dual model shrinking."""

from .cdcl import Solver
from .core import Clause, CnfFormula, DnfAccumulator, Trail, VariablePartition
from .dimacs import DimacsError, ProblemInstance, parse_dimacs
from .encoding import DualState, block_model, encode_negation
from .enumerator import EnumResult, Enumerator, Rule, enumerate_models
from .shrink import InvariantViolation, shrink

__all__ = [
    "Clause", "CnfFormula", "DimacsError", "DnfAccumulator", "DualState", "EnumResult",
    "Enumerator", "InvariantViolation", "ProblemInstance", "Rule", "Solver", "Trail",
    "VariablePartition", "block_model", "encode_negation", "enumerate_models",
    "parse_dimacs", "shrink",
]
