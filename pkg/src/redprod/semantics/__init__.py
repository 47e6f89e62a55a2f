"""Finite structures and exact evaluation."""

from .evaluate import UnboundVariable, eval_classical, eval_formula, eval_term, satisfies_theory
from .structures import (
    ClassicalStructure,
    FiniteMetricStructure,
    Violation,
    classical_signature,
    discrete_metrization,
    make_classical,
    make_structure,
    validate_structure,
)
from .tables import BatchEvaluator, ClassicalBatch, OffGrid, value_table
from .universe import enumerate_classical, enumerate_structures

evaluate = eval_formula
