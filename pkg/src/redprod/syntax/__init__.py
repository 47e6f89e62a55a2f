"""Formula syntax: terms, continuous and classical formulas, PL connectives."""

from .analysis import all_vars, formula_bounds, formula_modulus, free_vars, fresh_var, substitute
from .ast import (
    Affine,
    App,
    Atomic,
    Condition,
    Const,
    Dist,
    Formula,
    FunctionSymbol,
    HNode,
    Inf,
    Max,
    Min,
    Num,
    PredicateSymbol,
    Signature,
    Sup,
    Theory,
    UnaryPL,
    Var,
    depth,
)
from .parser import (
    ArityMismatch,
    FormulaError,
    MonotonicityError,
    UnknownSymbol,
    parse_classical,
    parse_formula,
    parse_pl,
    parse_rat,
)
from .pl import (
    IDENTITY,
    ONE_MINUS,
    POSITIVE_PART,
    PLFunc,
    is_nondecreasing,
    is_nonincreasing,
    pl_eval,
    pl_fixed_point,
    pl_monotonicity,
)
from .printer import print_classical, print_formula, print_pl, print_rat
