"""Exact Tarski-style evaluation; quantifiers exhaust the finite domain."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..syntax import classical as C
from ..syntax.analysis import free_vars
from ..syntax.ast import (
    Affine,
    App,
    Atomic,
    Condition,
    Const,
    Dist,
    HNode,
    Inf,
    Max,
    Min,
    Num,
    Sup,
    UnaryPL,
    Var,
)
from .structures import ClassicalStructure, FiniteMetricStructure


class UnboundVariable(LookupError):
    pass


def eval_term(m, t, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is not assigned") from None
    if isinstance(t, Const):
        return m.consts[t.name]
    if isinstance(t, App):
        return m.funcs[t.fn][tuple(eval_term(m, a, env) for a in t.args)]
    raise TypeError(f"not a term: {t!r}")


def eval_formula(m: FiniteMetricStructure, f, assignment: Mapping[str, int] | None = None) -> Fraction:
    """Value of ``f`` in ``m`` under ``assignment`` (variable name -> point index)."""
    env = dict(assignment or {})
    missing = free_vars(f) - env.keys()
    if missing:
        raise UnboundVariable(f"free variables without a value: {sorted(missing)}")
    return _eval(m, f, env)


def _eval(m, f, env) -> Fraction:
    if isinstance(f, Atomic):
        return m.preds[f.pred][tuple(eval_term(m, a, env) for a in f.args)]
    if isinstance(f, Dist):
        return m.dist[eval_term(m, f.left, env)][eval_term(m, f.right, env)]
    if isinstance(f, Num):
        return f.value
    if isinstance(f, Max):
        return max(_eval(m, a, env) for a in f.args)
    if isinstance(f, Min):
        return min(_eval(m, a, env) for a in f.args)
    if isinstance(f, Affine):
        return f.const + sum(c * _eval(m, a, env) for c, a in zip(f.coeffs, f.args))
    if isinstance(f, UnaryPL):
        return f.pl(_eval(m, f.arg, env))
    if isinstance(f, (Sup, Inf)):
        pick = max if isinstance(f, Sup) else min
        return pick(_eval(m, f.body, {**env, f.var: a}) for a in m.points())
    if isinstance(f, HNode):
        low = min(_eval(m, f.phi, {**env, f.var: a}) for a in m.points())
        high = max(_hslot(m, f, {**env, f.var: a}) for a in m.points())
        return max(low, high)
    raise TypeError(f"not a formula: {f!r}")


def _hslot(m, h: HNode, env) -> Fraction:
    return min(h.D(_eval(m, h.phi, env)), h.delta, _eval(m, h.psi, env))


def eval_classical(m: ClassicalStructure, f, assignment: Mapping[str, int] | None = None) -> bool:
    env = dict(assignment or {})
    missing = C.cfree_vars(f) - env.keys()
    if missing:
        raise UnboundVariable(f"free variables without a value: {sorted(missing)}")
    return _ceval(m, f, env)


def _ceval(m, f, env) -> bool:
    if isinstance(f, C.Atom):
        return tuple(eval_term(m, a, env) for a in f.args) in m.relations[f.rel]
    if isinstance(f, C.Equal):
        return eval_term(m, f.left, env) == eval_term(m, f.right, env)
    if isinstance(f, C.Not):
        return not _ceval(m, f.arg, env)
    if isinstance(f, C.And):
        return _ceval(m, f.left, env) and _ceval(m, f.right, env)
    if isinstance(f, C.Or):
        return _ceval(m, f.left, env) or _ceval(m, f.right, env)
    if isinstance(f, C.Implies):
        return (not _ceval(m, f.left, env)) or _ceval(m, f.right, env)
    if isinstance(f, C.Exists):
        return any(_ceval(m, f.body, {**env, f.var: a}) for a in m.points())
    if isinstance(f, C.Forall):
        return all(_ceval(m, f.body, {**env, f.var: a}) for a in m.points())
    raise TypeError(f"not a classical formula: {f!r}")


def satisfies_theory(m: FiniteMetricStructure, theory) -> tuple[bool, Condition | None]:
    """(True, None) if every condition holds, else (False, first violated condition)."""
    for cond in theory:
        if eval_formula(m, cond.sentence) > cond.threshold:
            return False, cond
    return True, None
