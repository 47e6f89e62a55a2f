"""Free variables, capture-avoiding substitution, and static bounds."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import classical as C
from .ast import (
    Affine,
    App,
    Atomic,
    Const,
    Dist,
    Formula,
    HNode,
    Inf,
    Max,
    Min,
    Num,
    Signature,
    Sup,
    Term,
    UnaryPL,
    Var,
    term_vars,
)


@lru_cache(maxsize=1 << 16)
def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atomic):
        return frozenset().union(*(term_vars(a) for a in f.args))
    if isinstance(f, Dist):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Num):
        return frozenset()
    if isinstance(f, (Max, Min, Affine)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, UnaryPL):
        return free_vars(f.arg)
    if isinstance(f, (Sup, Inf)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, HNode):
        return (free_vars(f.phi) | free_vars(f.psi)) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f) -> frozenset:
    """Every variable name occurring in a (continuous or classical) formula, bound or free."""
    out = set()

    def walk(g):
        if isinstance(g, (Var, Const, App)):
            out.update(term_vars(g))
            return
        if isinstance(g, (Sup, Inf, HNode, C.Exists, C.Forall)):
            out.add(g.var)
        for name in getattr(g, "__dataclass_fields__", ()):
            v = getattr(g, name)
            if isinstance(v, tuple):
                for item in v:
                    if hasattr(item, "__dataclass_fields__"):
                        walk(item)
            elif hasattr(v, "__dataclass_fields__") and not isinstance(v, (str,)):
                walk(v)

    walk(f)
    return frozenset(out)


def fresh_var(base: str, avoid) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def subst_term(t: Term, var: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.name == var else t
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, var, repl) for a in t.args))
    return t


def substitute(f: Formula, var: str, term: Term) -> Formula:
    """f[var := term], renaming bound variables that would capture ``term``."""
    if var not in free_vars(f):
        return f
    tv = term_vars(term)
    if isinstance(f, Atomic):
        return Atomic(f.pred, tuple(subst_term(a, var, term) for a in f.args))
    if isinstance(f, Dist):
        return Dist(subst_term(f.left, var, term), subst_term(f.right, var, term))
    if isinstance(f, Max):
        return Max(tuple(substitute(a, var, term) for a in f.args))
    if isinstance(f, Min):
        return Min(tuple(substitute(a, var, term) for a in f.args))
    if isinstance(f, Affine):
        return Affine(f.coeffs, f.const, tuple(substitute(a, var, term) for a in f.args))
    if isinstance(f, UnaryPL):
        return UnaryPL(f.pl, substitute(f.arg, var, term))
    if isinstance(f, (Sup, Inf)):
        v, body = f.var, f.body
        if v in tv:
            nv = fresh_var(v, tv | all_vars(body) | {var})
            body, v = substitute(body, v, Var(nv)), nv
        return type(f)(v, substitute(body, var, term))
    if isinstance(f, HNode):
        v, phi, psi = f.var, f.phi, f.psi
        if v in tv:
            nv = fresh_var(v, tv | all_vars(phi) | all_vars(psi) | {var})
            phi, psi, v = substitute(phi, v, Var(nv)), substitute(psi, v, Var(nv)), nv
        return HNode(v, f.D, f.delta, substitute(phi, var, term), substitute(psi, var, term))
    raise TypeError(f"not a formula: {f!r}")


def csubstitute(f, var: str, term: Term):
    """Capture-avoiding substitution for classical formulas."""
    if var not in C.cfree_vars(f):
        return f
    if isinstance(f, C.Atom):
        return C.Atom(f.rel, tuple(subst_term(a, var, term) for a in f.args))
    if isinstance(f, C.Equal):
        return C.Equal(subst_term(f.left, var, term), subst_term(f.right, var, term))
    if isinstance(f, C.Not):
        return C.Not(csubstitute(f.arg, var, term))
    if isinstance(f, (C.And, C.Or, C.Implies)):
        return type(f)(csubstitute(f.left, var, term), csubstitute(f.right, var, term))
    if isinstance(f, (C.Exists, C.Forall)):
        tv = term_vars(term)
        v, body = f.var, f.body
        if v in tv:
            nv = fresh_var(v, tv | all_vars(body) | {var})
            body, v = csubstitute(body, v, Var(nv)), nv
        return type(f)(v, csubstitute(body, var, term))
    raise TypeError(f"not a classical formula: {f!r}")


# -- static bounds -----------------------------------------------------------


def pl_image(pl, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact image of [lo, hi] under a PL map (attained at endpoints or kinks)."""
    cands = [pl(lo), pl(hi)] + [y for x, y in pl.breakpoints if lo <= x <= hi]
    return min(cands), max(cands)


def formula_bounds(f: Formula, sig: Signature) -> tuple[Fraction, Fraction]:
    """A sound interval [lo, hi] containing every value of f in every valid structure."""
    if isinstance(f, Atomic):
        p = sig.predicate_map[f.pred]
        return p.lo, p.hi
    if isinstance(f, Dist):
        return Fraction(0), sig.dmax
    if isinstance(f, Num):
        return f.value, f.value
    if isinstance(f, (Max, Min)):
        bs = [formula_bounds(a, sig) for a in f.args]
        pick = max if isinstance(f, Max) else min
        return pick(b[0] for b in bs), pick(b[1] for b in bs)
    if isinstance(f, Affine):
        lo = hi = f.const
        for c, a in zip(f.coeffs, f.args):
            alo, ahi = formula_bounds(a, sig)
            lo += min(c * alo, c * ahi)
            hi += max(c * alo, c * ahi)
        return lo, hi
    if isinstance(f, UnaryPL):
        return pl_image(f.pl, *formula_bounds(f.arg, sig))
    if isinstance(f, (Sup, Inf)):
        return formula_bounds(f.body, sig)
    if isinstance(f, HNode):
        plo, phi = formula_bounds(f.phi, sig)
        dlo, dhi = pl_image(f.D, plo, phi)
        qlo, qhi = formula_bounds(f.psi, sig)
        mlo, mhi = min(dlo, f.delta, qlo), min(dhi, f.delta, qhi)
        return max(plo, mlo), max(phi, mhi)
    raise TypeError(f"not a formula: {f!r}")


def term_modulus(t: Term, sig: Signature) -> Fraction:
    if isinstance(t, Var):
        return Fraction(1)
    if isinstance(t, Const):
        return Fraction(0)
    inner = max((term_modulus(a, sig) for a in t.args), default=Fraction(0))
    return sig.function_map[t.fn].lipschitz * inner


def formula_modulus(f: Formula, sig: Signature) -> Fraction:
    """Lipschitz bound of f in its free variables w.r.t. the max-metric on assignments."""
    if isinstance(f, Atomic):
        inner = max((term_modulus(a, sig) for a in f.args), default=Fraction(0))
        return sig.predicate_map[f.pred].lipschitz * inner
    if isinstance(f, Dist):
        return term_modulus(f.left, sig) + term_modulus(f.right, sig)
    if isinstance(f, Num):
        return Fraction(0)
    if isinstance(f, (Max, Min)):
        return max(formula_modulus(a, sig) for a in f.args)
    if isinstance(f, Affine):
        return sum((abs(c) * formula_modulus(a, sig) for c, a in zip(f.coeffs, f.args)), Fraction(0))
    if isinstance(f, UnaryPL):
        return f.pl.lipschitz() * formula_modulus(f.arg, sig)
    if isinstance(f, (Sup, Inf)):
        return formula_modulus(f.body, sig)
    if isinstance(f, HNode):
        mp = formula_modulus(f.phi, sig)
        return max(mp, f.D.lipschitz() * mp, formula_modulus(f.psi, sig))
    raise TypeError(f"not a formula: {f!r}")


__all__ = [
    "free_vars",
    "all_vars",
    "fresh_var",
    "substitute",
    "csubstitute",
    "subst_term",
    "formula_bounds",
    "formula_modulus",
    "pl_image",
]
