"""Syntactic recognizers for the Horn, Palyutin and derived fragments."""

from __future__ import annotations

from functools import lru_cache

from ..syntax import classical as C
from ..syntax.analysis import free_vars
from ..syntax.ast import Affine, Atomic, Dist, HNode, Inf, Max, Min, Num, Sup, UnaryPL
from ..syntax.pl import is_nondecreasing, is_nonincreasing, pl_fixed_point

ATOMIC = "atomic"
PRIMITIVE_HORN = "primitive-horn"
HORN = "horn"
PALYUTIN = "palyutin"
B_COMBINATION = "b-combination"
HP_SENTENCE = "hp-sentence"
PP_SENTENCE = "pp-sentence"
BP_SENTENCE = "bp-sentence"
CLASSICAL_HORN_CLAUSE = "classical-horn-clause"
CLASSICAL_HORN = "classical-horn"
CLASSICAL_PALYUTIN = "classical-palyutin"

LABELS = (
    ATOMIC,
    PRIMITIVE_HORN,
    HORN,
    PALYUTIN,
    B_COMBINATION,
    HP_SENTENCE,
    PP_SENTENCE,
    BP_SENTENCE,
    CLASSICAL_HORN_CLAUSE,
    CLASSICAL_HORN,
    CLASSICAL_PALYUTIN,
)


def is_atomic(f) -> bool:
    # rational constants count as 0-ary atomic formulas
    return isinstance(f, (Atomic, Dist, Num))


def nondecreasing_arg(f):
    """The argument of f if f is a nondecreasing unary connective applied to it, else None."""
    if isinstance(f, UnaryPL) and is_nondecreasing(f.pl):
        return f.arg
    if isinstance(f, Affine) and len(f.args) == 1 and f.coeffs[0] >= 0:
        return f.args[0]
    return None


def nonincreasing_arg(f):
    if isinstance(f, UnaryPL) and is_nonincreasing(f.pl):
        return f.arg
    if isinstance(f, Affine) and len(f.args) == 1 and f.coeffs[0] <= 0:
        return f.args[0]
    return None


def match_h_shape(f):
    """(var, D, delta, phi, psi) when f is an h-node or its desugared shape, else None.

    The desugared shape is max(inf_x phi, sup_x min(D phi, delta, psi)) with the
    min arguments in any order; delta must be the exact fixed point of D.
    """
    if isinstance(f, HNode):
        if is_nonincreasing(f.D) and pl_fixed_point(f.D) == f.delta:
            return f.var, f.D, f.delta, f.phi, f.psi
        return None
    if not (isinstance(f, Max) and len(f.args) == 2):
        return None
    for low, high in (f.args, f.args[::-1]):
        if not (isinstance(low, Inf) and isinstance(high, Sup) and low.var == high.var):
            continue
        inner = high.body
        if not (isinstance(inner, Min) and len(inner.args) == 3):
            continue
        phi = low.body
        for i, dphi in enumerate(inner.args):
            if not (isinstance(dphi, UnaryPL) and dphi.arg == phi and is_nonincreasing(dphi.pl)):
                continue
            delta = pl_fixed_point(dphi.pl)
            rest = [a for j, a in enumerate(inner.args) if j != i]
            for k in (0, 1):
                if isinstance(rest[k], Num) and rest[k].value == delta:
                    return low.var, dphi.pl, delta, phi, rest[1 - k]
    return None


@lru_cache(maxsize=None)
def is_palyutin(f) -> bool:
    if is_atomic(f):
        return True
    arg = nondecreasing_arg(f)
    if arg is not None:
        return is_palyutin(arg)
    if isinstance(f, Max):
        if all(is_palyutin(a) for a in f.args):
            return True
    if isinstance(f, (Sup, Inf)):
        return is_palyutin(f.body)
    h = match_h_shape(f)
    if h is not None:
        return is_palyutin(h[3]) and is_palyutin(h[4])
    return False


def _c_item(f) -> bool:
    if is_atomic(f):
        return True
    arg = nondecreasing_arg(f)
    return arg is not None and is_atomic(arg)


def _d_item(f) -> bool:
    if isinstance(f, Num):
        return True
    arg = nonincreasing_arg(f)
    return arg is not None and is_atomic(arg)


@lru_cache(maxsize=None)
def is_primitive_horn(f) -> bool:
    """min(C alpha, D1 beta1, ..., Dn betan) with alpha, beta atomic.

    A missing C alpha is accepted: it is equivalent to a constant C above the
    bound of the D-terms.
    """
    items = f.args if isinstance(f, Min) else (f,)
    if not all(_c_item(g) or _d_item(g) for g in items):
        return False
    return sum(1 for g in items if not _d_item(g)) <= 1


@lru_cache(maxsize=None)
def is_horn(f) -> bool:
    if is_primitive_horn(f):
        return True
    if isinstance(f, Max):
        return all(is_horn(a) for a in f.args)
    if isinstance(f, (Sup, Inf)):
        return is_horn(f.body)
    return False


@lru_cache(maxsize=None)
def is_b_combination(f) -> bool:
    """Palyutin formulas closed under affine maps, max and min.

    PL connectives are accepted as well: every PL map on Q is a max of mins
    of affine maps, so they add nothing beyond the lattice-affine closure.
    """
    if is_palyutin(f):
        return True
    if isinstance(f, (Max, Min, Affine)):
        return all(is_b_combination(a) for a in f.args)
    if isinstance(f, UnaryPL):
        return is_b_combination(f.arg)
    return False


def _terms(f):
    return f.args if isinstance(f, Max) else (f,)


def _d_palyutin(f) -> bool:
    arg = nonincreasing_arg(f)
    return arg is not None and is_palyutin(arg)


def is_hp_sentence(f) -> bool:
    if free_vars(f):
        return False

    def ok(t):
        if is_palyutin(t) or _d_palyutin(t):
            return True
        if isinstance(t, Min) and len(t.args) == 2:
            a, b = t.args
            return (_d_palyutin(a) and is_palyutin(b)) or (_d_palyutin(b) and is_palyutin(a))
        return False

    return all(ok(t) for t in _terms(f))


def is_pp_sentence(f) -> bool:
    if free_vars(f):
        return False

    def ok(t):
        if isinstance(t, Min):
            return all(is_palyutin(a) for a in t.args)
        return is_palyutin(t)

    return all(ok(t) for t in _terms(f))


def is_bp_sentence(f) -> bool:
    if free_vars(f):
        return False

    def ok(t):
        items = t.args if isinstance(t, Min) else (t,)
        return all(is_palyutin(a) or _d_palyutin(a) for a in items)

    return all(ok(t) for t in _terms(f))


# -- classical ---------------------------------------------------------------


def _catomic(f) -> bool:
    return isinstance(f, (C.Atom, C.Equal))


def _conj_atoms(f):
    if _catomic(f):
        return [f]
    if isinstance(f, C.And):
        left, right = _conj_atoms(f.left), _conj_atoms(f.right)
        if left is not None and right is not None:
            return left + right
    return None


def clause_literals(f):
    """(positive atoms, negative atoms) if f is a clause written with ~, |, ->; else None."""
    if _catomic(f):
        return [f], []
    if isinstance(f, C.Not) and _catomic(f.arg):
        return [], [f.arg]
    if isinstance(f, C.Or):
        left, right = clause_literals(f.left), clause_literals(f.right)
        if left is None or right is None:
            return None
        return left[0] + right[0], left[1] + right[1]
    if isinstance(f, C.Implies):
        body = _conj_atoms(f.left)
        head = clause_literals(f.right)
        if body is None or head is None:
            return None
        return head[0], body + head[1]
    return None


def is_classical_horn_clause(f) -> bool:
    lits = clause_literals(f)
    return lits is not None and len(lits[0]) <= 1


@lru_cache(maxsize=None)
def is_classical_horn(f) -> bool:
    if is_classical_horn_clause(f):
        return True
    if isinstance(f, C.And):
        return is_classical_horn(f.left) and is_classical_horn(f.right)
    if isinstance(f, (C.Exists, C.Forall)):
        return is_classical_horn(f.body)
    return False


def match_classical_h(f):
    """(x, phi, psi) when f is (exists x. phi) & forall x. (phi -> psi), else None."""
    if not isinstance(f, C.And):
        return None
    ex, fa = f.left, f.right
    if (
        isinstance(ex, C.Exists)
        and isinstance(fa, C.Forall)
        and ex.var == fa.var
        and isinstance(fa.body, C.Implies)
        and fa.body.left == ex.body
    ):
        return ex.var, ex.body, fa.body.right
    return None


@lru_cache(maxsize=None)
def is_classical_palyutin(f) -> bool:
    if _catomic(f):
        return True
    h = match_classical_h(f)
    if h is not None and is_classical_palyutin(h[1]) and is_classical_palyutin(h[2]):
        return True
    if isinstance(f, C.And):
        return is_classical_palyutin(f.left) and is_classical_palyutin(f.right)
    if isinstance(f, (C.Exists, C.Forall)):
        return is_classical_palyutin(f.body)
    return False


def classify_fragment(f) -> frozenset:
    """Every fragment label whose grammar f satisfies."""
    out = set()
    if isinstance(f, C.CFormula):
        if _catomic(f):
            out.add(ATOMIC)
        if is_classical_horn_clause(f):
            out.add(CLASSICAL_HORN_CLAUSE)
        if is_classical_horn(f):
            out.add(CLASSICAL_HORN)
        if is_classical_palyutin(f):
            out.add(CLASSICAL_PALYUTIN)
        return frozenset(out)
    if is_atomic(f):
        out.add(ATOMIC)
    if is_primitive_horn(f):
        out.add(PRIMITIVE_HORN)
    if is_horn(f):
        out.add(HORN)
    if is_palyutin(f):
        out.add(PALYUTIN)
    if is_b_combination(f):
        out.add(B_COMBINATION)
    if is_hp_sentence(f):
        out.add(HP_SENTENCE)
    if is_pp_sentence(f):
        out.add(PP_SENTENCE)
    if is_bp_sentence(f):
        out.add(BP_SENTENCE)
    return frozenset(out)


RECOGNIZERS = {
    PRIMITIVE_HORN: is_primitive_horn,
    HORN: is_horn,
    PALYUTIN: is_palyutin,
    B_COMBINATION: is_b_combination,
    HP_SENTENCE: is_hp_sentence,
    PP_SENTENCE: is_pp_sentence,
    BP_SENTENCE: is_bp_sentence,
    CLASSICAL_HORN_CLAUSE: is_classical_horn_clause,
    CLASSICAL_HORN: is_classical_horn,
    CLASSICAL_PALYUTIN: is_classical_palyutin,
}
