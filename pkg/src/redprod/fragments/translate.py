"""Classical Palyutin -> Horn translation and the continuous encoding of classical formulas."""

from __future__ import annotations

from fractions import Fraction

from ..syntax import classical as C
from ..syntax.analysis import all_vars, csubstitute, fresh_var
from ..syntax.ast import Atomic, Dist, HNode, Inf, Max, Min, Sup, UnaryPL, Var, children
from ..syntax.pl import ONE_MINUS, PLFunc
from .classify import (
    _catomic,
    is_classical_horn,
    is_classical_horn_clause,
    is_classical_palyutin,
    match_classical_h,
)
from .constructions import FragmentError


def _rename(f, old: str, new: str):
    return f if old == new else csubstitute(f, old, Var(new))


def prenex_horn(psi, avoid=frozenset()):
    """(prefix, clauses) with psi equivalent to prefix (clause_1 & ... & clause_m).

    Bound variables are renamed innermost-first to fresh names that avoid
    ``avoid`` and every name already in psi, so the quantifiers commute past
    the conjunctions. Domains are assumed nonempty.
    """
    used = set(avoid) | set(all_vars(psi))

    def go(f):
        if isinstance(f, C.And):
            pa, ma = go(f.left)
            pb, mb = go(f.right)
            return pa + pb, ma + mb
        if isinstance(f, (C.Exists, C.Forall)):
            prefix, mat = go(f.body)
            v = fresh_var(f.var, used)
            used.add(v)
            mat = [_rename(g, f.var, v) for g in mat]
            return [(type(f), v)] + prefix, mat
        if is_classical_horn_clause(f):
            return [], [f]
        raise FragmentError(f"not a classical Horn formula: {f}")

    return go(psi)


def _quantify(prefix, body):
    for q, v in reversed(prefix):
        body = q(v, body)
    return body


def impl_to_horn(phi, psi):
    """A classical Horn formula equivalent to phi -> psi (phi Palyutin, psi Horn)."""
    if not is_classical_palyutin(phi):
        raise FragmentError(f"premise is not classical Palyutin: {phi}")
    if not is_classical_horn(psi):
        raise FragmentError(f"conclusion is not classical Horn: {psi}")
    return _impl(phi, psi)


def _impl(phi, psi):
    prefix, clauses = prenex_horn(psi, C.cfree_vars(phi) | all_vars(phi))
    return _quantify(prefix, C.conj([_impl_clause(phi, g) for g in clauses]))


def _impl_clause(phi, gamma):
    """phi -> gamma for a Horn clause gamma, by induction on phi."""
    if _catomic(phi):
        return C.Or(C.Not(phi), gamma)
    h = match_classical_h(phi)
    if h is None and isinstance(phi, C.Forall):
        # forall x. a is the h-operation with the always-true premise x = x
        h = (phi.var, C.Equal(Var(phi.var), Var(phi.var)), phi.body)
    if h is not None:
        x, p, q = h
        busy = C.cfree_vars(gamma)
        if x in busy:
            nx = fresh_var(x, busy | all_vars(p) | all_vars(q))
            p, q, x = _rename(p, x, nx), _rename(q, x, nx), nx
        # phi -> gamma  ==  forall x. (p -> exists x. (p & (q -> gamma)))
        inner = C.Exists(x, C.And(_to_horn(p), _impl(q, gamma)))
        return C.Forall(x, _impl(p, inner))
    if isinstance(phi, C.And):
        return _impl(phi.left, _impl_clause(phi.right, gamma))
    if isinstance(phi, C.Exists):
        x, a = phi.var, phi.body
        busy = C.cfree_vars(gamma)
        if x in busy:
            nx = fresh_var(x, busy | all_vars(a))
            a, x = _rename(a, x, nx), nx
        return C.Forall(x, _impl(a, gamma))
    raise FragmentError(f"not a classical Palyutin formula: {phi}")


def palyutin_to_horn(phi):
    """An equivalent classical Horn formula for a classical Palyutin formula."""
    if not is_classical_palyutin(phi):
        raise FragmentError(f"not a classical Palyutin formula: {phi}")
    return _to_horn(phi)


def _to_horn(phi):
    if _catomic(phi):
        return phi
    h = match_classical_h(phi)
    if h is not None:
        x, p, q = h
        return C.And(C.Exists(x, _to_horn(p)), C.Forall(x, _impl(p, _to_horn(q))))
    if isinstance(phi, C.And):
        return C.And(_to_horn(phi.left), _to_horn(phi.right))
    if isinstance(phi, (C.Exists, C.Forall)):
        return type(phi)(phi.var, _to_horn(phi.body))
    raise FragmentError(f"not a classical Palyutin formula: {phi}")


# -- continuous encoding -----------------------------------------------------

# sends every positive value of an encoding to 1; values there lie in {0, 1/2, 1}
TO_BOOLEAN = PLFunc.from_points([(0, 0), (Fraction(1, 2), 1)])


def _has_h(f) -> bool:
    return isinstance(f, HNode) or any(_has_h(g) for g in children(f))


def _boolean(f):
    # h-encodings may take the value 1/2; sharpen to {0, 1} before 1 - t or an h-slot
    return UnaryPL(TO_BOOLEAN, f) if _has_h(f) else f


def encode_classical(f, h_nodes: bool = True):
    """Continuous formula whose zero set is the classical truth set of f.

    true is 0 and false is 1: & -> max, | -> min, ~ -> 1 - t, -> as min(1 - a, b),
    exists -> inf, forall -> sup, = -> d under the discrete metric. With
    ``h_nodes`` the shape (exists x. p) & forall x. (p -> q) becomes an h-node
    with connective 1 - t, so classical Palyutin formulas encode to continuous
    Palyutin formulas; such encodings take values in {0, 1/2, 1}.
    """
    if isinstance(f, C.Atom):
        return Atomic(f.rel, f.args)
    if isinstance(f, C.Equal):
        return Dist(f.left, f.right)
    if isinstance(f, C.Not):
        return UnaryPL(ONE_MINUS, _boolean(encode_classical(f.arg, h_nodes)))
    if isinstance(f, C.And):
        if h_nodes:
            h = match_classical_h(f)
            if h is not None:
                x, p, q = h
                ep = _boolean(encode_classical(p, h_nodes))
                eq = _boolean(encode_classical(q, h_nodes))
                return HNode(x, ONE_MINUS, Fraction(1, 2), ep, eq)
        return Max((encode_classical(f.left, h_nodes), encode_classical(f.right, h_nodes)))
    if isinstance(f, C.Or):
        return Min((encode_classical(f.left, h_nodes), encode_classical(f.right, h_nodes)))
    if isinstance(f, C.Implies):
        a = UnaryPL(ONE_MINUS, _boolean(encode_classical(f.left, h_nodes)))
        return Min((a, encode_classical(f.right, h_nodes)))
    if isinstance(f, C.Exists):
        return Inf(f.var, encode_classical(f.body, h_nodes))
    if isinstance(f, C.Forall):
        return Sup(f.var, encode_classical(f.body, h_nodes))
    raise TypeError(f"not a classical formula: {f!r}")
