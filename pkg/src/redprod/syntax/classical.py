"""Classical first-order formulas (two-valued), sharing terms with the continuous side."""

from __future__ import annotations

from functools import lru_cache

from .ast import Term, node, term_vars


class CFormula:
    __slots__ = ()

    def __str__(self):
        from .printer import print_classical

        return print_classical(self)


@node
class Atom(CFormula):
    rel: str
    args: tuple = ()


@node
class Equal(CFormula):
    left: Term
    right: Term


@node
class Not(CFormula):
    arg: CFormula


@node
class And(CFormula):
    left: CFormula
    right: CFormula


@node
class Or(CFormula):
    left: CFormula
    right: CFormula


@node
class Implies(CFormula):
    left: CFormula
    right: CFormula


@node
class Exists(CFormula):
    var: str
    body: CFormula


@node
class Forall(CFormula):
    var: str
    body: CFormula


def ne(s: Term, t: Term) -> CFormula:
    return Not(Equal(s, t))


def conj(parts) -> CFormula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> CFormula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


@lru_cache(maxsize=1 << 16)
def cfree_vars(f: CFormula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset().union(*(term_vars(a) for a in f.args))
    if isinstance(f, Equal):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return cfree_vars(f.arg)
    if isinstance(f, (And, Or, Implies)):
        return cfree_vars(f.left) | cfree_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return cfree_vars(f.body) - {f.var}
    raise TypeError(f"not a classical formula: {f!r}")


def cdepth(f: CFormula) -> int:
    if isinstance(f, (Atom, Equal)):
        return 0
    if isinstance(f, Not):
        return 1 + cdepth(f.arg)
    if isinstance(f, (And, Or, Implies)):
        return 1 + max(cdepth(f.left), cdepth(f.right))
    return 1 + cdepth(f.body)
