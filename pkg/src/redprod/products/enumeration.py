"""Exhaustive, deterministic enumeration of fragment formulas by AST depth.

Atoms have depth 0 and each connective or quantifier adds one.  Terms are
variables from a fixed pool and the signature's constants.  To keep the
stream duplicate-free and finite:

* max and min are binary, with arguments in canonical order and distinct;
* quantifiers and h-nodes bind only variables free in their scope;
* the identity connective is skipped (it adds nothing but depth);
* ``d(s, t)`` is emitted for distinct terms only, once per unordered pair.
"""

from __future__ import annotations

import itertools

from ..fragments.classify import B_COMBINATION, HORN, PALYUTIN, RECOGNIZERS, is_classical_palyutin
from ..syntax import classical as C
from ..syntax.analysis import free_vars
from ..syntax.ast import Atomic, Const, Dist, HNode, Inf, Max, Min, Sup, UnaryPL, Var
from ..syntax.ast import depth as ast_depth
from ..syntax.pl import IDENTITY, ONE_MINUS, POSITIVE_PART, is_nondecreasing, is_nonincreasing, pl_fixed_point
from ..syntax.printer import print_classical, print_formula

DEFAULT_BASIS = (IDENTITY, ONE_MINUS, POSITIVE_PART)
FRAGMENTS = (HORN, PALYUTIN, B_COMBINATION)


class UnknownFragment(ValueError):
    pass


def _key(f):
    return print_formula(f)


def atoms(signature, variables=("x",)):
    terms = [Var(v) for v in variables] + [Const(c) for c in signature.constants]
    out = []
    for name, p in signature.predicates:
        for args in itertools.product(terms, repeat=p.arity):
            out.append(Atomic(name, tuple(args)))
    for s, t in itertools.combinations(terms, 2):
        out.append(Dist(s, t))
    return sorted(set(out), key=_key)


class _Levels:
    """Formulas of each exact depth, each level sorted by printed form."""

    def __init__(self, level0):
        self.levels = [list(level0)]

    def upto(self, d):
        return [f for lev in self.levels[: d + 1] for f in lev]

    def pairs(self, d):
        """Unordered distinct pairs from depth <= d-1 with at least one at depth exactly d-1."""
        older = self.upto(d - 2) if d >= 2 else []
        newest = self.levels[d - 1]
        for a in older:
            for b in newest:
                yield a, b
        for a, b in itertools.combinations(newest, 2):
            yield a, b

    def ordered_pairs(self, d):
        older = self.upto(d - 2) if d >= 2 else []
        newest = self.levels[d - 1]
        for a in older:
            for b in newest:
                yield a, b
                yield b, a
        for a in newest:
            for b in newest:
                yield a, b


def _binary(cls, a, b):
    ka, kb = _key(a), _key(b)
    return cls((a, b) if ka <= kb else (b, a))


def _palyutin_levels(signature, depth, basis, variables):
    nondec = [C for C in basis if is_nondecreasing(C) and C != IDENTITY]
    noninc = [D for D in basis if is_nonincreasing(D)]
    L = _Levels(atoms(signature, variables))
    for d in range(1, depth + 1):
        new = set()
        for g in L.levels[d - 1]:
            for C in nondec:
                new.add(UnaryPL(C, g))
            for v in sorted(free_vars(g)):
                new.add(Sup(v, g))
                new.add(Inf(v, g))
        for a, b in L.pairs(d):
            new.add(_binary(Max, a, b))
        for D in noninc:
            delta = pl_fixed_point(D)
            for a, b in L.ordered_pairs(d):
                for v in sorted(free_vars(a) | free_vars(b)):
                    new.add(HNode(v, D, delta, a, b))
        L.levels.append(sorted(new, key=_key))
    return L


def _horn_levels(signature, depth, basis, variables):
    nondec = [C for C in basis if is_nondecreasing(C) and C != IDENTITY]
    noninc = [D for D in basis if is_nonincreasing(D)]
    base = atoms(signature, variables)
    c_items = list(base) + [UnaryPL(C, a) for C in nondec for a in base]
    d_items = [UnaryPL(D, a) for D in noninc for a in base]
    prim = set(c_items) | set(d_items)
    # min of one item with a D-item: at most one argument outside the D-items
    for a, b in itertools.combinations(sorted(set(c_items) | set(d_items), key=_key), 2):
        if a in d_items or b in d_items:
            prim.add(_binary(Min, a, b))
    prim_by_depth = {}
    for f in prim:
        prim_by_depth.setdefault(ast_depth(f), set()).add(f)
    L = _Levels(sorted(prim_by_depth.get(0, ()), key=_key))
    for d in range(1, depth + 1):
        new = set(prim_by_depth.get(d, ()))
        for g in L.levels[d - 1]:
            for v in sorted(free_vars(g)):
                new.add(Sup(v, g))
                new.add(Inf(v, g))
        for a, b in L.pairs(d):
            new.add(_binary(Max, a, b))
        L.levels.append(sorted(new, key=_key))
    return L


def _bcomb_levels(signature, depth, basis, variables):
    P = _palyutin_levels(signature, depth, basis, variables)
    others = [C for C in basis if C != IDENTITY]
    L = _Levels(P.levels[0])
    for d in range(1, depth + 1):
        new = set(P.levels[d])
        for g in L.levels[d - 1]:
            for C in others:
                new.add(UnaryPL(C, g))
        for a, b in L.pairs(d):
            new.add(_binary(Max, a, b))
            new.add(_binary(Min, a, b))
        L.levels.append(sorted(new, key=_key))
    return L


_BUILDERS = {PALYUTIN: _palyutin_levels, HORN: _horn_levels, B_COMBINATION: _bcomb_levels}


def enumerate_fragment_formulas(signature, fragment: str, depth: int, basis=DEFAULT_BASIS, variables=("x",)):
    """All formulas of the fragment up to ``depth``, ordered by depth then printed form."""
    if fragment not in _BUILDERS:
        raise UnknownFragment(f"cannot enumerate fragment {fragment!r}; choose from {FRAGMENTS}")
    L = _BUILDERS[fragment](signature, depth, tuple(basis), tuple(variables))
    recognize = RECOGNIZERS[fragment]
    for level in L.levels:
        for f in level:
            assert recognize(f), f"enumerated formula outside {fragment}: {print_formula(f)}"
            yield f


def enumerate_fragment_sentences(signature, fragment: str, depth: int, basis=DEFAULT_BASIS, variables=("x",)):
    """The closed formulas among :func:`enumerate_fragment_formulas`."""
    for f in enumerate_fragment_formulas(signature, fragment, depth, basis, variables):
        if not free_vars(f):
            yield f


def classical_atoms(signature, variables=("x",)):
    terms = [Var(v) for v in variables] + [Const(c) for c in signature.constants]
    out = []
    for name, p in signature.predicates:
        for args in itertools.product(terms, repeat=p.arity):
            out.append(C.Atom(name, tuple(args)))
    for s, t in itertools.combinations(terms, 2):
        out.append(C.Equal(s, t))
    return sorted(set(out), key=print_classical)


def enumerate_classical_palyutin(signature, depth: int, variables=("x",)):
    """Classical Palyutin formulas up to ``depth``, counting the h-operation as one step.

    Conjunctions are binary with distinct arguments in canonical order;
    quantifiers and h-operations bind only variables free in their scope.
    """
    levels = [classical_atoms(signature, variables)]
    for d in range(1, depth + 1):
        older = [f for lev in levels[:-1] for f in lev]
        newest = levels[-1]
        new = set()
        for g in newest:
            for v in sorted(C.cfree_vars(g)):
                new.add(C.Exists(v, g))
                new.add(C.Forall(v, g))
        unordered = [(a, b) for a in older for b in newest] + list(itertools.combinations(newest, 2))
        for a, b in unordered:
            ka, kb = print_classical(a), print_classical(b)
            new.add(C.And(a, b) if ka <= kb else C.And(b, a))
        ordered = [p for a, b in unordered for p in ((a, b), (b, a))] + [(a, a) for a in newest]
        for p, q in ordered:
            for v in sorted(C.cfree_vars(p) | C.cfree_vars(q)):
                new.add(C.And(C.Exists(v, p), C.Forall(v, C.Implies(p, q))))
        levels.append(sorted(new, key=print_classical))
    for level in levels:
        for f in level:
            assert is_classical_palyutin(f), f"enumerated formula is not classical Palyutin: {print_classical(f)}"
            yield f
