"""Exhaustive lists of small structures, for bounded model checking."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .structures import ClassicalStructure, FiniteMetricStructure, validate_structure


def _metrics(n, distances):
    pairs = list(itertools.combinations(range(n), 2))
    for vals in itertools.product(distances, repeat=len(pairs)):
        d = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), v in zip(pairs, vals):
            d[a][b] = d[b][a] = v
        if all(d[a][c] <= d[a][b] + d[b][c] for a, b, c in itertools.product(range(n), repeat=3)):
            yield tuple(tuple(row) for row in d)


def _canonical(n, dist, preds, consts, sig):
    best = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        key = (
            tuple(dist[perm[a]][perm[b]] for a in range(n) for b in range(n)),
            tuple(
                tuple(preds[name][tuple(perm[x] for x in t)] for t in itertools.product(range(n), repeat=p.arity))
                for name, p in sig.predicates
            ),
            tuple(inv[consts[c]] for c in sig.constants),
        )
        if best is None or key < best:
            best = key
    return best


def enumerate_structures(signature, sizes=(1, 2, 3), values=(0, Fraction(1, 2), 1), distances=(1,), up_to_iso=True):
    """Every valid metric structure with the given sizes, predicate values and distance values.

    Structures violating any invariant (triangle, bounds, Lipschitz) are
    skipped.  With ``up_to_iso`` one representative per isomorphism class is
    kept.  Function symbols are not supported.
    """
    if signature.functions:
        raise ValueError("structure enumeration does not support function symbols")
    values = [Fraction(v) for v in values]
    distances = [Fraction(v) for v in distances]
    out = []
    for n in sizes:
        seen = set()
        cells = [(name, t) for name, p in signature.predicates for t in itertools.product(range(n), repeat=p.arity)]
        for dist in _metrics(n, distances):
            for vals in itertools.product(values, repeat=len(cells)):
                preds = {name: {} for name, _ in signature.predicates}
                for (name, t), v in zip(cells, vals):
                    preds[name][t] = v
                for cvals in itertools.product(range(n), repeat=len(signature.constants)):
                    consts = dict(zip(signature.constants, cvals))
                    if up_to_iso:
                        key = _canonical(n, dist, preds, consts, signature)
                        if key in seen:
                            continue
                        seen.add(key)
                    m = FiniteMetricStructure(signature, tuple(range(n)), dist, preds, {}, consts)
                    if validate_structure(m):
                        continue
                    out.append(m)
    return out


def enumerate_classical(signature, sizes=(1, 2, 3), up_to_iso=True):
    """Every two-valued structure with the given sizes (relations and constants only)."""
    if signature.functions:
        raise ValueError("structure enumeration does not support function symbols")
    out = []
    for n in sizes:
        seen = set()
        cells = [(name, t) for name, p in signature.predicates for t in itertools.product(range(n), repeat=p.arity)]
        for bits in itertools.product((False, True), repeat=len(cells)):
            rels = {name: set() for name, _ in signature.predicates}
            for (name, t), b in zip(cells, bits):
                if b:
                    rels[name].add(t)
            for cvals in itertools.product(range(n), repeat=len(signature.constants)):
                consts = dict(zip(signature.constants, cvals))
                if up_to_iso:
                    preds = {
                        name: {t: t in rels[name] for t in itertools.product(range(n), repeat=p.arity)}
                        for name, p in signature.predicates
                    }
                    flat = tuple(tuple(0 for _ in range(n)) for _ in range(n))
                    key = _canonical(n, flat, preds, consts, signature)
                    if key in seen:
                        continue
                    seen.add(key)
                out.append(
                    ClassicalStructure(signature, tuple(range(n)), {k: frozenset(v) for k, v in rels.items()}, {}, consts)
                )
    return out
