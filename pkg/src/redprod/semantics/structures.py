"""Finite metric and classical structures, and their validation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..syntax.ast import FunctionSymbol, PredicateSymbol, Signature


@dataclass(frozen=True, eq=False)
class FiniteMetricStructure:
    """A finite metric L-structure.

    Points are the indices ``0..n-1``; ``labels`` names them for display.
    Predicate tables map index tuples to rationals, function tables map index
    tuples to indices, constants are indices.
    """

    signature: Signature
    labels: tuple
    dist: tuple  # n x n rationals
    preds: Mapping = field(default_factory=dict)
    funcs: Mapping = field(default_factory=dict)
    consts: Mapping = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.labels)

    def points(self) -> range:
        return range(len(self.labels))

    def index(self, label) -> int:
        return self.labels.index(label)


@dataclass(frozen=True, eq=False)
class ClassicalStructure:
    """A finite two-valued structure; relation tables are sets of true index tuples."""

    signature: Signature
    labels: tuple
    relations: Mapping = field(default_factory=dict)
    funcs: Mapping = field(default_factory=dict)
    consts: Mapping = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.labels)

    def points(self) -> range:
        return range(len(self.labels))


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str

    @property
    def is_lipschitz(self) -> bool:
        return self.kind.startswith("lipschitz")


def _tuple_dist(dist, a, b) -> Fraction:
    return max((dist[x][y] for x, y in zip(a, b)), default=Fraction(0))


def validate_structure(m: FiniteMetricStructure, signature: Signature | None = None) -> list[Violation]:
    """Every violated structure invariant, with a witness; empty iff valid."""
    sig = signature or m.signature
    out: list[Violation] = []
    n = len(m.labels)
    if n == 0:
        return [Violation("empty", (), "a structure needs at least one point")]
    if len(set(m.labels)) != n:
        out.append(Violation("labels", (), "point labels are not distinct"))
    d = m.dist
    if len(d) != n or any(len(row) != n for row in d):
        return out + [Violation("shape", (), f"distance matrix is not {n}x{n}")]
    for a in range(n):
        if d[a][a] != 0:
            out.append(Violation("reflexive", (a,), f"d({m.labels[a]},{m.labels[a]}) = {d[a][a]} != 0"))
    for a, b in itertools.combinations(range(n), 2):
        if d[a][b] != d[b][a]:
            out.append(Violation("symmetry", (a, b), f"d({m.labels[a]},{m.labels[b]}) != d({m.labels[b]},{m.labels[a]})"))
        if d[a][b] <= 0:
            out.append(Violation("separation", (a, b), f"distinct points {m.labels[a]}, {m.labels[b]} at distance {d[a][b]}"))
        if d[a][b] > sig.dmax:
            out.append(Violation("diameter", (a, b), f"d({m.labels[a]},{m.labels[b]}) = {d[a][b]} exceeds dmax {sig.dmax}"))
    for a, b, c in itertools.product(range(n), repeat=3):
        if d[a][c] > d[a][b] + d[b][c]:
            lab = (m.labels[a], m.labels[b], m.labels[c])
            out.append(Violation("triangle", (a, b, c), f"triangle inequality fails at {lab}"))

    for name, p in sig.predicates:
        table = m.preds.get(name)
        if table is None:
            out.append(Violation("missing", (name,), f"no table for predicate {name}"))
            continue
        tuples = list(itertools.product(range(n), repeat=p.arity))
        missing = [t for t in tuples if t not in table]
        if missing:
            out.append(Violation("partial", (name, missing[0]), f"predicate {name} undefined at {missing[0]}"))
            continue
        for t in tuples:
            v = table[t]
            if not p.lo <= v <= p.hi:
                out.append(Violation("bounds", (name, t), f"{name}{t} = {v} outside [{p.lo}, {p.hi}]"))
        for s, t in itertools.combinations(tuples, 2):
            if abs(table[s] - table[t]) > p.lipschitz * _tuple_dist(d, s, t):
                out.append(Violation("lipschitz-predicate", (name, s, t), f"{name} not {p.lipschitz}-Lipschitz at {s}, {t}"))

    for name, fs in sig.functions:
        table = m.funcs.get(name)
        if table is None:
            out.append(Violation("missing", (name,), f"no table for function {name}"))
            continue
        tuples = list(itertools.product(range(n), repeat=fs.arity))
        bad = [t for t in tuples if t not in table or not 0 <= table[t] < n]
        if bad:
            out.append(Violation("partial", (name, bad[0]), f"function {name} undefined or out of range at {bad[0]}"))
            continue
        for s, t in itertools.combinations(tuples, 2):
            if d[table[s]][table[t]] > fs.lipschitz * _tuple_dist(d, s, t):
                out.append(Violation("lipschitz-function", (name, s, t), f"{name} not {fs.lipschitz}-Lipschitz at {s}, {t}"))

    for c in sig.constants:
        if c not in m.consts or not 0 <= m.consts[c] < n:
            out.append(Violation("missing", (c,), f"constant {c} is not interpreted"))
    return out


def make_structure(signature: Signature, labels, dist, preds=None, funcs=None, consts=None) -> FiniteMetricStructure:
    """Build a structure from plain data, coercing values to Fractions and labels to indices."""
    labels = tuple(labels)
    idx = {lab: i for i, lab in enumerate(labels)}

    def key(t):
        return tuple(idx[x] if x in idx else x for x in t)

    dist = tuple(tuple(Fraction(v) for v in row) for row in dist)
    preds = {n: {key(t): Fraction(v) for t, v in tab.items()} for n, tab in (preds or {}).items()}
    funcs = {n: {key(t): idx.get(v, v) for t, v in tab.items()} for n, tab in (funcs or {}).items()}
    consts = {c: idx.get(v, v) for c, v in (consts or {}).items()}
    return FiniteMetricStructure(signature, labels, dist, preds, funcs, consts)


def classical_signature(relations: Mapping[str, int], functions: Mapping[str, int] | None = None, constants=()) -> Signature:
    """A metric signature with the discrete conventions: values in [0, 1], moduli 1, diameter 1."""
    return Signature.build(
        constants=constants,
        functions={n: FunctionSymbol(a, 1) for n, a in (functions or {}).items()},
        predicates={n: PredicateSymbol(a, 0, 1, 1) for n, a in relations.items()},
        dmax=1,
    )


def make_classical(signature: Signature, labels, relations=None, funcs=None, consts=None) -> ClassicalStructure:
    labels = tuple(labels)
    idx = {lab: i for i, lab in enumerate(labels)}

    def key(t):
        return tuple(idx[x] if x in idx else x for x in t)

    relations = {n: frozenset(key(t) for t in tab) for n, tab in (relations or {}).items()}
    for name, _ in signature.predicates:
        relations.setdefault(name, frozenset())
    funcs = {n: {key(t): idx.get(v, v) for t, v in tab.items()} for n, tab in (funcs or {}).items()}
    consts = {c: idx.get(v, v) for c, v in (consts or {}).items()}
    return ClassicalStructure(signature, labels, relations, funcs, consts)


def discrete_metrization(m: ClassicalStructure) -> FiniteMetricStructure:
    """The discrete metric structure: d = 1 off the diagonal, true -> 0, false -> 1."""
    n = m.size
    sig = classical_signature(
        {name: p.arity for name, p in m.signature.predicates},
        {name: f.arity for name, f in m.signature.functions},
        m.signature.constants,
    )
    dist = tuple(tuple(Fraction(0) if a == b else Fraction(1) for b in range(n)) for a in range(n))
    preds = {}
    for name, p in sig.predicates:
        true = m.relations.get(name, frozenset())
        preds[name] = {t: Fraction(0) if t in true else Fraction(1) for t in itertools.product(range(n), repeat=p.arity)}
    return FiniteMetricStructure(sig, m.labels, dist, preds, dict(m.funcs), dict(m.consts))
