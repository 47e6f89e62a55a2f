"""Reduced products of finite structures over filters on a finite index set."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..semantics.structures import ClassicalStructure, FiniteMetricStructure, validate_structure
from .filters import FiniteFilter

DEFAULT_CAP = 10_000


class ProductTooLarge(ValueError):
    pass


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReducedProduct:
    """The product structure with its bookkeeping.

    ``points[k]`` is the kernel-indexed tuple (one coordinate per kernel index,
    in increasing index order) that result point ``k`` stands for.
    """

    result: FiniteMetricStructure | ClassicalStructure
    factors: tuple
    filter: FiniteFilter
    points: tuple

    @property
    def kernel(self) -> tuple:
        return self.filter.indices

    def point(self, kernel_tuple) -> int:
        """Result index of a kernel-indexed tuple."""
        return _mixed_radix(kernel_tuple, [self.factors[i].size for i in self.kernel])

    def project(self, full_tuple) -> int:
        """Result index of the class of a tuple indexed by all factors."""
        if len(full_tuple) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates")
        return self.point([full_tuple[i] for i in self.kernel])


def _mixed_radix(digits, sizes) -> int:
    out = 0
    for d, s in zip(digits, sizes):
        if not 0 <= d < s:
            raise ValueError(f"coordinate {d} out of range {s}")
        out = out * s + d
    return out


def _prepare(factors, filt: FiniteFilter, cap):
    factors = tuple(factors)
    if not factors:
        raise ValueError("a product needs at least one factor")
    if filt.n != len(factors):
        raise ValueError(f"filter is on {filt.n} indices but there are {len(factors)} factors")
    sig = factors[0].signature
    for i, m in enumerate(factors):
        if m.signature != sig:
            raise SignatureMismatch(f"factor {i} has a different signature")
    kernel = filt.indices
    sizes = [factors[i].size for i in kernel]
    total = math.prod(sizes)
    if cap is not None and total > cap:
        raise ProductTooLarge(f"the product has {total} points, over the cap of {cap}")
    points = tuple(itertools.product(*(range(s) for s in sizes)))
    return factors, sig, kernel, sizes, points


def _funcs_consts(factors, sig, kernel, sizes, points):
    funcs = {}
    for name, fs in sig.functions:
        table = {}
        for args in itertools.product(range(len(points)), repeat=fs.arity):
            image = [factors[i].funcs[name][tuple(points[a][j] for a in args)] for j, i in enumerate(kernel)]
            table[args] = _mixed_radix(image, sizes)
        funcs[name] = table
    consts = {c: _mixed_radix([factors[i].consts[c] for i in kernel], sizes) for c in sig.constants}
    return funcs, consts


def reduced_product(factors, filt: FiniteFilter, cap: int | None = DEFAULT_CAP, check: bool = False) -> ReducedProduct:
    """The reduced product of finite metric structures.

    Distances and predicate values are maxima over kernel coordinates (the
    limsup along a principal filter); functions act coordinatewise.
    """
    factors, sig, kernel, sizes, points = _prepare(factors, filt, cap)
    ks = [factors[i] for i in kernel]
    labels = tuple(tuple(m.labels[a] for m, a in zip(ks, p)) for p in points)
    dist = tuple(
        tuple(max(m.dist[a][b] for m, a, b in zip(ks, p, q)) for q in points) for p in points
    )
    preds = {}
    for name, ps in sig.predicates:
        tables = [m.preds[name] for m in ks]
        preds[name] = {
            args: max(t[tuple(points[a][j] for a in args)] for j, t in enumerate(tables))
            for args in itertools.product(range(len(points)), repeat=ps.arity)
        }
    funcs, consts = _funcs_consts(factors, sig, kernel, sizes, points)
    result = FiniteMetricStructure(sig, labels, dist, preds, funcs, consts)
    if check:
        bad = validate_structure(result)
        if bad:
            raise ValueError(f"product fails validation: {bad[0].message}")
    return ReducedProduct(result, factors, filt, points)


def classical_reduced_product(factors, filt: FiniteFilter, cap: int | None = DEFAULT_CAP) -> ReducedProduct:
    """Reduced product of two-valued structures: a relation holds iff it holds on every kernel coordinate."""
    factors, sig, kernel, sizes, points = _prepare(factors, filt, cap)
    ks = [factors[i] for i in kernel]
    labels = tuple(tuple(m.labels[a] for m, a in zip(ks, p)) for p in points)
    relations = {}
    for name, ps in sig.predicates:
        rels = [m.relations[name] for m in ks]
        relations[name] = frozenset(
            args
            for args in itertools.product(range(len(points)), repeat=ps.arity)
            if all(tuple(points[a][j] for a in args) in r for j, r in enumerate(rels))
        )
    funcs, consts = _funcs_consts(factors, sig, kernel, sizes, points)
    return ReducedProduct(ClassicalStructure(sig, labels, relations, funcs, consts), factors, filt, points)
