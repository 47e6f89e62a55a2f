"""Bounded search for a Palyutin sentence separating two structures."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from ..fragments.classify import PALYUTIN
from ..semantics.evaluate import eval_formula
from ..semantics.tables import BatchEvaluator, OffGrid, _denominators
from ..syntax.pl import is_nonincreasing, pl_fixed_point
from .enumeration import DEFAULT_BASIS, enumerate_fragment_sentences


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    depth: int
    checked: int
    sentence: object = None
    value_m: Fraction | None = None
    value_n: Fraction | None = None


class _Values:
    def __init__(self, m, basis):
        scale = math.lcm(1, *set(_denominators([m])))
        for D in basis:
            scale = math.lcm(scale, *formula_denominators_pl(D))
        self.m = m
        self.ev = BatchEvaluator([m], scale)

    def __call__(self, f) -> Fraction:
        try:
            return self.ev.values(f)[0]
        except OffGrid:
            return eval_formula(self.m, f)


def formula_denominators_pl(pl):
    out = {y.denominator for _, y in pl.breakpoints} | {x.denominator for x, _ in pl.breakpoints}
    if is_nonincreasing(pl):
        out.add(pl_fixed_point(pl).denominator)
    return out


def palyutin_equiv_bounded(M, N, depth: int, basis=DEFAULT_BASIS, variables=("x",)) -> EquivalenceResult:
    """Compare M and N on every enumerated Palyutin sentence up to ``depth``.

    Returns the first sentence (in enumeration order) on which they differ,
    or an 'equivalent up to depth' verdict.  Without a nonincreasing
    connective in the basis no h-nodes are built and a warning is issued.
    """
    if M.signature != N.signature:
        raise ValueError("structures have different signatures")
    if not any(is_nonincreasing(D) for D in basis):
        warnings.warn("basis has no nonincreasing connective; enumerating without h-nodes", stacklevel=2)
    vm, vn = _Values(M, basis), _Values(N, basis)
    checked = 0
    for s in enumerate_fragment_sentences(M.signature, PALYUTIN, depth, basis, variables):
        checked += 1
        a, b = vm(s), vn(s)
        if a != b:
            return EquivalenceResult(False, depth, checked, s, a, b)
    return EquivalenceResult(True, depth, checked)
