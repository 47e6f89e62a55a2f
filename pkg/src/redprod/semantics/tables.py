"""Vectorized exact evaluation of many formulas over a batch of equal-size structures.

Every subformula is evaluated once per batch into an integer array holding
its values scaled by a common denominator ``scale``.  Axis 0 runs over the
structures of the batch, the remaining axes over the free variables of the
subformula in sorted order.  Results are exact: an operation whose result
would leave the grid (1/scale)Z raises :class:`OffGrid`, and callers fall
back to :func:`eval_formula`.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from ..syntax import classical as C
from ..syntax.ast import Affine, App, Atomic, Const, Dist, HNode, Inf, Max, Min, Num, Sup, UnaryPL, Var, children


class OffGrid(ArithmeticError):
    """A value is not a multiple of 1/scale."""


def _denominators(structures):
    for m in structures:
        for row in m.dist:
            for v in row:
                yield v.denominator
        for table in m.preds.values():
            for v in table.values():
                yield v.denominator


class _Batch:
    def __init__(self, structures):
        structures = list(structures)
        if not structures:
            raise ValueError("empty batch")
        n = structures[0].size
        if any(m.size != n for m in structures):
            raise ValueError("all structures in a batch must have the same size")
        self.structures = structures
        self.S = len(structures)
        self.n = n
        self.sig = structures[0].signature
        self._sidx = {}
        self._cache = {}
        self._tcache = {}
        self.funcs = {
            name: np.array([[m.funcs[name][t] for t in _tuples(n, fs.arity)] for m in structures], dtype=np.int64).reshape(
                (self.S,) + (n,) * fs.arity
            )
            for name, fs in self.sig.functions
        }
        self.consts = {c: np.array([m.consts[c] for m in structures], dtype=np.int64) for c in self.sig.constants}

    def clear(self):
        """Drop cached subformula tables."""
        self._cache.clear()
        self._tcache.clear()

    def sidx(self, k):
        if k not in self._sidx:
            self._sidx[k] = np.arange(self.S).reshape((self.S,) + (1,) * k)
        return self._sidx[k]

    @staticmethod
    def align(arr, have, want):
        """Reshape ``arr`` (axes = batch + ``have``) to broadcast against batch + ``want``."""
        if have == want:
            return arr
        shape = [arr.shape[0]]
        pos = {v: i for i, v in enumerate(have)}
        for v in want:
            shape.append(arr.shape[1 + pos[v]] if v in pos else 1)
        return arr.reshape(shape)

    def term(self, t):
        """(vars, index array) for a term."""
        hit = self._tcache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            out = ((t.name,), np.arange(self.n, dtype=np.int64).reshape(1, self.n))
        elif isinstance(t, Const):
            out = ((), self.consts[t.name])
        elif isinstance(t, App):
            out = self.lookup(self.funcs[t.fn], t.args)
        else:
            raise TypeError(f"not a term: {t!r}")
        self._tcache[t] = out
        return out

    def lookup(self, table, args):
        parts = [self.term(a) for a in args]
        vs = tuple(sorted(set().union(*(p[0] for p in parts))))
        idx = [self.align(a, v, vs) for v, a in parts]
        return vs, table[(self.sidx(len(vs)),) + tuple(idx)]

    def reduce(self, vs, arr, var, op):
        if var not in vs:
            return vs, arr
        i = vs.index(var)
        arr = np.broadcast_to(arr, (self.S,) + (self.n,) * len(vs)) if arr.shape[1 + i] == 1 else arr
        return vs[:i] + vs[i + 1 :], op(arr, axis=1 + i)

    def combine(self, parts, op):
        vs = tuple(sorted(set().union(*(p[0] for p in parts))))
        arrs = [self.align(a, v, vs) for v, a in parts]
        out = arrs[0]
        for a in arrs[1:]:
            out = op(out, a)
        return vs, out


def _tuples(n, k):
    return itertools.product(range(n), repeat=k)


class BatchEvaluator(_Batch):
    """Continuous formulas over a batch of finite metric structures."""

    def __init__(self, structures, scale: int | None = None):
        super().__init__(structures)
        if scale is None:
            scale = math.lcm(1, *set(_denominators(self.structures)))
        self.scale = scale
        self._grid = {}
        n, S = self.n, self.S
        self.dist = np.array([[self._scaled(v) for row in m.dist for v in row] for m in self.structures], dtype=np.int64).reshape(S, n, n)
        self.preds = {
            name: np.array(
                [[self._scaled(m.preds[name][t]) for t in _tuples(n, ps.arity)] for m in self.structures], dtype=np.int64
            ).reshape((S,) + (n,) * ps.arity)
            for name, ps in self.sig.predicates
        }

    def _scaled(self, q) -> int:
        # structure values repeat a lot; memoize the exact conversion
        hit = self._grid.get(q)
        if hit is None:
            hit = self._grid[q] = self._convert(q)
        return hit

    def _convert(self, q) -> int:
        v = Fraction(q) * self.scale
        if v.denominator != 1:
            raise OffGrid(f"{q} is not a multiple of 1/{self.scale}")
        return int(v)

    def _pl(self, pl, arr):
        keys, inverse = np.unique(arr, return_inverse=True)
        image = np.array([self._scaled(pl(Fraction(int(k), self.scale))) for k in keys], dtype=np.int64)
        return image[inverse].reshape(arr.shape)

    def table(self, f):
        """(sorted free variables, scaled value array) for formula f."""
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        out = self._table(f)
        self._cache[f] = out
        return out

    def _table(self, f):
        if isinstance(f, Atomic):
            if not f.args:
                return (), self.preds[f.pred]
            return self.lookup(self.preds[f.pred], f.args)
        if isinstance(f, Dist):
            return self.lookup(self.dist, (f.left, f.right))
        if isinstance(f, Num):
            return (), np.full((1,), self._scaled(f.value), dtype=np.int64)
        if isinstance(f, Max):
            return self.combine([self.table(a) for a in f.args], np.maximum)
        if isinstance(f, Min):
            return self.combine([self.table(a) for a in f.args], np.minimum)
        if isinstance(f, Affine):
            terms = []
            for c, a in zip(f.coeffs, f.args):
                vs, arr = self.table(a)
                prod = arr * c.numerator
                if c.denominator != 1:
                    if np.any(prod % c.denominator):
                        raise OffGrid(f"coefficient {c} leaves the grid")
                    prod = prod // c.denominator
                terms.append((vs, prod))
            vs, out = self.combine(terms, np.add)
            return vs, out + self._scaled(f.const)
        if isinstance(f, UnaryPL):
            vs, arr = self.table(f.arg)
            return vs, self._pl(f.pl, arr)
        if isinstance(f, Sup):
            return self.reduce(*self.table(f.body), f.var, np.max)
        if isinstance(f, Inf):
            return self.reduce(*self.table(f.body), f.var, np.min)
        if isinstance(f, HNode):
            pv, parr = self.table(f.phi)
            low = self.reduce(pv, parr, f.var, np.min)
            dphi = (pv, self._pl(f.D, parr))
            delta = ((), np.full((1,), self._scaled(f.delta), dtype=np.int64))
            slot = self.combine([dphi, delta, self.table(f.psi)], np.minimum)
            high = self.reduce(*slot, f.var, np.max)
            return self.combine([low, high], np.maximum)
        raise TypeError(f"not a formula: {f!r}")

    def values(self, f):
        """Per-structure value of a sentence, as Fractions."""
        vs, arr = self.table(f)
        if vs:
            raise ValueError(f"formula has free variables {vs}")
        arr = np.broadcast_to(arr, (self.S,))
        return [Fraction(int(v), self.scale) for v in arr]

    def scaled_values(self, f):
        """Per-structure scaled values of a sentence as an int array of shape (S,)."""
        vs, arr = self.table(f)
        if vs:
            raise ValueError(f"formula has free variables {vs}")
        return np.broadcast_to(arr, (self.S,))


class ClassicalBatch(_Batch):
    """Classical formulas over a batch of equal-size two-valued structures."""

    def __init__(self, structures):
        super().__init__(structures)
        n, S = self.n, self.S
        self.rels = {
            name: np.array([[t in m.relations[name] for t in _tuples(n, ps.arity)] for m in self.structures], dtype=bool).reshape(
                (S,) + (n,) * ps.arity
            )
            for name, ps in self.sig.predicates
        }

    def table(self, f):
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        out = self._table(f)
        self._cache[f] = out
        return out

    def _table(self, f):
        if isinstance(f, C.Atom):
            if not f.args:
                return (), self.rels[f.rel]
            return self.lookup(self.rels[f.rel], f.args)
        if isinstance(f, C.Equal):
            (lv, la), (rv, ra) = self.term(f.left), self.term(f.right)
            vs = tuple(sorted(set(lv) | set(rv)))
            return vs, self.align(la, lv, vs) == self.align(ra, rv, vs)
        if isinstance(f, C.Not):
            vs, arr = self.table(f.arg)
            return vs, ~arr
        if isinstance(f, C.And):
            return self.combine([self.table(f.left), self.table(f.right)], np.logical_and)
        if isinstance(f, C.Or):
            return self.combine([self.table(f.left), self.table(f.right)], np.logical_or)
        if isinstance(f, C.Implies):
            lv, la = self.table(f.left)
            return self.combine([(lv, ~la), self.table(f.right)], np.logical_or)
        if isinstance(f, C.Exists):
            return self.reduce(*self.table(f.body), f.var, np.any)
        if isinstance(f, C.Forall):
            return self.reduce(*self.table(f.body), f.var, np.all)
        raise TypeError(f"not a classical formula: {f!r}")

    def truth(self, f, free=()):
        """Boolean array of shape (S, n, ..., n) over the variables ``free`` (sorted)."""
        vs, arr = self.table(f)
        want = tuple(sorted(free))
        if not set(vs) <= set(want):
            raise ValueError(f"free variables {vs} not among {want}")
        return np.broadcast_to(self.align(arr, vs, want), (self.S,) + (self.n,) * len(want))


def formula_denominators(f):
    """Denominators of every rational constant in f (numbers, h-node levels, PL data)."""
    out = set()

    def walk(g):
        if isinstance(g, Num):
            out.add(g.value.denominator)
        elif isinstance(g, Affine):
            out.add(g.const.denominator)
        elif isinstance(g, (UnaryPL, HNode)):
            pl = g.pl if isinstance(g, UnaryPL) else g.D
            out.update(y.denominator for _, y in pl.breakpoints)
            if isinstance(g, HNode):
                out.add(g.delta.denominator)
        for c in children(g):
            walk(c)

    walk(f)
    return out


def value_table(m, f, variables=None) -> dict:
    """{assignment tuple: value} over all assignments of ``variables`` (default: sorted free variables).

    Uses the vectorized evaluator and falls back to exact recursive evaluation
    when a value leaves the integer grid.
    """
    from ..syntax.analysis import free_vars
    from .evaluate import eval_formula

    fv = tuple(sorted(free_vars(f)))
    variables = fv if variables is None else tuple(variables)
    if not set(fv) <= set(variables):
        raise ValueError(f"free variables {fv} not among {variables}")
    points = list(itertools.product(range(m.size), repeat=len(variables)))
    try:
        scale = math.lcm(1, *set(_denominators([m])), *formula_denominators(f))
        ev = BatchEvaluator([m], scale)
        vs, arr = ev.table(f)
        want = tuple(sorted(variables))
        full = np.broadcast_to(ev.align(arr, vs, want), (1,) + (m.size,) * len(want))[0]
        pos = [variables.index(w) for w in want]
        return {a: Fraction(int(full[tuple(a[p] for p in pos)]), scale) for a in points}
    except OffGrid:
        return {a: eval_formula(m, f, dict(zip(variables, a))) for a in points}
