"""Filters on finite index sets, and limits along them.

A proper filter on a finite set is principal, so it is stored as its kernel
(the intersection of all its members); the filter is every superset of the
kernel.  Ultimately periodic sequences stand in for the Frechet filter on
the natural numbers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..syntax.pl import rat


class ImproperFilter(ValueError):
    """The generators intersect in the empty set."""


@dataclass(frozen=True)
class FiniteFilter:
    n: int
    kernel: frozenset

    def __post_init__(self):
        object.__setattr__(self, "kernel", frozenset(self.kernel))
        if not self.kernel:
            raise ImproperFilter("the kernel of a proper filter is nonempty")
        if not all(isinstance(i, int) and 0 <= i < self.n for i in self.kernel):
            raise ValueError(f"kernel {sorted(self.kernel)} is not a subset of 0..{self.n - 1}")

    @property
    def indices(self) -> tuple:
        """Kernel indices in increasing order."""
        return tuple(sorted(self.kernel))

    @property
    def is_ultrafilter(self) -> bool:
        return len(self.kernel) == 1

    @property
    def is_trivial(self) -> bool:
        return len(self.kernel) == self.n

    def __contains__(self, subset) -> bool:
        return self.kernel <= frozenset(subset)

    def members(self):
        """Every member of the filter, as frozensets (exponential; for small n)."""
        rest = sorted(set(range(self.n)) - self.kernel)
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                yield self.kernel | frozenset(extra)


def filter_from_generators(sets, n: int) -> FiniteFilter:
    """The filter generated by ``sets`` on {0..n-1}; no generators gives the trivial filter."""
    full = frozenset(range(n))
    kernel = full
    for s in sets:
        s = frozenset(s)
        if not s <= full:
            raise ValueError(f"generator {sorted(s)} is not a subset of 0..{n - 1}")
        kernel &= s
    if not kernel:
        raise ImproperFilter("the generators have empty intersection")
    return FiniteFilter(n, kernel)


def trivial_filter(n: int) -> FiniteFilter:
    return FiniteFilter(n, frozenset(range(n)))


def principal_ultrafilter(n: int, i: int) -> FiniteFilter:
    return FiniteFilter(n, frozenset({i}))


def all_filters(n: int):
    """Every proper filter on {0..n-1}, ordered by kernel size then lexicographically."""
    for r in range(1, n + 1):
        for kernel in itertools.combinations(range(n), r):
            yield FiniteFilter(n, frozenset(kernel))


def limits_along(filt: FiniteFilter, values):
    """(limsup, liminf) of ``values`` along the filter: max and min over the kernel."""
    values = list(values)
    if len(values) != filt.n:
        raise ValueError(f"expected {filt.n} values, got {len(values)}")
    on_kernel = [rat(values[i]) for i in filt.indices]
    return max(on_kernel), min(on_kernel)


@dataclass(frozen=True)
class UPSeq:
    """The sequence preperiod + period + period + ... indexed by the naturals."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(rat(v) for v in self.preperiod))
        object.__setattr__(self, "period", tuple(rat(v) for v in self.period))
        if not self.period:
            raise ValueError("the period must be nonempty")

    def __getitem__(self, i: int):
        m = len(self.preperiod)
        if i < m:
            return self.preperiod[i]
        return self.period[(i - m) % len(self.period)]

    def prefix(self, length: int) -> list:
        return [self[i] for i in range(length)]

    def combine(self, other: "UPSeq", op) -> "UPSeq":
        """Pointwise op; the result is again ultimately periodic."""
        m = max(len(self.preperiod), len(other.preperiod))
        p = math.lcm(len(self.period), len(other.period))
        return UPSeq(
            [op(self[i], other[i]) for i in range(m)],
            [op(self[i], other[i]) for i in range(m, m + p)],
        )


def limits_frechet(seq: UPSeq):
    """(limsup, liminf) along the cofinite filter: max and min over the period."""
    return max(seq.period), min(seq.period)
