"""Exact piecewise-linear rational maps, used as unary connectives."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

NONDECREASING = "nondecreasing"
NONINCREASING = "nonincreasing"
CONSTANT = "constant"
NEITHER = "neither"


def rat(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction (floats are refused)."""
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a Fraction or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class PLFunc:
    """A continuous piecewise-linear map Q -> Q.

    The map interpolates linearly between ``breakpoints`` and extends to the
    left/right of the outermost breakpoints with ``left_slope``/``right_slope``.
    Instances are always stored in canonical form (only genuine kinks are kept,
    an affine map keeps the single breakpoint at x = 0), so ``==`` is
    extensional equality.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    left_slope: Fraction = Fraction(0)
    right_slope: Fraction = Fraction(0)

    def __post_init__(self):
        pts = tuple((rat(x), rat(y)) for x, y in self.breakpoints)
        if not pts:
            raise ValueError("a PL function needs at least one breakpoint")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise ValueError("breakpoint x-coordinates must be strictly increasing")
        ls, rs = rat(self.left_slope), rat(self.right_slope)
        pts, ls, rs = _canonical(pts, ls, rs)
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "left_slope", ls)
        object.__setattr__(self, "right_slope", rs)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], left_slope=0, right_slope=0) -> "PLFunc":
        return cls(tuple((rat(x), rat(y)) for x, y in points), rat(left_slope), rat(right_slope))

    @classmethod
    def affine(cls, slope, intercept) -> "PLFunc":
        slope = rat(slope)
        return cls(((Fraction(0), rat(intercept)),), slope, slope)

    @classmethod
    def identity(cls) -> "PLFunc":
        return cls.affine(1, 0)

    @classmethod
    def constant(cls, value) -> "PLFunc":
        return cls.affine(0, value)

    @classmethod
    def clamp_affine(cls, slope, intercept, lo, hi) -> "PLFunc":
        """t -> max(lo, min(hi, slope*t + intercept)) for slope > 0 and lo <= hi."""
        slope, intercept, lo, hi = rat(slope), rat(intercept), rat(lo), rat(hi)
        if slope <= 0 or lo > hi:
            raise ValueError("clamp_affine needs slope > 0 and lo <= hi")
        if lo == hi:
            return cls.constant(lo)
        return cls((((lo - intercept) / slope, lo), ((hi - intercept) / slope, hi)), 0, 0)

    def __call__(self, t) -> Fraction:
        return pl_eval(self, t)

    def slopes(self) -> list[Fraction]:
        """Slopes of every piece, left ray first, right ray last."""
        inner = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.breakpoints, self.breakpoints[1:])]
        return [self.left_slope, *inner, self.right_slope]

    def lipschitz(self) -> Fraction:
        return max(abs(s) for s in self.slopes())

    def compose(self, inner: "PLFunc") -> "PLFunc":
        """The map t -> self(inner(t))."""
        xs = {x for x, _ in inner.breakpoints}
        # preimages under inner of self's breakpoints, piece by piece
        pieces = _pieces(inner)
        for bx, _ in self.breakpoints:
            for lo, hi, slope, x0, y0 in pieces:
                if slope == 0:
                    continue
                t = x0 + (bx - y0) / slope
                if (lo is None or t >= lo) and (hi is None or t <= hi):
                    xs.add(t)
        xs = sorted(xs)
        pts = tuple((x, self(inner(x))) for x in xs)
        ls = self._outer_slope(inner.left_slope, left=True)
        rs = self._outer_slope(inner.right_slope, left=False)
        return PLFunc(pts, ls * inner.left_slope, rs * inner.right_slope)

    def _outer_slope(self, inner_slope: Fraction, left: bool) -> Fraction:
        # slope of self far out in the direction the inner ray heads
        if inner_slope == 0:
            return Fraction(0)
        goes_up = (inner_slope > 0) != left
        return self.right_slope if goes_up else self.left_slope


def _pieces(f: PLFunc):
    """(lo, hi, slope, anchor_x, anchor_y) for every piece; None marks an open end."""
    pts = f.breakpoints
    out = [(None, pts[0][0], f.left_slope, pts[0][0], pts[0][1])]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        out.append((x0, x1, (y1 - y0) / (x1 - x0), x0, y0))
    out.append((pts[-1][0], None, f.right_slope, pts[-1][0], pts[-1][1]))
    return out


def _canonical(pts, ls, rs):
    slopes = [ls]
    slopes += [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]
    slopes.append(rs)
    kinks = tuple(p for i, p in enumerate(pts) if slopes[i] != slopes[i + 1])
    if kinks:
        return kinks, ls, rs
    # affine: anchor at x = 0
    x0, y0 = pts[0]
    return ((Fraction(0), y0 - ls * x0),), ls, rs


def pl_eval(pl: PLFunc, t) -> Fraction:
    t = rat(t)
    pts = pl.breakpoints
    x0, y0 = pts[0]
    if t <= x0:
        return y0 + pl.left_slope * (t - x0)
    xn, yn = pts[-1]
    if t >= xn:
        return yn + pl.right_slope * (t - xn)
    for (a, fa), (b, fb) in zip(pts, pts[1:]):
        if t <= b:
            return fa + (fb - fa) * (t - a) / (b - a)
    raise AssertionError("unreachable")


def pl_monotonicity(pl: PLFunc) -> str:
    slopes = pl.slopes()
    if all(s == 0 for s in slopes):
        return CONSTANT
    if all(s >= 0 for s in slopes):
        return NONDECREASING
    if all(s <= 0 for s in slopes):
        return NONINCREASING
    return NEITHER


def is_nondecreasing(pl: PLFunc) -> bool:
    return pl_monotonicity(pl) in (NONDECREASING, CONSTANT)


def is_nonincreasing(pl: PLFunc) -> bool:
    return pl_monotonicity(pl) in (NONINCREASING, CONSTANT)


def pl_fixed_point(pl: PLFunc) -> Fraction:
    """The unique t with pl(t) = t, for nonincreasing pl.

    g(t) = t - pl(t) is strictly increasing with slope >= 1 on every piece, so
    the root is located by a scan over the pieces and solved exactly.
    """
    if not is_nonincreasing(pl):
        raise ValueError("fixed point requested for a connective that is not nonincreasing")
    for lo, hi, slope, ax, ay in _pieces(pl):
        # on this piece g(t) = t - (ay + slope*(t - ax))
        gslope = 1 - slope
        t = (ay - slope * ax) / gslope
        if (lo is None or t >= lo) and (hi is None or t <= hi):
            return t
    raise AssertionError("no fixed point found; g should be surjective")


# Connectives that recur throughout the package.
ONE_MINUS = PLFunc.from_points([(0, 1), (1, 0)])
IDENTITY = PLFunc.identity()
POSITIVE_PART = PLFunc.from_points([(0, 0)], 0, 1)
