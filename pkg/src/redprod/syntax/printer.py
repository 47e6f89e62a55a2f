"""Canonical text rendering; output re-parses to the same AST."""

from __future__ import annotations

from fractions import Fraction

from . import classical as C
from .ast import Affine, App, Atomic, Const, Dist, HNode, Inf, Max, Min, Num, Sup, UnaryPL, Var
from .pl import PLFunc


def print_rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_term(t) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return f"{t.fn}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def print_pl(pl: PLFunc) -> str:
    pts = ",".join(f"({print_rat(x)},{print_rat(y)})" for x, y in pl.breakpoints)
    out = "pl{" + pts + "}"
    if pl.left_slope != 0 or pl.right_slope != 0:
        out += f"slopes[{print_rat(pl.left_slope)},{print_rat(pl.right_slope)}]"
    return out


def print_formula(f) -> str:
    if isinstance(f, Atomic):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(print_term(a) for a in f.args)})"
    if isinstance(f, Dist):
        return f"d({print_term(f.left)}, {print_term(f.right)})"
    if isinstance(f, Num):
        return print_rat(f.value)
    if isinstance(f, (Max, Min)):
        name = "max" if isinstance(f, Max) else "min"
        return f"{name}({', '.join(print_formula(a) for a in f.args)})"
    if isinstance(f, Affine):
        coeffs = ", ".join(print_rat(c) for c in f.coeffs)
        return f"affine[{coeffs}; {print_rat(f.const)}]({', '.join(print_formula(a) for a in f.args)})"
    if isinstance(f, UnaryPL):
        return f"{print_pl(f.pl)}({print_formula(f.arg)})"
    if isinstance(f, Sup):
        return f"sup {f.var}. {print_formula(f.body)}"
    if isinstance(f, Inf):
        return f"inf {f.var}. {print_formula(f.body)}"
    if isinstance(f, HNode):
        return f"h[{f.var}; {print_pl(f.D)}]({print_formula(f.phi)}, {print_formula(f.psi)})"
    raise TypeError(f"not a formula: {f!r}")


def _cwrap(f) -> str:
    s = print_classical(f)
    return s if isinstance(f, (C.Atom, C.Equal, C.Not)) else f"({s})"


def print_classical(f) -> str:
    if isinstance(f, C.Atom):
        if not f.args:
            return f.rel
        return f"{f.rel}({', '.join(print_term(a) for a in f.args)})"
    if isinstance(f, C.Equal):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, C.Not):
        inner = f"({print_classical(f.arg)})" if isinstance(f.arg, C.Equal) else _cwrap(f.arg)
        return "~" + inner
    if isinstance(f, C.And):
        return f"{_cwrap(f.left)} & {_cwrap(f.right)}"
    if isinstance(f, C.Or):
        return f"{_cwrap(f.left)} | {_cwrap(f.right)}"
    if isinstance(f, C.Implies):
        return f"{_cwrap(f.left)} -> {_cwrap(f.right)}"
    if isinstance(f, C.Exists):
        return f"exists {f.var}. {print_classical(f.body)}"
    if isinstance(f, C.Forall):
        return f"forall {f.var}. {print_classical(f.body)}"
    raise TypeError(f"not a classical formula: {f!r}")
