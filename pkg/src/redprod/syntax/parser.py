"""Recursive-descent parsers for the continuous and classical surface syntax.

Continuous::

    formula := atom | "d(" term "," term ")" | "max(" formula {"," formula} ")"
             | "min(" ... ")" | "affine[" rat {"," rat} ";" rat "](" formula {"," formula} ")"
             | pl "(" formula ")" | "sup" ident "." formula | "inf" ident "." formula
             | "h[" ident ";" pl "](" formula "," formula ")" | rat
    pl      := "pl{" point {"," point} "}" ["slopes[" rat "," rat "]"]

Classical: ``~ & | -> = != exists x. forall x.`` with the usual precedence
(``->`` associates to the right, quantifiers scope as far right as possible).
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import classical as C
from .ast import (
    Affine,
    App,
    Atomic,
    Const,
    Dist,
    HNode,
    Inf,
    Max,
    Min,
    Num,
    Signature,
    Sup,
    UnaryPL,
    Var,
)
from .pl import PLFunc, is_nonincreasing, pl_fixed_point


class FormulaError(ValueError):
    """Raised for malformed, ill-typed or ill-scoped formula text."""

    def __init__(self, message, pos=None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


class UnknownSymbol(FormulaError):
    pass


class ArityMismatch(FormulaError):
    pass


class MonotonicityError(FormulaError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>\d+)|(?P<op>->|!=|[(){}\[\],;./\-~&|=]))"
)

KEYWORDS = {"sup", "inf", "max", "min", "affine", "pl", "h", "d", "slopes", "exists", "forall"}


def tokenize(text: str):
    toks, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        # arities inferred in permissive (signature-free) mode
        self.seen_preds: dict[str, int] = {}
        self.seen_funcs: dict[str, int] = {}

    # -- token helpers ----------------------------------------------------

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value, k=0):
        kind, v, _ = self.peek(k)
        return kind in ("op", "name") and v == value

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.next()
        if v != value or kind not in ("op", "name"):
            what = "end of input" if kind == "eof" else repr(v)
            raise FormulaError(f"expected {value!r}, found {what}", pos)

    def name(self):
        kind, v, pos = self.next()
        if kind != "name":
            raise FormulaError(f"expected an identifier, found {v!r}" if v else "unexpected end of input", pos)
        return v, pos

    def done(self):
        kind, v, pos = self.peek()
        if kind != "eof":
            raise FormulaError(f"trailing input {v!r}", pos)

    # -- shared pieces ----------------------------------------------------

    def rat(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        kind, v, pos = self.next()
        if kind != "int":
            raise FormulaError(f"expected a rational, found {v!r}", pos)
        q = Fraction(int(v))
        if self.at("/"):
            self.next()
            kind, d, pos = self.next()
            if kind != "int" or int(d) == 0:
                raise FormulaError("expected a positive denominator", pos)
            q /= int(d)
        return -q if neg else q

    def pl(self) -> PLFunc:
        self.expect("pl")
        self.expect("{")
        pts = [self.point()]
        while self.at(","):
            self.next()
            pts.append(self.point())
        self.expect("}")
        ls = rs = Fraction(0)
        if self.at("slopes"):
            self.next()
            self.expect("[")
            ls = self.rat()
            self.expect(",")
            rs = self.rat()
            self.expect("]")
        try:
            return PLFunc(tuple(pts), ls, rs)
        except ValueError as e:
            raise FormulaError(str(e), self.peek()[2]) from None

    def point(self):
        self.expect("(")
        x = self.rat()
        self.expect(",")
        y = self.rat()
        self.expect(")")
        return (x, y)

    def _check_symbol(self, table_name, name, arity, pos):
        if self.sig is None:
            seen = self.seen_preds if table_name == "predicate" else self.seen_funcs
            if seen.setdefault(name, arity) != arity:
                raise ArityMismatch(f"{table_name} {name} used with arities {seen[name]} and {arity}", pos)
            return
        table = self.sig.predicate_map if table_name == "predicate" else self.sig.function_map
        if name not in table:
            raise UnknownSymbol(f"unknown {table_name} symbol {name!r}", pos)
        if table[name].arity != arity:
            raise ArityMismatch(f"{table_name} {name} expects {table[name].arity} arguments, got {arity}", pos)

    def term(self, check=True):
        name, pos = self.name()
        if name in KEYWORDS:
            raise FormulaError(f"keyword {name!r} cannot be a term", pos)
        if self.at("("):
            args = self.term_args(check)
            if check:
                self._check_symbol("function", name, len(args), pos)
            return App(name, args)
        if self.sig is not None and name in self.sig.constants:
            return Const(name)
        if self.sig is not None and name in self.sig.function_map:
            if check:
                self._check_symbol("function", name, 0, pos)
            return App(name, ())
        return Var(name)

    def term_args(self, check=True):
        self.expect("(")
        args = [self.term(check)]
        while self.at(","):
            self.next()
            args.append(self.term(check))
        self.expect(")")
        return tuple(args)

    # -- continuous -------------------------------------------------------

    def formula(self):
        kind, v, pos = self.peek()
        if kind == "int" or (kind == "op" and v == "-"):
            return Num(self.rat())
        if kind != "name":
            raise FormulaError(f"expected a formula, found {v!r}" if v else "unexpected end of input", pos)
        if v in ("sup", "inf"):
            self.next()
            var, vpos = self.name()
            if var in KEYWORDS:
                raise FormulaError(f"keyword {var!r} cannot be bound", vpos)
            self.expect(".")
            body = self.formula()
            return Sup(var, body) if v == "sup" else Inf(var, body)
        if v in ("max", "min"):
            self.next()
            args = self.formula_args()
            if len(args) < 2:
                raise FormulaError(f"{v} needs at least two arguments", pos)
            return Max(args) if v == "max" else Min(args)
        if v == "affine":
            self.next()
            self.expect("[")
            coeffs = [self.rat()]
            while self.at(","):
                self.next()
                coeffs.append(self.rat())
            self.expect(";")
            const = self.rat()
            self.expect("]")
            args = self.formula_args()
            if len(args) != len(coeffs):
                raise ArityMismatch(f"affine has {len(coeffs)} coefficients but {len(args)} arguments", pos)
            return Affine(tuple(coeffs), const, args)
        if v == "pl":
            pl = self.pl()
            self.expect("(")
            arg = self.formula()
            self.expect(")")
            return UnaryPL(pl, arg)
        if v == "h" and self.at("[", 1):
            self.next()
            self.expect("[")
            var, _ = self.name()
            self.expect(";")
            D = self.pl()
            self.expect("]")
            self.expect("(")
            phi = self.formula()
            self.expect(",")
            psi = self.formula()
            self.expect(")")
            if not is_nonincreasing(D):
                raise MonotonicityError("the connective of an h-node must be nonincreasing", pos)
            return HNode(var, D, pl_fixed_point(D), phi, psi)
        if v == "d" and self.at("(", 1):
            self.next()
            self.expect("(")
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(")")
            return Dist(left, right)
        if v in KEYWORDS:
            raise FormulaError(f"misplaced keyword {v!r}", pos)
        self.next()
        args = self.term_args() if self.at("(") else ()
        self._check_symbol("predicate", v, len(args), pos)
        return Atomic(v, args)

    def formula_args(self):
        self.expect("(")
        args = [self.formula()]
        while self.at(","):
            self.next()
            args.append(self.formula())
        self.expect(")")
        return tuple(args)

    # -- classical --------------------------------------------------------

    def cformula(self):
        left = self.cdisj()
        if self.at("->"):
            self.next()
            return C.Implies(left, self.cformula())
        return left

    def cdisj(self):
        out = self.cconj()
        while self.at("|"):
            self.next()
            out = C.Or(out, self.cconj())
        return out

    def cconj(self):
        out = self.cunary()
        while self.at("&"):
            self.next()
            out = C.And(out, self.cunary())
        return out

    def cunary(self):
        if self.at("~"):
            self.next()
            return C.Not(self.cunary())
        if self.at("exists") or self.at("forall"):
            q = self.next()[1]
            var, _ = self.name()
            self.expect(".")
            body = self.cformula()
            return C.Exists(var, body) if q == "exists" else C.Forall(var, body)
        if self.at("("):
            self.next()
            f = self.cformula()
            self.expect(")")
            return f
        return self.catom()

    def catom(self):
        kind, v, pos = self.peek()
        if kind != "name":
            raise FormulaError(f"expected a formula, found {v!r}" if v else "unexpected end of input", pos)
        if v in KEYWORDS:
            raise FormulaError(f"misplaced keyword {v!r}", pos)
        # equality if a term is followed by = or !=
        save = self.i
        self.term(check=False)
        if self.at("=") or self.at("!="):
            self.i = save
            t = self.term()
            op = self.next()[1]
            eq = C.Equal(t, self.term())
            return eq if op == "=" else C.Not(eq)
        self.i = save
        self.next()
        args = self.term_args() if self.at("(") else ()
        self._check_symbol("predicate", v, len(args), pos)
        return C.Atom(v, args)


def parse_formula(text: str, signature: Signature | None = None):
    """Parse continuous formula text; with ``signature=None`` symbols are accepted as seen."""
    p = _Parser(text, signature)
    f = p.formula()
    p.done()
    return f


def parse_classical(text: str, signature: Signature | None = None):
    p = _Parser(text, signature)
    f = p.cformula()
    p.done()
    return f


def parse_pl(text: str) -> PLFunc:
    p = _Parser(text, None)
    f = p.pl()
    p.done()
    return f


def parse_rat(text: str) -> Fraction:
    p = _Parser(text, None)
    q = p.rat()
    p.done()
    return q
