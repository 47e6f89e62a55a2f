"""Terms, continuous formulas, signatures and conditions.

Every node is an immutable dataclass; structural equality is ``==`` and
hashes are cached since formulas are used heavily as memo keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Union

from .pl import PLFunc, rat


def _cached_hash(self):
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
        return h


def node(cls):
    cls = dataclass(frozen=True)(cls)
    cls.__hash__ = _cached_hash
    return cls


# -- terms -------------------------------------------------------------------


@node
class Var:
    name: str


@node
class Const:
    name: str


@node
class App:
    fn: str
    args: tuple


Term = Union[Var, Const, App]


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return frozenset().union(*(term_vars(a) for a in t.args))
    return frozenset()


# -- continuous formulas -----------------------------------------------------


class Formula:
    """Base class for continuous formulas."""

    __slots__ = ()

    def __str__(self):
        from .printer import print_formula

        return print_formula(self)


@node
class Atomic(Formula):
    pred: str
    args: tuple = ()


@node
class Dist(Formula):
    left: Term
    right: Term


@node
class Num(Formula):
    """A rational constant, read as a 0-ary connective."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", rat(self.value))


@node
class Max(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("max needs at least two arguments")


@node
class Min(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("min needs at least two arguments")


@node
class Affine(Formula):
    """const + sum(coeffs[i] * args[i])."""

    coeffs: tuple
    const: Fraction
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(rat(c) for c in self.coeffs))
        object.__setattr__(self, "const", rat(self.const))
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.coeffs) != len(self.args) or not self.args:
            raise ValueError("affine needs one coefficient per argument and at least one argument")


@node
class UnaryPL(Formula):
    pl: PLFunc
    arg: Formula


@node
class Sup(Formula):
    var: str
    body: Formula


@node
class Inf(Formula):
    var: str
    body: Formula


@node
class HNode(Formula):
    """max(inf_var phi, sup_var min(D phi, delta, psi)) with delta the fixed point of D."""

    var: str
    D: PLFunc
    delta: Fraction
    phi: Formula
    psi: Formula

    def __post_init__(self):
        object.__setattr__(self, "delta", rat(self.delta))

    def desugar(self) -> Formula:
        return Max(
            (
                Inf(self.var, self.phi),
                Sup(self.var, Min((UnaryPL(self.D, self.phi), Num(self.delta), self.psi))),
            )
        )


def children(f: Formula) -> tuple:
    if isinstance(f, (Max, Min, Affine)):
        return f.args
    if isinstance(f, UnaryPL):
        return (f.arg,)
    if isinstance(f, (Sup, Inf)):
        return (f.body,)
    if isinstance(f, HNode):
        return (f.phi, f.psi)
    return ()


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max(depth(k) for k in kids) if kids else 0


def size(f: Formula) -> int:
    return 1 + sum(size(k) for k in children(f))


# -- signatures --------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSymbol:
    arity: int
    lipschitz: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "lipschitz", rat(self.lipschitz))


@dataclass(frozen=True)
class PredicateSymbol:
    arity: int
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)
    lipschitz: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("lo", "hi", "lipschitz"):
            object.__setattr__(self, name, rat(getattr(self, name)))


@dataclass(frozen=True)
class Signature:
    """A single-sorted metric signature.

    Continuity moduli are Lipschitz bounds (w.r.t. the max-metric on tuples);
    every predicate carries its value interval and the space has diameter at
    most ``dmax``.
    """

    constants: tuple = ()
    functions: tuple = ()  # sorted (name, FunctionSymbol) pairs
    predicates: tuple = ()  # sorted (name, PredicateSymbol) pairs
    dmax: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(sorted(self.constants)))
        object.__setattr__(self, "functions", tuple(sorted(dict(self.functions).items())))
        object.__setattr__(self, "predicates", tuple(sorted(dict(self.predicates).items())))
        object.__setattr__(self, "dmax", rat(self.dmax))
        names = list(self.constants) + [n for n, _ in self.functions] + [n for n, _ in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be unique")
        if "d" in names:
            raise ValueError("'d' is reserved for the metric")
        if self.dmax < 0:
            raise ValueError("dmax must be >= 0")
        for n, p in self.predicates:
            if p.lo > p.hi:
                raise ValueError(f"predicate {n}: lo > hi")
            if p.lipschitz < 0:
                raise ValueError(f"predicate {n}: negative Lipschitz bound")
        for n, fs in self.functions:
            if fs.lipschitz < 0:
                raise ValueError(f"function {n}: negative Lipschitz bound")

    @classmethod
    def build(cls, constants=(), functions: Mapping | None = None, predicates: Mapping | None = None, dmax=1):
        """Convenience constructor; symbol values may be arities or symbol objects."""
        funcs = {n: s if isinstance(s, FunctionSymbol) else FunctionSymbol(s) for n, s in (functions or {}).items()}
        preds = {n: s if isinstance(s, PredicateSymbol) else PredicateSymbol(s) for n, s in (predicates or {}).items()}
        return cls(tuple(constants), tuple(funcs.items()), tuple(preds.items()), dmax)

    @cached_property
    def function_map(self) -> dict:
        return dict(self.functions)

    @cached_property
    def predicate_map(self) -> dict:
        return dict(self.predicates)


# -- conditions --------------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    """The closed condition ``sentence <= threshold``."""

    sentence: Formula
    threshold: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "threshold", rat(self.threshold))
        from .analysis import free_vars

        if free_vars(self.sentence):
            raise ValueError(f"condition sentence has free variables: {sorted(free_vars(self.sentence))}")


@dataclass(frozen=True)
class Theory:
    conditions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "conditions", tuple(self.conditions))

    def __iter__(self):
        return iter(self.conditions)

    def __len__(self):
        return len(self.conditions)
