import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from redprod.semantics import enumerate_structures, eval_formula
from redprod.syntax import (
    IDENTITY,
    ONE_MINUS,
    POSITIVE_PART,
    Affine,
    ArityMismatch,
    Atomic,
    Const,
    Dist,
    FormulaError,
    HNode,
    Inf,
    Max,
    Min,
    MonotonicityError,
    Num,
    PredicateSymbol,
    Signature,
    Sup,
    UnaryPL,
    UnknownSymbol,
    Var,
    formula_bounds,
    free_vars,
    parse_classical,
    parse_formula,
    print_classical,
    print_formula,
    substitute,
)
from redprod.syntax import classical as C

x, y = Var("x"), Var("y")
P, Q = Atomic("P", (x,)), Atomic("Q", (x,))


def test_parse_max():
    assert parse_formula("max(P(x), Q(x))") == Max((P, Q))


def test_parse_h_node():
    f = parse_formula("h[x; pl{(0,1),(1,0)}](P(x), Q(x))")
    assert f == HNode("x", ONE_MINUS, Fraction(1, 2), P, Q)


def test_unbalanced_parenthesis():
    with pytest.raises(FormulaError) as e:
        parse_formula("sup x. d(x, x")
    assert e.value.pos is not None


def test_print_examples():
    assert print_formula(Max((P, Q))) == "max(P(x), Q(x))"
    assert print_formula(HNode("x", ONE_MINUS, Fraction(1, 2), P, Q)) == "h[x; pl{(0,1),(1,0)}](P(x), Q(x))"
    assert print_formula(Affine((Fraction(1, 2),), -3, (P,))) == "affine[1/2; -3](P(x))"


def test_free_vars_examples():
    Pxy = Atomic("P", (x, y))
    assert free_vars(Sup("x", Pxy)) == {"y"}
    assert free_vars(HNode("x", ONE_MINUS, Fraction(1, 2), P, Atomic("Q", (x, y)))) == {"y"}
    assert free_vars(Pxy) == {"x", "y"}


def test_substitution_examples():
    c = Const("c")
    assert substitute(P, "x", c) == Atomic("P", (c,))
    renamed = substitute(Sup("x", Atomic("P", (x, y))), "y", x)
    assert renamed == Sup("x'", Atomic("P", (Var("x'"), x)))
    bound = Sup("x", P)
    assert substitute(bound, "x", c) == bound


def test_signature_checks():
    sig = Signature.build(constants=("c",), predicates={"P": 1})
    with pytest.raises(UnknownSymbol):
        parse_formula("R(x)", sig)
    with pytest.raises(ArityMismatch):
        parse_formula("P(x, x)", sig)
    with pytest.raises(MonotonicityError):
        parse_formula("h[x; pl{(0,0),(1,1)}](P(x), P(x))", sig)
    with pytest.raises(ValueError):
        Signature.build(predicates={"d": 2})


def test_bounds_examples():
    sig = Signature.build(predicates={"P": 1})
    assert formula_bounds(P, sig) == (0, 1)
    assert formula_bounds(Affine((-1,), 2, (P,)), sig) == (1, 2)


def test_bounds_of_max_against_exhaustive_evaluation():
    sig = Signature.build(predicates={"P": PredicateSymbol(1, 0, 1), "Q": PredicateSymbol(1, 2, 3)})
    f = Max((P, Q))
    assert formula_bounds(f, sig) == (2, 3)
    seen = set()
    for m in enumerate_structures(sig, sizes=(1, 2), values=(0, 1, 2, 3)):
        for a in range(m.size):
            seen.add(eval_formula(m, f, {"x": a}))
    assert min(seen) == 2 and max(seen) == 3


# -- round trip -------------------------------------------------------------

variables = st.sampled_from(["x", "y", "z"])
terms = variables.map(Var) | st.just(Const("c"))
small_rats = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def _formulas():
    base = st.one_of(
        terms.map(lambda t: Atomic("P", (t,))),
        st.tuples(terms, terms).map(lambda p: Dist(*p)),
        small_rats.map(Num),
    )

    def extend(inner):
        return st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda a: Max(tuple(a))),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: Min(tuple(a))),
            st.tuples(st.lists(small_rats, min_size=1, max_size=2), small_rats, st.lists(inner, min_size=2, max_size=2)).map(
                lambda t: Affine(tuple(t[0]), t[1], tuple(t[2][: len(t[0])]))
            ),
            st.tuples(st.sampled_from([IDENTITY, ONE_MINUS, POSITIVE_PART]), inner).map(lambda t: UnaryPL(*t)),
            st.tuples(variables, inner).map(lambda t: Sup(*t)),
            st.tuples(variables, inner).map(lambda t: Inf(*t)),
            st.tuples(variables, inner, inner).map(lambda t: HNode(t[0], ONE_MINUS, Fraction(1, 2), t[1], t[2])),
        )

    return st.recursive(base, extend, max_leaves=8)


formulas = _formulas()
RT_SIG = Signature.build(constants=("c",), predicates={"P": 1, "Q": 2})


@given(formulas)
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f), RT_SIG) == f


def _classical():
    atom = st.one_of(
        terms.map(lambda t: C.Atom("P", (t,))),
        st.tuples(terms, terms).map(lambda p: C.Atom("Q", p)),
        st.tuples(terms, terms).map(lambda p: C.Equal(*p)),
    )

    def extend(inner):
        return st.one_of(
            inner.map(C.Not),
            st.tuples(inner, inner).map(lambda p: C.And(*p)),
            st.tuples(inner, inner).map(lambda p: C.Or(*p)),
            st.tuples(inner, inner).map(lambda p: C.Implies(*p)),
            st.tuples(variables, inner).map(lambda p: C.Exists(*p)),
            st.tuples(variables, inner).map(lambda p: C.Forall(*p)),
        )

    return st.recursive(atom, extend, max_leaves=6)


classical_formulas = _classical()


@given(classical_formulas)
def test_classical_round_trip(f):
    assert parse_classical(print_classical(f), RT_SIG) == f


@given(formulas, variables, terms)
def test_substitution_agrees_with_assignment(f, v, t):
    # evaluating f[v := t] equals evaluating f with v sent to the value of t
    sig = Signature.build(constants=("c",), predicates={"P": 1})
    m = enumerate_structures(sig, sizes=(2,), values=(0, 1), distances=(1,))[3]
    for a, b, cz in itertools.product(range(2), repeat=3):
        env = {"x": a, "y": b, "z": cz}
        tv = m.consts["c"] if isinstance(t, Const) else env[t.name]
        assert eval_formula(m, substitute(f, v, t), env) == eval_formula(m, f, {**env, v: tv})
