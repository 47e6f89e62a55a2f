import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from redprod.fragments import encode_classical
from redprod.semantics import (
    BatchEvaluator,
    ClassicalBatch,
    OffGrid,
    UnboundVariable,
    classical_signature,
    discrete_metrization,
    enumerate_classical,
    enumerate_structures,
    eval_classical,
    eval_formula,
    make_classical,
    make_structure,
    satisfies_theory,
    validate_structure,
    value_table,
)
from redprod.syntax import ONE_MINUS, Condition, HNode, Num, Signature, Theory, formula_modulus, parse_classical, parse_formula
from redprod.syntax.classical import cfree_vars

from test_syntax import classical_formulas, formulas, RT_SIG


def test_two_point_space_is_valid():
    sig = Signature.build()
    m = make_structure(sig, ["a", "b"], [[0, 1], [1, 0]])
    assert validate_structure(m) == []


def test_triangle_violation():
    sig = Signature.build(dmax=5)
    m = make_structure(sig, ["a", "b", "c"], [[0, 2, 5], [2, 0, 1], [5, 1, 0]])
    kinds = {(v.kind, v.witness) for v in validate_structure(m)}
    assert ("triangle", (0, 1, 2)) in kinds


def test_bound_violation():
    sig = Signature.build(predicates={"P": 1})
    m = make_structure(sig, ["a"], [[0]], {"P": {("a",): 3}})
    assert [v.kind for v in validate_structure(m)] == ["bounds"]


def test_inf_distance_to_constant():
    sig = Signature.build(constants=("c",))
    m = make_structure(sig, ["a", "b"], [[0, 1], [1, 0]], consts={"c": "b"})
    assert eval_formula(m, parse_formula("inf x. d(x, c)", sig)) == 0


def test_max_of_table_values():
    sig = Signature.build(constants=("a",), predicates={"P": 1, "Q": 1})
    m = make_structure(sig, ["p"], [[0]], {"P": {("p",): Fraction(1, 3)}, "Q": {("p",): Fraction(2, 3)}}, consts={"a": "p"})
    assert eval_formula(m, parse_formula("max(P(a), Q(a))", sig)) == Fraction(2, 3)


def test_h_node_on_two_point_structure():
    # P = {p}, Q empty: exists x P holds, forall x (P -> Q) fails
    sig = classical_signature({"P": 1, "Q": 1})
    m = discrete_metrization(make_classical(sig, ["p", "q"], {"P": [("p",)]}))
    f = HNode("x", ONE_MINUS, Fraction(1, 2), parse_formula("P(x)"), parse_formula("Q(x)"))
    assert eval_formula(m, f) == Fraction(1, 2)


def test_unbound_variable():
    sig = Signature.build(predicates={"P": 1})
    m = make_structure(sig, ["a"], [[0]], {"P": {("a",): 0}})
    with pytest.raises(UnboundVariable):
        eval_formula(m, parse_formula("P(x)"))


def test_classical_counterexample_on_m_and_m_squared():
    sig = classical_signature({})
    phi = parse_classical("forall x1. forall x2. exists y. (y != x1 & y != x2)")
    m = make_classical(sig, [1, 2])
    mm = make_classical(sig, [(1, 1), (1, 2), (2, 1), (2, 2)])
    assert eval_classical(m, phi) is False
    assert eval_classical(mm, phi) is True


def test_literal_disjunction_holds_on_m():
    # with "or" the formula is already true on a 2-element set
    m = make_classical(classical_signature({}), [1, 2])
    assert eval_classical(m, parse_classical("forall x1. forall x2. exists y. (y != x1 | y != x2)")) is True


def test_exists_self_equal():
    for m in enumerate_classical(classical_signature({"P": 1}), sizes=(1, 2)):
        assert eval_classical(m, parse_classical("exists x. x = x"))


def test_metrization():
    sig = classical_signature({"R": 2})
    m = discrete_metrization(make_classical(sig, [1, 2], {"R": [(1, 2)]}))
    assert m.dist == ((0, 1), (1, 0))
    assert m.preds["R"] == {(0, 0): 1, (0, 1): 0, (1, 0): 1, (1, 1): 1}
    assert validate_structure(m) == []


def test_encoding_examples():
    sig = classical_signature({"P": 1}, constants=("a",))
    m = discrete_metrization(make_classical(sig, ["u", "v"], {"P": []}, consts={"a": "u"}))
    assert eval_formula(m, encode_classical(parse_classical("~P(a)", sig))) == 0
    assert eval_formula(m, encode_classical(parse_classical("exists y. y != x")), {"x": 0}) == 0


def test_theory_satisfaction():
    sig = Signature.build(predicates={"P": 1})
    m = make_structure(sig, ["a"], [[0]], {"P": {("a",): 0}})
    assert satisfies_theory(m, Theory()) == (True, None)
    bad = Condition(Num(1), 0)
    assert satisfies_theory(m, Theory([bad])) == (False, bad)


CLASSICAL_RAW = {n: enumerate_classical(RT_SIG, sizes=(n,)) for n in (1, 2, 3)}
METRIC_BATCH = {n: BatchEvaluator([discrete_metrization(m) for m in CLASSICAL_RAW[n]], 2) for n in (1, 2, 3)}
TRUTH_BATCH = {n: ClassicalBatch(CLASSICAL_RAW[n]) for n in (1, 2, 3)}


@settings(max_examples=300)
@given(classical_formulas)
def test_encoding_zero_set_is_truth_set(f):
    # paired evaluation over every classical structure with <= 3 elements
    enc = encode_classical(f)
    vs = sorted(cfree_vars(f))
    for n in (1, 2, 3):
        evs, values = METRIC_BATCH[n].table(enc)
        assert list(evs) == vs
        shape = (len(CLASSICAL_RAW[n]),) + (n,) * len(vs)
        values = np.broadcast_to(values, shape)
        truth = np.broadcast_to(TRUTH_BATCH[n].truth(f, vs), shape)
        assert set(np.unique(values)) <= {0, 1, 2}
        assert np.array_equal(truth, values == 0)


def test_classical_batch_matches_pointwise():
    f = parse_classical("forall x. (P(x) -> exists y. Q(x, y))", RT_SIG)
    for n in (1, 2, 3):
        got = ClassicalBatch(CLASSICAL_RAW[n]).truth(f, [])
        assert list(np.broadcast_to(got, (len(CLASSICAL_RAW[n]),))) == [eval_classical(m, f) for m in CLASSICAL_RAW[n]]


@settings(max_examples=60)
@given(formulas)
def test_batch_evaluator_matches_exact_evaluation(f):
    ms = enumerate_structures(Signature.build(constants=("c",), predicates={"P": 1}), sizes=(2,), values=(0, 1), distances=(Fraction(1, 2), 1))
    ev = BatchEvaluator(ms, 12)
    try:
        vs, arr = ev.table(f)
    except OffGrid:
        return
    arr = np.broadcast_to(arr, (len(ms),) + (2,) * len(vs))
    for s, m in enumerate(ms):
        for a in itertools.product(range(2), repeat=len(vs)):
            assert Fraction(int(arr[(s,) + a]), 12) == eval_formula(m, f, dict(zip(vs, a)))


LIP_SIG = Signature.build(constants=("c",), predicates={"P": 1})
# P-values differ by at most 1/2 and distances are at least 1/2, so P is 1-Lipschitz
LIP_STRUCTURES = enumerate_structures(LIP_SIG, sizes=(2, 3), values=(0, Fraction(1, 2)), distances=(Fraction(1, 2), 1))


@settings(max_examples=60)
@given(formulas)
def test_lipschitz_modulus(f):
    C = formula_modulus(f, LIP_SIG)
    for m in LIP_STRUCTURES:
        table = value_table(m, f)
        for a, b in itertools.combinations(table, 2):
            gap = max((m.dist[i][j] for i, j in zip(a, b)), default=Fraction(0))
            assert abs(table[a] - table[b]) <= C * gap


def test_value_table_falls_back_off_grid():
    sig = Signature.build(predicates={"P": 1})
    m = make_structure(sig, ["a", "b"], [[0, 1], [1, 0]], {"P": {("a",): 0, ("b",): 1}})
    f = parse_formula("affine[1/7; 0](P(x))")
    assert value_table(m, f) == {(0,): 0, (1,): Fraction(1, 7)}
