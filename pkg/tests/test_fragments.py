import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from redprod.fragments import (
    ATOMIC,
    B_COMBINATION,
    CLASSICAL_HORN,
    CLASSICAL_HORN_CLAUSE,
    CLASSICAL_PALYUTIN,
    HORN,
    NONINCREASING,
    PALYUTIN,
    PRIMITIVE_HORN,
    ApproxGrid,
    FragmentError,
    affine_grid,
    approximate_by_grid,
    classify_fragment,
    eliminate_inf_step,
    encode_classical,
    impl_to_horn,
    is_classical_horn,
    is_classical_palyutin,
    is_palyutin,
    mk_h_node,
    mk_scp_instance,
    mk_scp_instance_classical,
    palyutin_to_horn,
    stability_criterion,
)
from redprod.products import enumerate_classical_palyutin, enumerate_fragment_formulas
from redprod.semantics import (
    classical_signature,
    discrete_metrization,
    enumerate_classical,
    enumerate_structures,
    eval_classical,
    eval_formula,
    make_structure,
)
from redprod.syntax import (
    IDENTITY,
    ONE_MINUS,
    Affine,
    Atomic,
    HNode,
    Inf,
    Max,
    Min,
    Num,
    PLFunc,
    Signature,
    Sup,
    UnaryPL,
    Var,
    formula_bounds,
    parse_classical,
    parse_formula,
)
from redprod.syntax.classical import cfree_vars

x = Var("x")
P, Q = Atomic("P", (x,)), Atomic("Q", (x,))
HALF = Fraction(1, 2)
SIG_PQ = classical_signature({"P": 1, "Q": 2})
SIG_P1Q1 = classical_signature({"P": 1, "Q": 1})


def agree_everywhere(f, g, sig, sizes=(1, 2, 3)):
    vs = sorted(cfree_vars(f) | cfree_vars(g))
    for m in enumerate_classical(sig, sizes):
        for a in itertools.product(range(m.size), repeat=len(vs)):
            env = dict(zip(vs, a))
            if eval_classical(m, f, env) != eval_classical(m, g, env):
                return False
    return True


# -- classification -------------------------------------------------------------


def test_atomic_is_in_every_grammar():
    assert {ATOMIC, PRIMITIVE_HORN, HORN, PALYUTIN, B_COMBINATION} <= classify_fragment(P)


def test_min_is_b_combination_not_palyutin():
    labels = classify_fragment(Min((P, Q)))
    assert B_COMBINATION in labels and PALYUTIN not in labels


def test_wrong_delta_is_not_palyutin():
    bad = Max((Inf("x", P), Sup("x", Min((UnaryPL(ONE_MINUS, P), Num(Fraction(1, 3)), Q)))))
    good = Max((Inf("x", P), Sup("x", Min((UnaryPL(ONE_MINUS, P), Num(HALF), Q)))))
    assert not is_palyutin(bad)
    assert is_palyutin(good)


def test_counterexample_formula_is_horn_not_palyutin():
    for op in ("&", "|"):
        f = parse_classical(f"forall x1. forall x2. exists y. (y != x1 {op} y != x2)")
        labels = classify_fragment(f)
        assert CLASSICAL_HORN in labels and CLASSICAL_PALYUTIN not in labels


def test_horn_clauses():
    assert CLASSICAL_HORN_CLAUSE in classify_fragment(parse_classical("~P(x) | Q(x, x)"))
    assert CLASSICAL_HORN_CLAUSE not in classify_fragment(parse_classical("P(x) | Q(x, x)"))
    assert CLASSICAL_HORN_CLAUSE in classify_fragment(parse_classical("P(x) & Q(x, y) -> x = y"))


# -- h-nodes and SCP instances -----------------------------------------------------------


def test_mk_h_node():
    assert mk_h_node("x", ONE_MINUS, P, Q).delta == HALF
    rho = Fraction(3, 2)
    assert mk_h_node("x", PLFunc.affine(-1, 2 * rho), P, Q).delta == rho
    with pytest.raises(FragmentError):
        mk_h_node("x", IDENTITY, P, Q)


def test_scp_instance_on_one_point_structures(sig_p):
    cond = mk_scp_instance(P, [P, P], [IDENTITY, IDENTITY])
    for m in enumerate_structures(sig_p, sizes=(1,), values=(0, HALF, 1)):
        assert eval_formula(m, cond.sentence) <= cond.threshold


def test_scp_instance_errors():
    with pytest.raises(FragmentError):
        mk_scp_instance(P, [P], [IDENTITY])
    with pytest.raises(FragmentError):
        mk_scp_instance(P, [Min((P, Q)), P], [IDENTITY, IDENTITY])
    with pytest.raises(FragmentError):
        mk_scp_instance(P, [P, P], [ONE_MINUS, IDENTITY])


def test_scp_nonincreasing_flag():
    cond = mk_scp_instance(P, [P, Q], [ONE_MINUS, ONE_MINUS], NONINCREASING)
    assert cond.threshold == 0


def test_classical_scp_instance():
    phi, psi1, psi2 = parse_classical("P(x)"), parse_classical("Q(x, x)"), parse_classical("exists y. Q(x, y)")
    single = mk_scp_instance_classical(phi, [psi1])
    for m in enumerate_classical(classical_signature({"P": 1, "Q": 2}), sizes=(1, 2)):
        assert eval_classical(m, single)
    double = mk_scp_instance_classical(phi, [psi1, psi2])
    assert not cfree_vars(double)
    with pytest.raises(FragmentError):
        mk_scp_instance_classical(phi, [])


# -- encoding --------------------------------------------------------------------


def test_h_encoding_truth_table():
    # every 0/1 valuation of phi, psi on structures with <= 3 points
    f = parse_classical("(exists x. P(x)) & forall x. (P(x) -> Q(x))")
    enc = encode_classical(f)
    assert enc == mk_h_node("x", ONE_MINUS, P, Q)
    for cm in enumerate_classical(SIG_P1Q1, sizes=(1, 2, 3), up_to_iso=False):
        value = eval_formula(discrete_metrization(cm), enc)
        assert value in (0, HALF, 1)
        assert (value == 0) == eval_classical(cm, f)
        if value != 0:
            assert value >= HALF


def test_encoding_of_palyutin_is_palyutin():
    for f in enumerate_classical_palyutin(SIG_PQ, 2, ("x",)):
        assert is_palyutin(encode_classical(f))


# -- translation -----------------------------------------------------------------


def test_atomic_and_conjunction_pass_through():
    a = parse_classical("P(x)")
    assert palyutin_to_horn(a) == a
    ab = parse_classical("P(x) & Q(x, x)")
    assert palyutin_to_horn(ab) == ab


def test_to_horn_example_equivalent():
    f = parse_classical("(exists x. P(x)) & forall x. (P(x) -> Q(x, x))")
    h = palyutin_to_horn(f)
    assert is_classical_horn(h)
    assert agree_everywhere(f, h, SIG_PQ)


def test_impl_atomic_into_clause():
    h = impl_to_horn(parse_classical("P(x)"), parse_classical("~Q(x, x) | Q(x, y)"))
    assert CLASSICAL_HORN_CLAUSE in classify_fragment(h)


def test_impl_pulls_quantifier_out():
    # bound variables come back renamed to fresh primed names
    h = impl_to_horn(parse_classical("P(x)"), parse_classical("forall y. Q(x, y)"))
    assert h == parse_classical("forall y'. ~P(x) | Q(x, y')")


def test_impl_with_h_premise():
    phi = parse_classical("(exists y. Q(x, y)) & forall y. (Q(x, y) -> P(y))")
    gamma = parse_classical("P(x)")
    h = impl_to_horn(phi, gamma)
    assert is_classical_horn(h)
    assert agree_everywhere(parse_classical("((exists y. Q(x, y)) & forall y. (Q(x, y) -> P(y))) -> P(x)"), h, SIG_PQ)


def test_translator_rejects_non_palyutin():
    with pytest.raises(FragmentError):
        palyutin_to_horn(parse_classical("P(x) | Q(x, x)"))


def test_translation_on_depth_two_formulas():
    fs = list(enumerate_classical_palyutin(SIG_PQ, 2, ("x",)))
    assert all(is_classical_palyutin(f) for f in fs)
    for f in fs[:: max(1, len(fs) // 150)]:
        h = palyutin_to_horn(f)
        assert is_classical_horn(h)
        assert agree_everywhere(f, h, SIG_PQ, sizes=(1, 2))


# -- approximation -------------------------------------------------------------------


def test_affine_grid_example():
    sig = Signature.build(predicates={"P": 1})
    phi = Affine((2,), 0, (P,))
    grid = affine_grid(phi, 1, sig)
    assert grid.thresholds == (0, 1, 2) and grid.margins == (HALF, HALF)
    theta = approximate_by_grid(phi, grid)
    assert B_COMBINATION in classify_fragment(theta) or PALYUTIN in classify_fragment(theta)
    for m in enumerate_structures(sig, sizes=(1, 2), values=(0, HALF, 1)):
        for a in range(m.size):
            env = {"x": a}
            assert abs(eval_formula(m, phi, env) - eval_formula(m, theta, env)) <= 2


def test_single_step_constant_helper():
    grid = ApproxGrid(1, (0, 1), (Num(0),), (1,))
    theta = approximate_by_grid(P, grid)
    m = make_structure(Signature.build(predicates={"P": 1}), ["a"], [[0]], {"P": {("a",): 1}})
    assert eval_formula(m, theta, {"x": 0}) == 0


def test_uneven_grid_rejected():
    with pytest.raises(ValueError):
        ApproxGrid(1, (0, 1, 3), (P, P), (1, 1))


def test_eliminate_inf_step_example(sig_p):
    y = Var("y")
    Py = Atomic("P", (y,))
    out = eliminate_inf_step(Py, Py, IDENTITY, 1, (0, 1))
    assert B_COMBINATION in classify_fragment(out)
    helper = out.arg
    # rho_0 = 1/2 sits inside the capped infimum, margin 1/6 in the clamp slope
    assert Num(HALF) in helper.args[1].args[1].args[0].body.args
    assert out.pl == PLFunc.clamp_affine(6, 0, 0, 1)
    target = Inf("y", Max((Py, UnaryPL(IDENTITY, Py))))
    for m in enumerate_structures(sig_p, sizes=(1,), values=(0, Fraction(1, 4), HALF, Fraction(3, 4), 1)):
        assert abs(eval_formula(m, out) - eval_formula(m, target)) <= 1


def test_eliminate_inf_step_rejects():
    with pytest.raises(FragmentError):
        eliminate_inf_step(P, P, ONE_MINUS, 1, (0, 1))
    with pytest.raises(ValueError):
        eliminate_inf_step(P, P, IDENTITY, Fraction(2, 3), (0, 1))


def test_stability_criterion():
    sig = Signature.build()
    phi = parse_formula("d(x, y)")
    cond = stability_criterion(phi, signature=sig)
    assert cond.threshold == 0
    for n in (1,):
        m = make_structure(sig, list(range(n)), [[0]])
        assert eval_formula(m, cond.sentence) <= 0
    with pytest.raises(FragmentError):
        stability_criterion(Affine((2,), -1, (P,)), signature=Signature.build(predicates={"P": 1}))


def test_stability_criterion_one_point(sig_p):
    cond = stability_criterion(Atomic("P", (Var("y"),)), signature=sig_p)
    for m in enumerate_structures(sig_p, sizes=(1,), values=(0, HALF, 1)):
        assert eval_formula(m, cond.sentence) <= 0


@settings(max_examples=40)
@given(__import__("test_syntax").formulas)
def test_classification_is_consistent(f):
    labels = classify_fragment(f)
    if ATOMIC in labels:
        assert PRIMITIVE_HORN in labels
    if PRIMITIVE_HORN in labels:
        assert HORN in labels
    if PALYUTIN in labels:
        assert B_COMBINATION in labels


def test_h_free_palyutin_is_horn(sig_p):
    # without h-nodes the Palyutin grammar is a sub-grammar of the Horn one
    for f in enumerate_fragment_formulas(sig_p, PALYUTIN, 2, basis=(IDENTITY,)):
        assert HORN in classify_fragment(f)


def test_bounds_of_enumerated_formulas_are_sound(sig_p):
    ms = enumerate_structures(sig_p, sizes=(1, 2), values=(0, 1))
    for f in list(enumerate_fragment_formulas(sig_p, PALYUTIN, 2))[:200]:
        lo, hi = formula_bounds(f, sig_p)
        for m in ms:
            for a in range(m.size):
                v = eval_formula(m, f, {"x": a})
                assert lo <= v <= hi
    assert isinstance(mk_h_node("x", ONE_MINUS, P, Q), HNode)
