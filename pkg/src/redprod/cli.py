"""Command-line front end.

Exit codes: 0 when the verdict is true (or the command just produces
output), 1 when it is false, 2 for usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .fragments import (
    CLASSICAL_HORN,
    LABELS,
    affine_grid,
    approximate_by_grid,
    classify_fragment,
    eliminate_inf_step,
    encode_classical,
    mk_scp_instance,
    mk_scp_instance_classical,
    palyutin_to_horn,
    stability_criterion,
)
from .products import (
    DEFAULT_BASIS,
    check_bipreservation,
    filter_from_generators,
    palyutin_equiv_bounded,
    reduced_product,
    trivial_filter,
)
from .products.filters import FiniteFilter
from .semantics import (
    UnboundVariable,
    discrete_metrization,
    eval_classical,
    eval_formula,
    make_classical,
    make_structure,
    validate_structure,
)
from .syntax import (
    IDENTITY,
    FormulaError,
    FunctionSymbol,
    PredicateSymbol,
    Signature,
    free_vars,
    parse_classical,
    parse_formula,
    parse_pl,
    parse_rat,
    print_classical,
    print_formula,
    print_pl,
    print_rat,
)


class UsageError(Exception):
    pass


# -- structure files ---------------------------------------------------------


def _rat(v) -> Fraction:
    if isinstance(v, bool):
        raise UsageError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_rat(v.strip())
    raise UsageError(f"rationals are written as integers or \"p/q\" text, got {v!r}")


def _symbol_arity(spec) -> int:
    return spec if isinstance(spec, int) else int(spec["arity"])


def _signature(block: dict, classical: bool) -> Signature:
    constants = tuple(block.get("constants", ()))
    if classical:
        preds = {n: PredicateSymbol(_symbol_arity(s)) for n, s in block.get("predicates", {}).items()}
        funcs = {n: FunctionSymbol(_symbol_arity(s)) for n, s in block.get("functions", {}).items()}
        return Signature.build(constants, funcs, preds, 1)
    preds = {}
    for n, s in block.get("predicates", {}).items():
        if isinstance(s, int):
            preds[n] = PredicateSymbol(s)
        else:
            preds[n] = PredicateSymbol(
                int(s["arity"]), _rat(s.get("lo", 0)), _rat(s.get("hi", 1)), _rat(s.get("lipschitz", 1))
            )
    funcs = {}
    for n, s in block.get("functions", {}).items():
        funcs[n] = FunctionSymbol(s) if isinstance(s, int) else FunctionSymbol(int(s["arity"]), _rat(s.get("lipschitz", 1)))
    return Signature.build(constants, funcs, preds, _rat(block.get("dmax", 1)))


def _split_labels(text: str) -> list:
    """Split on commas outside parentheses, so product labels like (a,b) stay whole."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
            continue
        depth += {"(": 1, ")": -1}.get(ch, 0)
        cur += ch
    parts.append(cur.strip())
    return parts if text.strip() else []


def _key(text: str, arity: int) -> tuple:
    parts = _split_labels(text)
    if len(parts) != arity:
        raise UsageError(f"table key {text!r} does not have {arity} entries")
    return tuple(parts)


def structure_from_json(doc: dict, lipschitz_warn: bool = False):
    """(metric structure, classical structure or None) from a StructureFile document."""
    classical = bool(doc.get("classical", False))
    sig = _signature(doc.get("signature", {}), classical)
    labels = [str(p) for p in doc["points"]]
    funcs = {
        n: {_key(k, sig.function_map[n].arity): str(v) for k, v in table.items()} for n, table in doc.get("funcs", {}).items()
    }
    consts = {c: str(v) for c, v in doc.get("consts", {}).items()}
    cm = None
    if classical:
        rels = {}
        for n, rows in doc.get("relations", {}).items():
            arity = sig.predicate_map[n].arity
            rels[n] = [tuple(str(x) for x in r) if isinstance(r, list) else _key(str(r), arity) for r in rows]
        cm = make_classical(sig, labels, rels, funcs, consts)
        m = discrete_metrization(cm)
    else:
        dist = [[_rat(v) for v in row] for row in doc["dist"]]
        preds = {
            n: {_key(k, sig.predicate_map[n].arity): _rat(v) for k, v in table.items()}
            for n, table in doc.get("preds", {}).items()
        }
        m = make_structure(sig, labels, dist, preds, funcs, consts)
    problems = validate_structure(m)
    warn = [p for p in problems if p.is_lipschitz] if lipschitz_warn else []
    errors = [p for p in problems if p not in warn]
    for p in warn:
        print(f"warning: {p.message}", file=sys.stderr)
    if errors:
        raise InvalidStructure(errors)
    return m, cm


class InvalidStructure(Exception):
    def __init__(self, violations):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


def label_text(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(label_text(x) for x in label) + ")"
    return str(label)


def structure_to_json(m) -> dict:
    labels = [label_text(x) for x in m.labels]
    sig = m.signature
    return {
        "signature": {
            "constants": list(sig.constants),
            "functions": {n: {"arity": f.arity, "lipschitz": print_rat(f.lipschitz)} for n, f in sig.functions},
            "predicates": {
                n: {"arity": p.arity, "lo": print_rat(p.lo), "hi": print_rat(p.hi), "lipschitz": print_rat(p.lipschitz)}
                for n, p in sig.predicates
            },
            "dmax": print_rat(sig.dmax),
        },
        "points": labels,
        "dist": [[print_rat(v) for v in row] for row in m.dist],
        "preds": {
            n: {",".join(labels[i] for i in t): print_rat(v) for t, v in sorted(m.preds[n].items())} for n, _ in sig.predicates
        },
        "funcs": {
            n: {",".join(labels[i] for i in t): labels[v] for t, v in sorted(m.funcs[n].items())} for n, _ in sig.functions
        },
        "consts": {c: labels[m.consts[c]] for c in sig.constants},
    }


def load_structure(path: str, lipschitz_warn: bool = False):
    with open(path, encoding="utf-8") as fh:
        return structure_from_json(json.load(fh), lipschitz_warn)


# -- argument helpers ----------------------------------------------------------


def parse_filter(text: str | None, n: int) -> FiniteFilter:
    """``kernel=0,1`` | ``generators=0,1;1,2`` | ``ultra=i`` | ``trivial`` (the default)."""
    if text is None or text == "trivial":
        return trivial_filter(n)
    kind, _, rest = text.partition("=")
    try:
        if kind == "kernel":
            return FiniteFilter(n, frozenset(int(i) for i in rest.split(",")))
        if kind == "ultra":
            return FiniteFilter(n, frozenset({int(rest)}))
        if kind == "generators":
            sets = [[int(i) for i in g.split(",") if i.strip()] for g in rest.split(";")]
            return filter_from_generators(sets, n)
    except ValueError as e:
        raise UsageError(f"bad filter {text!r}: {e}") from None
    raise UsageError(f"bad filter {text!r}; use kernel=..., generators=..., ultra=i or trivial")


def parse_assignment(text: str | None, m) -> dict:
    if not text:
        return {}
    labels = [label_text(x) for x in m.labels]
    out = {}
    for item in _split_labels(text):
        var, _, lab = item.partition("=")
        if lab.strip() not in labels:
            raise UsageError(f"unknown point {lab.strip()!r}")
        out[var.strip()] = labels.index(lab.strip())
    return out


def _formula(text: str, sig=None, classical=False):
    if classical:
        return parse_classical(text, sig)
    return parse_formula(text, sig)


def _any_formula(text: str):
    """Parse continuous syntax first, then classical."""
    try:
        return parse_formula(text)
    except FormulaError as first:
        try:
            return parse_classical(text)
        except FormulaError:
            raise first from None


def _text(f) -> str:
    from .syntax.classical import CFormula

    return print_classical(f) if isinstance(f, CFormula) else print_formula(f)


# -- commands ------------------------------------------------------------------


def cmd_check(args):
    f = _formula(args.formula, classical=True) if args.classical else _any_formula(args.formula)
    labels = sorted(classify_fragment(f))
    report = {"formula": _text(f), "labels": labels}
    if args.fragment is None:
        return 0, report, "\n".join(labels)
    if args.fragment not in LABELS:
        raise UsageError(f"unknown fragment {args.fragment!r}; choose from {', '.join(LABELS)}")
    member = args.fragment in labels
    report.update(fragment=args.fragment, member=member)
    return (0 if member else 1), report, f"{args.fragment}: {'yes' if member else 'no'}"


def cmd_eval(args):
    m, cm = load_structure(args.structure, args.lipschitz_warn)
    env = parse_assignment(args.assign, m)
    if args.classical:
        if cm is None:
            raise UsageError("--classical needs a structure file marked classical")
        f = parse_classical(args.formula, cm.signature)
        truth = eval_classical(cm, f, env)
        return (0 if truth else 1), {"formula": print_classical(f), "truth": truth}, "true" if truth else "false"
    f = parse_formula(args.formula, m.signature)
    v = eval_formula(m, f, env)
    return 0, {"formula": print_formula(f), "value": print_rat(v)}, print_rat(v)


def _factors(args):
    return [load_structure(p, args.lipschitz_warn)[0] for p in args.structure]


def cmd_product(args):
    factors = _factors(args)
    filt = parse_filter(args.filter, len(factors))
    rp = reduced_product(factors, filt, cap=args.cap, check=True)
    doc = structure_to_json(rp.result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
    report = {"kernel": list(filt.indices), "size": rp.result.size, "structure": doc}
    return 0, report, f"product over kernel {list(filt.indices)}: {rp.result.size} points"


def cmd_preserve(args):
    factors = _factors(args)
    filt = parse_filter(args.filter, len(factors))
    sig = factors[0].signature
    if args.classical:
        f = encode_classical(parse_classical(args.formula, sig))
    else:
        f = parse_formula(args.formula, sig)
    rep = check_bipreservation(f, factors, filt, cap=args.cap)
    rows = [
        {
            "tuple": [label_text(c) for c in r.tuple_id],
            "product": print_rat(r.product_value),
            "limsup": print_rat(r.limsup),
            "preserved": r.preserved,
            "copreserved": r.copreserved,
        }
        for r in rep.rows
    ]
    report = {
        "formula": print_formula(f),
        "kernel": list(filt.indices),
        "variables": list(rep.variables),
        "rows": rows,
        "preserved": rep.preserved,
        "copreserved": rep.copreserved,
        "bipreserved": rep.bipreserved,
    }
    text = f"preserved={str(rep.preserved).lower()} copreserved={str(rep.copreserved).lower()}"
    return (0 if rep.bipreserved else 1), report, text


def cmd_gen_scp(args):
    if args.classical:
        phi = parse_classical(args.phi)
        psis = [parse_classical(p) for p in args.psi]
        out = mk_scp_instance_classical(phi, psis, xs=args.x)
        return 0, {"sentence": print_classical(out)}, print_classical(out)
    phi = parse_formula(args.phi)
    psis = [parse_formula(p) for p in args.psi]
    Ds = [parse_pl(d) for d in args.D] if args.D else [IDENTITY] * len(psis)
    cond = mk_scp_instance(phi, psis, Ds, args.mono, xs=args.x)
    text = print_formula(cond.sentence)
    return 0, {"sentence": text, "threshold": print_rat(cond.threshold)}, f"{text} <= {print_rat(cond.threshold)}"


def cmd_to_horn(args):
    f = parse_classical(args.formula)
    h = palyutin_to_horn(f)
    ok = CLASSICAL_HORN in classify_fragment(h)
    return 0, {"input": print_classical(f), "horn": print_classical(h), "classical_horn": ok}, print_classical(h)


def cmd_equiv(args):
    if len(args.structure) != 2:
        raise UsageError("equiv needs exactly two structures")
    M, N = _factors(args)
    basis = [parse_pl(b) for b in args.basis] if args.basis else DEFAULT_BASIS
    res = palyutin_equiv_bounded(M, N, args.depth, basis, tuple(args.vars.split(",")))
    report = {"equivalent": res.equivalent, "depth": res.depth, "checked": res.checked}
    if res.equivalent:
        return 0, report, f"equivalent up to depth {res.depth} ({res.checked} sentences)"
    report.update(sentence=print_formula(res.sentence), value_m=print_rat(res.value_m), value_n=print_rat(res.value_n))
    return 1, report, f"separated by {print_formula(res.sentence)}: {print_rat(res.value_m)} vs {print_rat(res.value_n)}"


def _sig_for(args):
    return load_structure(args.signature_from, args.lipschitz_warn)[0].signature if args.signature_from else None


def cmd_stability(args):
    sig = _sig_for(args)
    phi = parse_formula(args.phi, sig)
    cond = stability_criterion(phi, args.x, args.y, args.z, sig)
    text = print_formula(cond.sentence)
    return 0, {"sentence": text, "threshold": print_rat(cond.threshold)}, f"{text} <= {print_rat(cond.threshold)}"


def cmd_approx(args):
    sig = _sig_for(args)
    phi = parse_formula(args.phi, sig)
    eps = parse_rat(args.eps)
    if args.gamma is not None:
        gamma = parse_formula(args.gamma, sig)
        D = parse_pl(args.D) if args.D else IDENTITY
        lo, _, hi = args.bounds.partition(",")
        theta = eliminate_inf_step(phi, gamma, D, eps, (parse_rat(lo), parse_rat(hi)), args.var)
        report = {"theta": print_formula(theta), "eps": print_rat(eps)}
    else:
        if sig is None:
            sig = _default_signature(phi)
        grid = affine_grid(phi, eps, sig)
        theta = approximate_by_grid(phi, grid)
        report = {
            "theta": print_formula(theta),
            "eps": print_rat(eps),
            "thresholds": [print_rat(r) for r in grid.thresholds],
            "margins": [print_rat(x) for x in grid.margins],
        }
    return 0, report, print_formula(theta)


def _default_signature(f):
    from .fragments.constructions import _default_signature as build

    return build(f)


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redprod", description="Reduced products of finite metric structures.")
    p.add_argument("--json", action="store_true", help="emit the machine-readable JSON report")
    p.add_argument("--lipschitz-warn", action="store_true", help="downgrade Lipschitz violations in structure files to warnings")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="classify a formula into fragments")
    c.add_argument("--fragment", help="report membership in this fragment")
    c.add_argument("--classical", action="store_true", help="parse classical syntax")
    c.add_argument("formula")
    c.set_defaults(run=cmd_check)

    c = sub.add_parser("eval", help="evaluate a formula in a structure")
    c.add_argument("-s", "--structure", required=True)
    c.add_argument("-f", "--formula", required=True)
    c.add_argument("--assign", help="x=label,y=label")
    c.add_argument("--classical", action="store_true", help="two-valued evaluation of classical syntax")
    c.set_defaults(run=cmd_eval)

    for name, fn, help_text in (
        ("product", cmd_product, "build a reduced product"),
        ("preserve", cmd_preserve, "compare a formula in a product with the limsup of factor values"),
    ):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("-s", "--structure", action="append", required=True)
        c.add_argument("--filter", help="kernel=0,1 | generators=0,1;1,2 | ultra=i | trivial")
        c.add_argument("--cap", type=int, default=10_000, help="largest product size allowed")
        if name == "product":
            c.add_argument("-o", "--output", help="write the product as a structure file")
        else:
            c.add_argument("-f", "--formula", required=True)
            c.add_argument("--classical", action="store_true", help="encode a classical formula first")
        c.set_defaults(run=fn)

    c = sub.add_parser("gen-scp", help="generate an SCP instance")
    c.add_argument("--classical", action="store_true")
    c.add_argument("--phi", required=True)
    c.add_argument("--psi", action="append", required=True)
    c.add_argument("--D", action="append", help="PL connective per psi (default identity)")
    c.add_argument("--mono", choices=("nondecreasing", "nonincreasing"), default="nondecreasing")
    c.add_argument("--x", action="append", help="variable bound by the inner infima (repeatable)")
    c.set_defaults(run=cmd_gen_scp)

    c = sub.add_parser("to-horn", help="translate a classical Palyutin formula to Horn form")
    c.add_argument("formula")
    c.set_defaults(run=cmd_to_horn)

    c = sub.add_parser("equiv", help="bounded Palyutin-equivalence check")
    c.add_argument("-s", "--structure", action="append", required=True)
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--basis", action="append", help="PL connective (repeatable); default identity, 1-t, max(0,t)")
    c.add_argument("--vars", default="x", help="variable pool, comma separated")
    c.set_defaults(run=cmd_equiv)

    c = sub.add_parser("stability-criterion", help="build the stability criterion sentence")
    c.add_argument("--phi", required=True)
    c.add_argument("--x", default="x")
    c.add_argument("--y", default="y")
    c.add_argument("--z", default="z")
    c.add_argument("--signature-from", help="structure file whose signature types phi")
    c.set_defaults(run=cmd_stability)

    c = sub.add_parser("approx", help="grid approximation, or one infimum-elimination step with --gamma")
    c.add_argument("--phi", required=True, help="the formula, or theta for --gamma")
    c.add_argument("--eps", required=True)
    c.add_argument("--gamma")
    c.add_argument("--D", help="nondecreasing PL connective for --gamma (default identity)")
    c.add_argument("--bounds", default="0,1", help="r_0,r_k for --gamma")
    c.add_argument("--var", default="y", help="variable eliminated with --gamma")
    c.add_argument("--signature-from", help="structure file whose signature types phi")
    c.set_defaults(run=cmd_approx)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if getattr(args, "x", None) is None and args.command == "gen-scp":
        args.x = ["x"]
    try:
        code, report, text = args.run(args)
    except InvalidStructure as e:
        doc = {"error": "invalid structure", "violations": [{"kind": v.kind, "message": v.message} for v in e.violations]}
        print(json.dumps(doc, sort_keys=True, indent=2), file=sys.stderr)
        return 2
    except (UsageError, FormulaError, UnboundVariable, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
