import json
import subprocess
import sys

import pytest

from redprod.cli import dispatch
from redprod.fragments import CLASSICAL_HORN, classify_fragment
from redprod.semantics import classical_signature, enumerate_classical, eval_classical
from redprod.syntax import parse_classical, parse_formula

ONE_POINT = {
    "signature": {"constants": ["c"], "predicates": {"P": {"arity": 1, "lo": "0", "hi": "1", "lipschitz": "1"}}, "dmax": "1"},
    "points": ["a"],
    "dist": [["0"]],
    "preds": {"P": {"a": "1/2"}},
    "consts": {"c": "a"},
}
TWO_POINT = {
    "signature": {"predicates": {"P": 1}},
    "points": ["p", "q"],
    "dist": [["0", "1"], ["1", "0"]],
    "preds": {"P": {"p": "0", "q": "1"}},
}
PLAIN = {"signature": {"predicates": {"P": 1}}, "points": ["a"], "dist": [["0"]], "preds": {"P": {"a": "0"}}}
M_CLASSICAL = {"classical": True, "signature": {"predicates": {}}, "points": ["1", "2"], "relations": {}}
COUNTEREXAMPLE = "forall x1. forall x2. exists y. (y != x1 & y != x2)"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, doc in (("one", ONE_POINT), ("two", TWO_POINT), ("plain", PLAIN), ("m", M_CLASSICAL)):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_inf_distance(files, capsys):
    code, out, _ = run(capsys, "eval", "-s", files["one"], "-f", "inf x. d(x, c)")
    assert (code, out.strip()) == (0, "0")


def test_eval_with_assignment(files, capsys):
    code, out, _ = run(capsys, "--json", "eval", "-s", files["two"], "-f", "P(x)", "--assign", "x=q")
    assert code == 0 and json.loads(out)["value"] == "1"


def test_classical_eval_exit_codes(files, capsys):
    assert run(capsys, "eval", "--classical", "-s", files["m"], "-f", COUNTEREXAMPLE)[0] == 1
    assert run(capsys, "eval", "--classical", "-s", files["m"], "-f", "exists x. x = x")[0] == 0


def test_to_horn(capsys):
    text = "(exists x. P(x)) & forall x. (P(x) -> Q(x))"
    code, out, _ = run(capsys, "to-horn", text)
    assert code == 0
    horn = parse_classical(out.strip())
    assert CLASSICAL_HORN in classify_fragment(horn)
    src = parse_classical(text)
    for m in enumerate_classical(classical_signature({"P": 1, "Q": 1}), sizes=(1, 2, 3)):
        assert eval_classical(m, src) == eval_classical(m, horn)


def test_preserve_counterexample(files, capsys):
    code, out, _ = run(
        capsys, "--json", "preserve", "-s", files["m"], "-s", files["m"], "--filter", "kernel=0,1", "--classical", "-f", COUNTEREXAMPLE
    )
    report = json.loads(out)
    assert code == 1
    assert report["preserved"] is True and report["copreserved"] is False
    assert parse_formula(report["formula"]) is not None


def test_preserve_encoded_text(files, capsys):
    encoded = "sup x1. sup x2. inf y. max(pl{(0,1),(1,0)}(d(y, x1)), pl{(0,1),(1,0)}(d(y, x2)))"
    code, out, _ = run(capsys, "preserve", "-s", files["m"], "-s", files["m"], "--filter", "kernel=0,1", "-f", encoded)
    assert code == 1 and out.strip() == "preserved=true copreserved=false"


def test_json_is_deterministic_and_formulas_reparse(files, capsys):
    argv = ["--json", "preserve", "-s", files["two"], "-s", files["plain"], "--filter", "trivial", "-f", "h[x; pl{(0,1),(1,0)}](P(x), P(x))"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    report = json.loads(first)
    from redprod.syntax import print_formula

    assert print_formula(parse_formula(report["formula"])) == report["formula"]
    assert report["bipreserved"] is True


def test_product_round_trip(files, capsys, tmp_path):
    out_path = tmp_path / "prod.json"
    code, _, _ = run(capsys, "product", "-s", files["two"], "-s", files["two"], "-o", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["points"] == ["(p,p)", "(p,q)", "(q,p)", "(q,q)"]
    code, out, _ = run(capsys, "eval", "-s", str(out_path), "-f", "P(x)", "--assign", "x=(p,q)")
    assert (code, out.strip()) == (0, "1")


def test_check_fragment(capsys):
    assert run(capsys, "check", "--fragment", "palyutin", "sup x. P(x)")[0] == 0
    assert run(capsys, "check", "--fragment", "palyutin", "min(P(x), Q(x))")[0] == 1
    assert run(capsys, "check", "--fragment", "bogus", "P(x)")[0] == 2


def test_equiv(files, capsys):
    code, out, _ = run(capsys, "--json", "equiv", "-s", files["plain"], "-s", files["two"], "--depth", "1")
    assert code == 1 and json.loads(out)["equivalent"] is False
    assert run(capsys, "equiv", "-s", files["two"], "-s", files["two"], "--depth", "1")[0] == 0


def test_generators(capsys):
    code, out, _ = run(capsys, "--json", "gen-scp", "--phi", "P(x)", "--psi", "P(x)", "--psi", "Q(x)", "--mono", "nondecreasing")
    assert code == 0 and json.loads(out)["threshold"] == "0"
    assert run(capsys, "gen-scp", "--phi", "P(x)", "--psi", "P(x)")[0] == 2
    code, out, _ = run(capsys, "gen-scp", "--classical", "--phi", "P(x)", "--psi", "Q(x)")
    assert code == 0 and parse_classical(out.strip())
    assert run(capsys, "stability-criterion", "--phi", "d(x, y)")[0] == 0
    code, out, _ = run(capsys, "--json", "approx", "--phi", "P(x)", "--eps", "1/2")
    assert code == 0 and json.loads(out)["thresholds"] == ["0", "1/2", "1"]
    assert run(capsys, "approx", "--phi", "P(y)", "--gamma", "P(y)", "--eps", "1")[0] == 0


def test_validation_failure(tmp_path, capsys):
    bad = dict(TWO_POINT, signature={"predicates": {"P": {"arity": 1, "lipschitz": "1/4"}}})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "eval", "-s", str(path), "-f", "sup x. P(x)")
    assert code == 2 and json.loads(err)["violations"][0]["kind"] == "lipschitz-predicate"
    code, out, err = run(capsys, "--lipschitz-warn", "eval", "-s", str(path), "-f", "sup x. P(x)")
    assert code == 0 and out.strip() == "1" and "warning" in err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "eval", "-s", "/nonexistent.json", "-f", "P(x)")[0] == 2
    assert run(capsys, "check", "sup x. (P(x)")[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "redprod", "eval", "-s", files["one"], "-f", "inf x. d(x, c)"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "0"
