import json
import subprocess
import sys

import pytest

from braidorder.cli import CalcError, evaluate, main
from braidorder.certificate import load


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_obstruct_headline(capsys, tmp_path):
    p = tmp_path / "p.json"
    code, out, _ = run(capsys, "obstruct", "s1 s2^-3", "--max-k", "6", "--emit-proof", str(p))
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "ProvenNotOrderPreserving" and report["k"] == 4
    assert {"verdict", "k", "nodes", "max_cone_size", "wall_ms"} <= set(report)
    meta = dict(load(p).metadata)
    assert meta == {
        "max_k": 6,
        "mode": "zero",
        "inner_reduction": True,
        "strict_paper_mode": False,
        "conjugacy": True,
        "seed": "x1^-1 x2",
        "ball_cap": 10**7,
    }
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 0 and out.strip() == "OK"


def test_obstruct_flags_reach_metadata(capsys, tmp_path):
    p = tmp_path / "p.json"
    code, _, _ = run(
        capsys, "obstruct", "s1 s2^-3", "--strict-paper-mode", "--no-inner-reduction",
        "--no-conjugacy", "--emit-proof", str(p),
    )
    assert code == 0
    c = load(p)
    meta = dict(c.metadata)
    assert meta["strict_paper_mode"] and not meta["inner_reduction"] and not meta["conjugacy"]
    assert c.strict and c.inner_conjugators == ((), ())


def test_obstruct_control_inconclusive(capsys):
    code, out, _ = run(capsys, "obstruct", "s1 s2^-2", "--max-k", "4")
    assert code == 1
    assert json.loads(out) == {**json.loads(out), "verdict": "Inconclusive", "k": 4}


@pytest.mark.parametrize("argv", [["obstruct", "bad!!"], ["obstruct", "s1", "--seed", "y1"],
                                  ["obstruct", "s1", "--max-k", "0"], ["nope"], ["calc", "x1 ^"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        sys.exit(main(argv))
    assert info.value.code == 2


def test_resource_cap(capsys):
    code, out, _ = run(capsys, "obstruct", "s1 s2^-2", "--ball-cap", "50")
    assert code == 3
    assert json.loads(out)["verdict"] == "ResourceLimit"
    code, _, _ = run(capsys, "oracle", "s1 s2", "--k", "4", "--mode", "pre")
    assert code == 3


def test_mode_pre(capsys):
    code, out, _ = run(capsys, "obstruct", "s1", "--strands", "2", "--mode", "pre", "--seed", "x1", "--max-k", "3")
    assert code == 0 and json.loads(out)["k"] == 2


def test_verify_failures(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "verify", str(bad))
    assert code == 2
    good = tmp_path / "good.json"
    run(capsys, "obstruct", "s1 s2^-3", "--emit-proof", str(good))
    d = json.loads(good.read_text())
    d["tree"]["with_alpha"]["chain_witness"][-1]["result"] = [1, 2]
    good.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(good))
    assert code == 1 and out.startswith("FAIL tree/alpha")


def test_verify_explain(capsys, tmp_path):
    p = tmp_path / "p.json"
    run(capsys, "obstruct", "s1 s2^-3", "--emit-proof", str(p))
    code, out, _ = run(capsys, "verify", str(p), "--explain")
    assert code == 0 and "y = x1^-1 x2" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "s1 s2^-3", "--k", "2", "--mode", "zero")
    assert code == 0
    d = json.loads(out)
    assert d["preserved"] > 0 and d["total"] == 6
    code, out, _ = run(capsys, "oracle", "--strands", "2", "--k", "2", "--mode", "pre", "--witnesses")
    assert json.loads(out)["total"] == 8


def test_family(capsys):
    code, out, _ = run(capsys, "family", "--m", "-2", "--images")
    assert code == 0
    d = json.loads(out)
    assert d["ok"] is True and d["failed"] is None and d["images"][2] == "x2^-1 x1 x2"


@pytest.mark.parametrize(
    "expr, expected",
    [
        ("(x1^-1 x2)^(x3)", "x3 x1^-1 x2 x3^-1"),
        ("(x1^-1 x2)^x3", "x3 x1^-1 x2 x3^-1"),
        ("x1^-1 x2 * inv(x1^-1 x2)", "1"),
        ("x3 x1^-2 x2", "x3 x1^-1 x1^-1 x2"),
        ("f[0](x2^-1 x3)", "x2^-1 x1 x2 x3^-1"),
        ("act[s1](x1 x2)", "x2 x2^-1 x1 x2"),
        ("(x2^-2 x2^-1 x1 x2 x3)^(x1)", "x1 x2^-3 x1 x2 x3 x1^-1"),
    ],
)
def test_calc(expr, expected):
    from braidorder.freegroup import parse_word

    assert evaluate(expr) == parse_word(expected)


def test_calc_cli(capsys):
    code, out, _ = run(capsys, "calc", "(x1^-1 x2)^(x3)")
    assert code == 0 and out.strip() == "x3 x1^-1 x2 x3^-1"


@pytest.mark.parametrize("expr", ["x1 )", "(x1", "inv x1", "x4", "2", "act[s1]x1", "x1 @"])
def test_calc_errors(expr):
    with pytest.raises((CalcError, ValueError)):
        evaluate(expr, 3)


def test_console_script(tmp_path):
    out = subprocess.run(["braidorder", "calc", "(x1^-1 x2)^(x3)"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "x3 x1^-1 x2 x3^-1"


def test_threads_flag_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "obstruct", "s1 s2^-3", "--emit-proof", str(a))
    run(capsys, "obstruct", "s1 s2^-3", "--threads", "4", "--emit-proof", str(b))
    assert a.read_bytes() == b.read_bytes()
