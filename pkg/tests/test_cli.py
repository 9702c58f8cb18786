import json

import pytest

from atilde import presentation as pres
from atilde.cli import main


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def tpfile(fixtures):
    return fixtures / "tp_n2_q2.txt"


def test_tp_verify(capsys, tpfile, tmp_path):
    code, out, _ = run(capsys, "tp-verify", tpfile)
    assert code == 0 and out.count("PASS") == 6
    body = tpfile.read_text().splitlines()
    i = body.index("triples:")
    broken = tmp_path / "broken.txt"
    broken.write_text("\n".join(body[:i + 1] + body[i + 2:]) + "\n")
    code, out, _ = run(capsys, "tp-verify", broken)
    assert code == 2 and "FAIL" in out


def test_nf_of_relator_is_empty(capsys, tpfile, tp2):
    for u, v, w in sorted(tp2.triples)[:10]:
        code, out, _ = run(capsys, "nf", tpfile, f"{u},{v},{w}")
        assert code == 0 and out.splitlines()[0] == "nf:"
    code, out, _ = run(capsys, "nf", tpfile, "0,0,1", "--json")
    assert json.loads(out)["nf"] == []


def test_growth_zero_terms(capsys, tpfile):
    code, out, _ = run(capsys, "growth", tpfile, "--terms", "0")
    assert code == 0 and out == "0 1 1\n"


def test_growth_table(capsys, tpfile):
    code, out, _ = run(capsys, "growth", tpfile, "--terms", "3")
    lines = out.splitlines()
    assert lines[:4] == ["0 1 1", "1 14 15", "2 98 113", "3 560 673"]
    assert any(ln.startswith("# recurrence") for ln in lines)


def test_group_arithmetic(capsys, tpfile, G2):
    code, out, _ = run(capsys, "mul", tpfile, "1,2", "3")
    assert out == f"nf: {' '.join(map(str, G2.reduce((1, 2, 3))))}\n"
    code, out, _ = run(capsys, "inv", tpfile, "0,8")
    assert out == f"nf: {' '.join(map(str, G2.inverse((0, 8))))}\n"
    code, out, _ = run(capsys, "dist", tpfile, "e", "0,8", "--json")
    assert json.loads(out) == {"dist": 2}


def test_fellow_and_multiplier(capsys, tpfile, tmp_path):
    code, out, _ = run(capsys, "fellow-check", tpfile, "--max-len", "2")
    assert code == 0 and "max k: 1" in out
    target = tmp_path / "m.txt"
    code, out, _ = run(capsys, "multiplier", tpfile, "e", "--out", target)
    assert code == 0 and target.read_text().startswith("multiplier identity\n")


def test_ball_export(capsys, tpfile, G2):
    code, out, _ = run(capsys, "ball", tpfile, "--radius", "1")
    assert code == 0 and out == G2.ball(1).dumps()
    assert out.startswith("graph 15 ")


def test_geometry_and_search(capsys, tmp_path, tp2):
    gfile = tmp_path / "g.txt"
    code, _, _ = run(capsys, "geometry", "2", "2", "--out", gfile)
    assert code == 0 and "subspaces:" in gfile.read_text()
    code, out, _ = run(capsys, "tp-search", gfile)
    assert code == 2 and "obstruction" in out
    code, out, _ = run(capsys, "tp-search", gfile, "--lambda-search", "--out-dir", tmp_path / "o")
    assert code == 0
    assert pres.load(tmp_path / "o" / "tp_0.txt") == tp2


def test_coxeter_exit_codes(capsys, fixtures):
    code, out, _ = run(capsys, "coxeter-hyp", fixtures / "cox_237.txt")
    assert code == 0 and out.startswith("verdict: HYPERBOLIC")
    code, out, _ = run(capsys, "coxeter-hyp", fixtures / "cox_333.txt")
    assert code == 2 and "affine subsystem [0, 1, 2]" in out
    code, out, _ = run(capsys, "coxeter-hyp", fixtures / "cox_dinf2.txt", "--json")
    assert json.loads(out)["reason"] == "commuting"


def test_probe_commands(capsys, fixtures, tpfile):
    code, out, _ = run(capsys, "probe-bigon", fixtures / "tree.graph", "--radius", "3")
    assert code == 0 and "bigon K              0" in out
    code, out, _ = run(capsys, "probe-triangle", fixtures / "cycle6.graph", "--radius", "3",
                       "--json")
    assert json.loads(out)["triangle_delta"] == 1
    code, out, _ = run(capsys, "probe-bigon", tpfile, "--radius", "2", "--json")
    d = json.loads(out)
    assert d["mode"] == "anchored" and d["bigon_K"] == 1


def test_error_codes(capsys, fixtures, tpfile, tmp_path):
    assert run(capsys, "growth", tpfile, "--bogus")[0] == 4
    assert run(capsys, "nf", tpfile, "0,zz")[0] == 4
    assert run(capsys, "nf", tpfile, "99")[0] == 4
    assert run(capsys, "tp-verify", tmp_path / "missing.txt")[0] == 4
    bad = tmp_path / "bad.graph"
    bad.write_text("graph 2 1\n0 7\n")
    code, _, err = run(capsys, "probe-bigon", bad, "--radius", "1")
    assert code == 4 and "line 2" in err
    code, _, err = run(capsys, "probe-bigon", fixtures / "z2_r6.graph", "--radius", "6",
                       "--cap", "3")
    assert code == 3 and "cap" in err
    assert run(capsys, "geometry", "2", "6")[0] == 4
    assert run(capsys, "growth", tpfile, "--terms", "-1")[0] == 4


def test_deterministic_in_process(capsys, tpfile):
    a = run(capsys, "multiplier", tpfile, "5")
    b = run(capsys, "multiplier", tpfile, "5")
    assert a == b
