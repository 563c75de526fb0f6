import json
import subprocess
import sys


from glp.cli import main, run
from glp.proofs import reflection_under_box_proof, proof_to_json
from glp.syntax import parse


def glp(*args, env=None):
    return subprocess.run([sys.executable, "-m", "glp.cli", *args], capture_output=True, text=True, env=env)


def test_decide_exit_codes(tmp_path):
    assert glp("decide", "--logic", "glp", "--formula", "[1]([0]p1 -> p1)").returncode == 0
    out = tmp_path / "m.json"
    r = glp("decide", "--logic", "glp", "--formula", "[1][0]F", "--countermodel", str(out))
    assert r.returncode == 1 and out.exists()
    check = glp("model", "check", str(out), "--formula", "[1][0]F", "--json")
    data = json.loads(check.stdout)
    assert data["j_frame"] and data["root"] == "w0" and not data["holds_at_root"]


def test_countermodels_revalidate(tmp_path):
    for i, text in enumerate(["[0]F", "[0]p0 -> [1]p0", "<1>T -> <0><0>T", "[1]p0 | [1]~p0"]):
        path = tmp_path / f"m{i}.json"
        code, _, _ = run(["decide", "--logic", "j", "--formula", text, "--countermodel", str(path)])
        assert code == 1
        code, out, _ = run(["model", "check", str(path), "--formula", text, "--json"])
        assert code == 1 and out["j_frame"] and out["root"] is not None


def test_dot_export(tmp_path):
    path = tmp_path / "m.dot"
    run(["decide", "--formula", "[1][0]F", "--countermodel", str(path)])
    assert path.read_text().startswith("digraph")


def test_json_verdict_shape():
    code, out, _ = run(["decide", "--formula", "[0]F", "--max-worlds", "5", "--json"])
    assert code == 1 and out["verdict"] == "invalid" and out["cap"] == 5 and "worlds" in out["countermodel"]
    code, out, _ = run(["decide", "--formula", "[0]p0 -> [0][0]p0", "--json"])
    assert code == 0 and out["verdict"] == "no-countermodel" and out["cap"] == 8
    assert parse(out["formula"]) == parse("[0]p0 -> [0][0]p0")


def test_env_cap_fallback():
    import os
    env = dict(os.environ, GLP_MAX_WORLDS="2")
    r = glp("decide", "--formula", "[1][0]F", "--json", env=env)
    assert r.returncode == 0 and json.loads(r.stdout)["cap"] == 2


def test_usage_errors():
    assert run(["decide", "--formula", "p0 &"])[0] == 64
    assert run(["decide", "--formula", "[9]p0"])[0] == 64
    assert run(["nonsense"])[0] == 64
    assert run(["decide", "--formula", "p0", "--max-worlds", "0"])[0] == 64
    assert run(["reduce", "m"])[0] == 64


def test_resource_error():
    code, out, _ = run(["decide", "--formula", "<0>p0 & <1>~p0 -> [0]p1", "--budget", "1"])
    assert code == 3


def test_proof_check(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(proof_to_json(reflection_under_box_proof(1)))
    assert run(["proof", "check", str(good)])[0] == 0
    data = json.loads(good.read_text())
    data["lines"][0]["formula"] = "p0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(["proof", "check", str(bad), "--json"])
    assert code == 1 and out["errors"][0]["line"] == 1
    assert run(["proof", "check", str(tmp_path / "missing.json")])[0] == 65


def test_reduce():
    assert run(["reduce", "m", "--formula", "[0]p0 -> [1]p0"])[1]["formula"] == "[0]p0 -> [1]p0"
    assert run(["reduce", "h", "--formula", "p0"])[1]["formula"] == "T"
    assert run(["reduce", "q", "--k", "2"])[1]["formula"] == "p0 | [0]p0"
    assert run(["reduce", "qstar", "--k", "2"])[1]["formula"] == "p0 & <0>p0"


def test_unify_commands():
    code, out, _ = run(["unify", "search", "--formula", "[1]p0"])
    assert code == 0 and out["bindings"] == {"p0": "T"}
    assert run(["unify", "search", "--formula", "p0 & ~p0"])[0] == 1
    assert run(["unify", "check", "--formula", "[1]p0", "--subst", "p0:=[0]p0 -> p0"])[0] == 0
    assert run(["unify", "check", "--formula", "[1]p0", "--subst", "p0:=[0]F"])[0] == 1
    assert run(["unify", "qchain", "--family", "qbig", "--k", "2"])[0] == 0
    assert run(["unify", "check", "--formula", "[1]p0", "--subst", "q0:=T"])[0] == 64


def test_arith_commands():
    assert run(["admissible", "--premises", "<0>T", "--conclusion", "F"])[0] == 0
    assert run(["admissible", "--premises", "T", "--conclusion", "[0]F"])[0] == 1
    assert run(["arith-unifiable", "--formula", "p0", "--cross-check"])[0] == 0
    assert run(["arith-unifiable", "--formula", "<0>T"])[0] == 1


def test_worm_normalize():
    code, out, _ = run(["worm", "normalize", "--formula", "<0>T"])
    assert code == 0 and out["normal_form"] == "<0><0>T"
    assert run(["worm", "normalize", "--formula", "F"])[1]["answer"] == "bottom"


def test_batch_preserves_order(tmp_path):
    queries = tmp_path / "q.txt"
    queries.write_text('decide --formula "[0]F"\n# comment\nunify search --formula "[1]p0"\n'
                       'decide --formula "[0]p0 -> [0][0]p0"\n')
    code, out, _ = run(["batch", str(queries), "--jobs", "3"])
    assert [r["exit"] for r in out["results"]] == [1, 0, 0]
    assert code == 1


def test_main_prints_json(capsys):
    assert main(["decide", "--formula", "T", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "no-countermodel"
    assert main(["--help"]) == 0
