import json
import subprocess
import sys

import pytest

from groundsize.cli import build_report, main
from groundsize.estimator import analyze
from groundsize.program import load_program

from support import PI1, PI2, PI3


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"pi1": PI1, "pi2": PI2, "pi3": PI3, "pi2_extra": PI2 + " t(1).",
                       "facts": "a(1). a(2). b(x).", "unsafe": "p(X) :- q(Y).",
                       "broken": "p(1"}.items():
        out[name] = tmp_path / f"{name}.lp"
        out[name].write_text(text)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_estimate_totals(capsys, files):
    for name, total in (("pi1", 5), ("pi2", 11)):
        code, out, _ = run(capsys, "estimate", files[name], "--json")
        assert code == 0 and json.loads(out)["total"] == total


def test_estimate_human_and_per_rule(capsys, files):
    code, out, _ = run(capsys, "estimate", files["pi2"], "--per-rule")
    assert code == 0
    assert "s/3[1]" in out and out.rstrip().endswith("total 11")
    assert "4  s(X,Y,Z) :- r(X), p(X), p(Y), q(Y,Z)." in out


def test_report_total_is_sum_of_rule_rows():
    prog = load_program(PI3 + " a(1) | a(2) :- p(1).")
    report = build_report(prog, analyze(prog), per_rule=True)
    assert report["total"] == sum(r["estimate"] for r in report["perRule"])


def test_json_shape(capsys, files):
    _, out, _ = run(capsys, "estimate", files["pi2"], "--json")
    report = json.loads(out)
    assert set(report) == {"perArgument", "total", "diagnostics"}
    row = next(r for r in report["perArgument"] if r["argument"] == "s/3[1]")
    assert row == {"argument": "s/3[1]", "min": 2, "max": 2, "range": 1, "size": 2 - 1}
    _, out, _ = run(capsys, "estimate", files["pi2"], "--json", "--per-rule")
    assert "perRule" in json.loads(out)


def test_undefined_bounds_are_null(capsys, tmp_path):
    f = tmp_path / "u.lp"
    f.write_text("q(X) :- p(X).")
    _, out, _ = run(capsys, "estimate", f, "--json")
    rows = json.loads(out)["perArgument"]
    assert all(r["min"] is None and r["size"] == 0 for r in rows)


def test_unsafe_rule_exit_1(capsys, files):
    code, _, err = run(capsys, "estimate", files["unsafe"])
    assert code == 1 and "p(X) :- q(Y)." in err and "X" in err


def test_parse_error_exit_1(capsys, files):
    code, _, err = run(capsys, "estimate", files["broken"])
    assert code == 1 and "1:" in err


def test_missing_file_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "estimate", tmp_path / "nope.lp")
    assert code == 1


def test_dump_graph(capsys, files):
    code, out, _ = run(capsys, "estimate", files["pi3"], "--dump-graph")
    assert code == 0 and "digraph components" in out and '"s/3" -> "q/2";' in out


def test_keys_option(capsys, tmp_path):
    prog = tmp_path / "k.lp"
    prog.write_text("q(1,1,1). q(1,1,2). q(2,2,3). h(X,Y) :- q(X,Y,V).")
    keys = tmp_path / "keys.txt"
    keys.write_text("q/3: 1,2\n")
    _, out, _ = run(capsys, "estimate", prog, "--json")
    _, keyed, _ = run(capsys, "estimate", prog, "--json", "--keys", keys)
    assert json.loads(out)["total"] == 3 + 12
    assert json.loads(keyed)["total"] == 3 + 4
    keys.write_text("q/3: 1\nq/3: 2\n")
    assert run(capsys, "estimate", prog, "--keys", keys)[0] == 1


def test_compare(capsys, files):
    code, out, _ = run(capsys, "compare", files["pi2"], files["pi2_extra"])
    assert code == 2 and out.strip() == "Discard (original 11, rewritten 12)"
    code, out, _ = run(capsys, "compare", files["pi2"], files["pi2"])
    assert code == 0 and out.startswith("Keep")
    code, _, _ = run(capsys, "compare", files["pi2"], files["broken"])
    assert code == 1


def test_pick(capsys, files):
    code, out, _ = run(capsys, "pick", files["pi2"], files["pi1"], files["pi3"])
    assert code == 0
    best = [line for line in out.splitlines() if "<- best" in line]
    assert len(best) == 1 and "pi1.lp" in best[0]


def test_oracle_ground(capsys, files):
    code, out, _ = run(capsys, "oracle-ground", files["pi1"])
    assert code == 0 and "ground rules 5" in out
    _, out, _ = run(capsys, "oracle-ground", files["pi1"], "--naive")
    assert "ground rules 6" in out and "q/2[1]: 3" in out
    _, out, _ = run(capsys, "oracle-ground", files["pi2"], "--count-facts", "false")
    assert "ground rules 4" in out
    _, out, _ = run(capsys, "oracle-ground", files["facts"], "--emit-ground")
    assert out.splitlines() == ["a(1).", "a(2).", "b(x)."]


def test_oracle_limit_exit_3(capsys, files):
    code, _, err = run(capsys, "oracle-ground", files["pi3"], "--max-rules", "3")
    assert code == 3 and "limit" in err
    assert run(capsys, "error-factor", files["pi3"], "--max-atoms", "2")[0] == 3


def test_error_factor(capsys, files, tmp_path):
    code, out, _ = run(capsys, "error-factor", files["pi2"])
    assert code == 0 and "predicted 11, actual 9, factor 11/9" in out
    _, out, _ = run(capsys, "error-factor", files["facts"])
    assert "factor 1 " in out
    batch = tmp_path / "batch"
    batch.mkdir()
    (batch / "a_pi1.lp").write_text(PI1)
    (batch / "b_pi2.lp").write_text(PI2)
    (batch / "notes.txt").write_text("not a program")
    code, out, _ = run(capsys, "error-factor", "--batch", batch)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("a_pi1.lp") and lines[1].startswith("b_pi2.lp")
    assert "mean error factor over 2 file(s): 10/9" in lines[2]   # (1 + 11/9) / 2
    assert run(capsys, "error-factor", "--batch", batch, "--pattern", "*.txt")[0] == 1


def test_error_factor_needs_one_source(capsys, files, tmp_path):
    assert run(capsys, "error-factor")[0] == 1
    assert run(capsys, "error-factor", files["pi1"], "--batch", tmp_path)[0] == 1


def test_zero_actual_size_exit_1(capsys, tmp_path):
    f = tmp_path / "z.lp"
    f.write_text("p(X) :- q(X).")
    assert run(capsys, "error-factor", f)[0] == 1


def test_module_entry_point(files):
    done = subprocess.run([sys.executable, "-m", "groundsize", "estimate", str(files["pi1"]),
                           "--json"], capture_output=True, text=True)
    assert done.returncode == 0 and json.loads(done.stdout)["total"] == 5
