import json

import jsonschema
import pytest

from arcfire.cli import main
from arcfire.service import REPORT_SCHEMA

from conftest import C3_TEXT, K3_TEXT


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text(K3_TEXT)
    return str(path)


@pytest.fixture
def c3_file(tmp_path):
    path = tmp_path / "c3.txt"
    path.write_text(C3_TEXT)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_minfas_text_output(capsys, k3_file):
    code, out, _ = run(capsys, ["minfas", k3_file, "--emit-witness"])
    assert code == 0
    assert "n: 3" in out and "m: 6" in out
    assert "mode: exact" in out
    assert "size: 3" in out
    assert "witness:" in out


def test_minfas_json_report_validates(capsys, k3_file):
    code, out, _ = run(capsys, ["minfas", k3_file, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["command"] == "minfas"
    assert report["result"]["size"] == 3
    assert report["input_digest"].startswith("sha256:")


def test_text_and_json_carry_the_same_numbers(capsys, c3_file):
    _, out_text, _ = run(capsys, ["minfas", c3_file])
    _, out_json, _ = run(capsys, ["minfas", c3_file, "--format", "json"])
    size_text = int(out_text.split("size: ")[1].split()[0])
    assert size_text == json.loads(out_json)["result"]["size"] == 1


def test_runs_are_deterministic(capsys, k3_file):
    code1, first, _ = run(capsys, ["minfas", k3_file, "--emit-witness"])
    code2, second, _ = run(capsys, ["minfas", k3_file, "--emit-witness"])
    assert code1 == code2 == 0
    assert first == second
    ## JSON reports agree except for the timing field
    _, j1, _ = run(capsys, ["gen", "--n", "5", "--eulerian", "--seed", "9", "--format", "json"])
    _, j2, _ = run(capsys, ["gen", "--n", "5", "--eulerian", "--seed", "9", "--format", "json"])
    r1, r2 = json.loads(j1), json.loads(j2)
    r1.pop("ms"), r2.pop("ms")
    assert r1 == r2


def test_exit_2_on_missing_and_malformed_files(capsys, tmp_path):
    code, _, err = run(capsys, ["minfas", str(tmp_path / "absent.txt")])
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("what even is this\n")
    code, _, err = run(capsys, ["minfas", str(bad)])
    assert code == 2 and "line 1" in err


def test_exit_3_on_cap_and_override_with_estimate(capsys, tmp_path):
    lines = ["23 23"] + [f"{i} {(i + 1) % 23}" for i in range(23)]
    big = tmp_path / "big.txt"
    big.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, ["minfas", str(big)])
    assert code == 3 and "capped" in err
    code, out, err = run(capsys, ["minfas", str(big), "--max-exact-n", "23"])
    assert code == 0
    assert "size: 1" in out
    ## the memory estimate goes to stderr before the run
    assert "bytes" in err


def test_exit_4_on_unstable_config(capsys, k3_file, tmp_path):
    config = tmp_path / "hot.txt"
    config.write_text("1 9\n")
    code, _, err = run(capsys, ["check", k3_file, str(config), "--sink", "0"])
    assert code == 4 and "active" in err


def test_exit_4_on_non_eulerian_exact_minrec(capsys, tmp_path):
    path = tmp_path / "sinky.txt"
    path.write_text("3 3\n1 0\n2 0\n1 2\n")
    code, _, err = run(capsys, ["minrec", str(path)])
    assert code == 4 and "brute" in err
    code, out, _ = run(capsys, ["minrec", str(path), "--brute"])
    assert code == 0 and "route: brute" in out


def test_exit_2_on_bad_flags(capsys):
    assert main(["minfas"]) == 2
    assert main([]) == 2
    assert main(["minfas", "x", "--format", "yaml"]) == 2


def test_check_text_output(capsys, k3_file, tmp_path):
    config = tmp_path / "c.txt"
    config.write_text("1 1\n2 1\n")
    code, out, _ = run(capsys, ["check", k3_file, str(config), "--sink", "0"])
    assert code == 0
    assert "recurrent: true" in out
    assert "minimal: false" in out
    assert "burning order: 1 2" in out


def test_minrec_text_output(capsys, k3_file):
    code, out, _ = run(capsys, ["minrec", k3_file, "--emit-config"])
    assert code == 0
    assert "sink: 0" in out
    assert "min chips: 1" in out
    assert "config:" in out


def test_eulerianize_writes_file(capsys, tmp_path):
    src = tmp_path / "p1.txt"
    src.write_text("2 1\n0 1\n")
    dst = tmp_path / "lifted.txt"
    code, out, _ = run(capsys, ["eulerianize", str(src), "--out", str(dst)])
    assert code == 0
    assert out == ""
    text = dst.read_text()
    assert text.startswith("5 5\n")
    assert "# hub 2" in text


def test_gen_round_trips_through_minfas(capsys, tmp_path):
    out_file = tmp_path / "gen.txt"
    code, _, _ = run(capsys, ["gen", "--n", "6", "--eulerian", "--seed", "4", "--out", str(out_file)])
    assert code == 0
    code, out, _ = run(capsys, ["minfas", str(out_file), "--heuristic"])
    assert code == 0
    assert "mode: heuristic" in out


def test_gen_infeasible_is_exit_2(capsys):
    code, _, err = run(capsys, ["gen", "--n", "2", "--arcs", "3"])
    assert code == 2


def test_bench_csv(capsys, tmp_path):
    suite = tmp_path / "suite"
    suite.mkdir()
    (suite / "a_k3.txt").write_text(K3_TEXT)
    (suite / "b_c3.txt").write_text(C3_TEXT)
    (suite / "c_big.txt").write_text(
        "\n".join(["23 23"] + [f"{i} {(i + 1) % 23}" for i in range(23)]) + "\n"
    )
    (suite / "d_junk.txt").write_text("gibberish\n")
    code, out, _ = run(capsys, ["bench", str(suite)])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "instance,n,m,exact,heuristic,gap,ms"
    rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
    assert rows["a_k3.txt"][3] == "3" and rows["a_k3.txt"][4] == "3" and rows["a_k3.txt"][5] == "0"
    assert rows["b_c3.txt"][3] == "1"
    ## capped and broken instances stay isolated rows, the rest still solve
    assert rows["c_big.txt"][3] == "cap"
    assert rows["d_junk.txt"][3] == "error"


def test_bench_json_reports_caps(capsys, tmp_path):
    suite = tmp_path / "suite"
    suite.mkdir()
    (suite / "big.txt").write_text(
        "\n".join(["24 24"] + [f"{i} {(i + 1) % 24}" for i in range(24)]) + "\n"
    )
    code, out, _ = run(capsys, ["bench", str(suite), "--format", "json"])
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["caps_hit"] == ["exact:big.txt"]


def test_bench_rejects_missing_directory(capsys, tmp_path):
    code, _, err = run(capsys, ["bench", str(tmp_path / "nowhere")])
    assert code == 2
