import json

import pytest

from ordsat.automaton import automaton_to_json
from ordsat.cli import main
from ordsat.oracle import gen_automaton


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_unsat_example(capsys):
    code, out, _ = run(capsys, "sat", "p & !p")
    assert code == 1 and out.strip() == "UNSAT"


def test_def_omega_at_omega(capsys):
    code, out, _ = run(capsys, "sat-at", "--alpha", "w", "G+ X- true & F+ true & G+ X true")
    assert code == 0 and out.startswith("SAT")
    assert "length: w" in out
    code, _, _ = run(capsys, "sat-at", "--alpha", "5", "G+ X- true & F+ true & G+ X true")
    assert code == 1


def test_sat_at_code(capsys):
    code, out, _ = run(capsys, "sat-at", "--code", "(-2, [1, 0])", "--code-m", "w", "p")
    assert code == 0 and "length: w\n" in out
    assert run(capsys, "sat-at", "--code", "(-2, [1, 0])", "p")[0] == 2
    assert run(capsys, "sat-at", "--code", "(1, -)", "--code-m", "w", "p")[0] == 2
    assert run(capsys, "sat-at", "p")[0] == 2


@pytest.mark.parametrize("seed", range(6))
def test_emptiness_witness_round_trip(capsys, tmp_path, seed):
    aut_file = tmp_path / "automaton.json"
    aut_file.write_text(json.dumps(automaton_to_json(gen_automaton(seed, 3))))
    run_file = tmp_path / "out.run"
    code, out, _ = run(capsys, "emptiness", str(aut_file), "--witness", str(run_file))
    if code == 0:
        assert out.startswith("NONEMPTY")
        code2, out2, _ = run(capsys, "check-run", str(aut_file), str(run_file))
        assert code2 == 0 and out2.startswith("ACCEPTED")
    else:
        assert code == 1 and out.strip() == "EMPTY" and not run_file.exists()
    code3, _, _ = run(capsys, "emptiness", str(aut_file), "--engine", "topdown")
    assert code3 == code


def test_sat_witness_rechecked_by_formula(capsys, tmp_path):
    w = tmp_path / "w.run"
    assert run(capsys, "sat", "G F p & G F !p", "--witness", str(w))[0] == 0
    code, out, _ = run(capsys, "check-run", str(w), "--formula", "G F p & G F !p", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["valid"] and doc["accepting"]
    # the same run does not fit a different formula's automaton
    assert run(capsys, "check-run", str(w), "--formula", "G p")[0] == 2


def test_sat_at_json_stays_small(capsys, tmp_path):
    w = tmp_path / "w.run"
    argv = ["sat-at", "--code", "(-1, -)", "--code-m", "w", "G F+ p"]
    code, out, _ = run(capsys, *argv, "--json", "--witness", str(w))
    doc = json.loads(out)
    assert code == 0 and doc["formula"] == "((true U p) & !(true U !(true U p)))" and doc["length"] == "w^12"
    assert len(out) < 100_000
    code, out, _ = run(capsys, "check-run", str(w), "--formula", "G F+ p",
                       "--code", "(-1, -)", "--code-m", "w")
    assert code == 0 and out.startswith("ACCEPTED")
    assert run(capsys, "check-run", str(w), "--formula", "G F+ p")[0] == 2
    assert run(capsys, "check-run", str(w), "--alpha", "w")[0] == 2


def test_translate_round_trip(capsys, tmp_path):
    out_file = tmp_path / "a.json"
    assert run(capsys, "translate", "p U q", "-o", str(out_file))[0] == 0
    code, out, _ = run(capsys, "emptiness", str(out_file))
    assert code == 0


def test_json_is_deterministic(capsys):
    argv = ["sat", "(p S q) U (!p & G+ q)", "--json"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    doc = json.loads(first[1])
    assert doc["status"] == "SAT" and "witness" in doc


def test_def_alpha_and_quant(capsys):
    code, out, _ = run(capsys, "def-alpha", "--alpha", "w", "--json")
    assert code == 0 and json.loads(out)["size"] > 0
    assert run(capsys, "quant", "X^w p", "--alpha", "w+1")[0] == 0
    assert run(capsys, "quant", "X^w p", "--alpha", "w")[0] == 1
    code, out, _ = run(capsys, "quant", "p U^{w^w} q", "--translate-only")
    assert code == 0 and out.strip() == "(p U q)"


def test_oracle_tasks(capsys, monkeypatch):
    assert run(capsys, "oracle", "enum", "p U q", "-n", "1")[0] == 1
    assert run(capsys, "oracle", "enum", "p U q", "-n", "2")[0] == 0
    assert run(capsys, "oracle", "lasso", "G p", "--loop", '[["p"]]')[0] == 0
    monkeypatch.setenv("ORDSAT_SEED", "4")
    a = run(capsys, "oracle", "gen-formula", "--size", "5")
    assert a == run(capsys, "oracle", "gen-formula", "--size", "5")
    code, out, _ = run(capsys, "oracle", "gen-automaton", "--basis", "2")
    assert code == 0 and "locations" in json.loads(out)


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "sat", "p &")[0] == 2
    assert run(capsys, "sat-at", "--alpha", "w^w", "p")[0] == 2
    assert run(capsys, "emptiness", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "emptiness", str(bad))[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["oracle", "enum"])
    assert e.value.code == 2


def test_resource_caps(capsys):
    code, _, err = run(capsys, "sat", "G F p & G F !p", "--max-locations", "1")
    assert code == 3 and "resource limit" in err
    assert run(capsys, "translate", "X X X X X X p", "--max-closure", "4")[0] == 3
