import json
from dataclasses import replace
from io import StringIO

import pandas as pd
import pytest

import cli
from cli import format_rational, main
from config import DEFAULT_SEED
from rings import DATA_DIR


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_format_rational():
    assert format_rational(2) == "2/1"
    assert format_rational(0.5) == "1/2"


def test_ring_check_example(capsys):
    report = run_json(capsys, "ring-check", "--example", "regular-2")
    assert report["relation_basis_size"] == 0
    assert report["dimension"] == 2
    assert report["maximal_ideal_m_primary"] is True


def test_ring_check_file(capsys):
    report = run_json(capsys, "ring-check", "--ring", str(DATA_DIR / "twisted_cubic.ring"))
    assert report["dimension"] == 2
    assert report["p"] == 2
    assert report["variables"] == "a,b,c,d"


def test_fsig_a1(capsys):
    report = run_json(capsys, "fsig", "--example", "a1", "--e-max", "2", "--t-max", "3")
    assert [row["normalized"] for row in report["rows"]] == ["5/9", "41/81"]
    assert [row["stable_t"] for row in report["rows"]] == [1, 1]
    assert report["rows_agree"] is True
    assert report["all_stable"] is True
    assert report["hk_difference_t"] == 1


def test_fsig_with_explicit_parameters(capsys):
    report = run_json(capsys, "fsig", "--example", "regular-2", "--params", "x, y", "--socle", "1",
                      "--e-max", "2", "--t-max", "3")
    assert [row["normalized"] for row in report["rows"]] == ["1/1", "1/1"]
    assert report["signature"]["limit"] == "1/1"


def test_resource_limit_exit_code(capsys):
    code, _, err = run(capsys, "fsig", "--example", "a1", "--max-basis", "1")
    assert code == 3
    assert "Error" in err


def test_ehk_rejects_non_primary_ideal(capsys):
    code, out, _ = run(capsys, "ehk", "--example", "regular-2", "--ideal", "x")
    assert code == 2
    assert out == ""


def test_parse_error_exit_code(capsys):
    code, _, _ = run(capsys, "ehk", "--example", "regular-2", "--ideal", "x +")
    assert code == 4


def test_bad_ring_file_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.ring"
    path.write_text("p = 3\nvars = x, y\nrelation = x*y - $\n", encoding="utf-8")
    code, _, err = run(capsys, "ring-check", "--ring", str(path))
    assert code == 4
    assert "line 3" in err


def test_undecodable_ring_file_exit_code(tmp_path, capsys):
    path = tmp_path / "binary.ring"
    path.write_bytes(b"p = 3\n\xff\xfe = x\n")
    code, out, err = run(capsys, "ring-check", "--ring", str(path))
    assert code == 4
    assert out == ""
    assert "line 2" in err


def test_validation_exit_codes(capsys):
    assert run(capsys, "ring-check")[0] == 2
    assert run(capsys, "fsig", "--example", "a1", "--t-max", "2")[0] == 2
    assert run(capsys, "ring-check", "--ring", str(DATA_DIR / "a1.ring"), "--p", "5")[0] == 2
    assert run(capsys, "eq1", "--example", "a1")[0] == 2
    assert run(capsys)[0] == 2


def test_ehk_csv(capsys):
    code, out, _ = run(capsys, "ehk", "--example", "regular-2", "--ideal", "x^2, y", "--e-max", "2",
                       "--format", "csv")
    assert code == 0
    frame = pd.read_csv(StringIO(out))
    assert list(frame.columns) == ["e", "q", "length", "normalized"]
    assert list(frame["length"]) == [8, 32]
    assert list(frame["normalized"]) == ["2/1", "2/1"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, err = run(capsys, "ehk", "--example", "a1", "--ideal", "x, y, z", "--e-max", "1",
                         "--out", str(target))
    assert code == 0
    assert out == ""
    assert "report.json" in err
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["rows"][0]["normalized"] == "13/9"


def test_runs_are_deterministic(capsys):
    argv = ("condition-a", "--example", "a1", "--e-max", "1", "--t-max", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]


def test_condition_a(capsys):
    report = run_json(capsys, "condition-a", "--example", "a1", "--e-max", "1", "--t-max", "3")
    assert report["verdict"] == {"STABLE_AT": 1}
    assert report["cofinal"] is True
    assert report["rows"][0]["kernel_length"] == 5


def test_condition_b(capsys):
    report = run_json(capsys, "condition-b", "--example", "regular-2", "--e-max", "2", "--t-max", "3")
    assert report["verdict"] == {"STABLE_AT": 1}
    assert report["equivalence_holds"] is True
    assert [row["kernel_length"] for row in report["rows"]] == [4, 16]


def test_eq1(capsys):
    report = run_json(capsys, "eq1", "--example", "qgor-demo", "--n", "1", "--N", "2", "--i", "2")
    assert report["verdict"] == "HOLDS"
    assert report["witness"] is None
    assert report["notes"]


@pytest.mark.slow
def test_self_test(capsys):
    code, out, _ = run(capsys, "--self-test")
    report = json.loads(out)
    assert code == 0
    assert report["passed"] is True
    assert {entry["example"] for entry in report["examples"]} >= {"a1", "qgor-demo", "nodal-line"}


def _shift_first_row(monkeypatch, stable):
    real = cli.signature_sequence

    def shifted(*args, **kwargs):
        estimate = real(*args, **kwargs)
        first = estimate.rows[0]
        estimate.rows[0] = replace(first, length=first.length + 1, stable=stable)
        return estimate

    monkeypatch.setattr(cli, "signature_sequence", shifted)


def test_fsig_rejects_disagreeing_stable_row(monkeypatch, capsys):
    _shift_first_row(monkeypatch, stable=True)
    code, out, err = run(capsys, "fsig", "--example", "a1", "--e-max", "2", "--t-max", "3")
    assert code == 2
    assert out == ""
    assert "q = 3" in err


def test_fsig_tolerates_disagreeing_unstable_row(monkeypatch, capsys):
    _shift_first_row(monkeypatch, stable=False)
    report = run_json(capsys, "fsig", "--example", "a1", "--e-max", "2", "--t-max", "3")
    assert report["rows_agree"] is False
    assert report["all_stable"] is False


def test_eq1_from_ring_file(capsys):
    report = run_json(capsys, "eq1", "--ring", str(DATA_DIR / "twisted_cubic.ring"), "--n", "1", "--N", "2",
                      "--i", "2")
    assert report["verdict"] == "HOLDS"
    assert report["ring"] == "twisted-cubic"


def test_eq1_needs_qgorenstein_keys(capsys):
    code, out, err = run(capsys, "eq1", "--ring", str(DATA_DIR / "a1.ring"))
    assert code == 2
    assert "canonical" in err


def test_seed_reaches_run_config():
    args = cli.build_parser().parse_args(["self-test", "--seed", "7"])
    assert cli.run_config(args).seed == 7
    assert cli.run_config(cli.build_parser().parse_args(["self-test"])).seed == DEFAULT_SEED


def test_self_test_oracles_follow_the_seed():
    first = cli.self_test_oracles(7)
    assert first == cli.self_test_oracles(7)
    assert first["passed"] is True
    assert first["checked"] == 2 * cli.SELF_TEST_ORACLE_SAMPLES
    assert first["seed"] == 7


@pytest.mark.slow
def test_self_test_is_byte_identical(capsys):
    first = run(capsys, "--self-test", "--seed", "11")
    second = run(capsys, "--self-test", "--seed", "11")
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert json.loads(first[1])["oracles"]["seed"] == 11
