import json

import pytest

from main import main
from modules.cli import build_parser, config_from_args, parse_range, parse_sequence_selector
from modules.core.sequence_generator import ThueToeplitzSequence, window
from modules.utils.errors import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.mark.parametrize("text, expected", [
    ("3", [3]),
    ("1..4", [1, 2, 3, 4]),
    ("1..4,9", [1, 2, 3, 4, 9]),
    (" 2 , 5 ", [2, 5]),
])
def test_parse_range(text, expected):
    assert parse_range(text) == expected


@pytest.mark.parametrize("text", ["", "5..3", "a", "1..b"])
def test_parse_range_rejects(text):
    with pytest.raises(ConfigError):
        parse_range(text)


def test_parse_sequence_selector():
    assert parse_sequence_selector("TM") == ("tm", "")
    assert parse_sequence_selector("morse:001,01*") == ("morse", "001,01*")
    assert parse_sequence_selector("counterexample") == ("counterexample", "5")
    with pytest.raises(ConfigError):
        parse_sequence_selector("morse")
    with pytest.raises(ConfigError):
        parse_sequence_selector("fibonacci")


@pytest.mark.parametrize("argv", [
    ["--format", "json", "--threads", "2", "sigma", "1"],
    ["sigma", "1", "--format", "json", "--threads", "2"],
])
def test_global_flags_in_either_position(argv):
    config = config_from_args(build_parser().parse_args(argv))
    assert config.fmt == "json"
    assert config.threads == 2
    assert config.get("ks") == [1]


def test_valuations_range_keeps_odd_values():
    config = config_from_args(build_parser().parse_args(["valuations", "1..9"]))
    assert config.get("Ks") == [1, 3, 5, 7, 9]


def test_sigma_table_output(capsys):
    assert run(capsys, "sigma", "1") == (0, "1, -1/3\n")
    assert run(capsys, "sigma", "0") == (0, "0, 1/1\n")


def test_sigma_range_odd_only(capsys):
    code, payload = run_json(capsys, "sigma", "1..9", "--odd")
    assert code == 0
    assert [row["k"] for row in payload["rows"]] == [1, 3, 5, 7, 9]
    assert payload["rows"][-1]["sigma"] == "1/6"


def test_valuations_base_cases_are_not_violations(capsys):
    code, payload = run_json(capsys, "valuations", "1..63")
    assert code == 0
    assert payload["summary"]["violations"] == 0
    assert payload["summary"]["base_case_exceptions"] == [1, 3]


def test_equiv_outputs(capsys):
    code, out = run(capsys, "equiv", "8", "15")
    assert code == 0
    assert "true" in out
    code, payload = run_json(capsys, "equiv", "0..7")
    assert code == 0
    assert [row["members"] for row in payload["rows"]] == [[0], [1], [2, 3], [4, 7], [5, 6]]


def test_disjoint_witness(capsys):
    code, payload = run_json(capsys, "disjoint", "1", "3")
    assert code == 0
    row = payload["rows"][0]
    assert row["t"] == 3
    assert row["c1"] == "1/3"
    assert row["c2"] == "1/6"
    assert row["expected_disjoint"] is True


def test_generate(capsys):
    code, out = run(capsys, "generate", "thue", "--length", "7")
    assert code == 0
    assert "1011101" in out
    code, payload = run_json(capsys, "generate", "morse:0110,001", "--length", "12")
    assert code == 0
    assert len(payload["rows"][0]["word"]) == 12


def test_toeplitz_stage(capsys):
    code, payload = run_json(capsys, "toeplitz", "thue", "--stage", "4", "--horizon", "64")
    assert code == 0
    row = payload["rows"][0]
    assert row["block"] == str(window(ThueToeplitzSequence(), 0, 15))
    assert row["holes"] == [15, 31, 47, 63]
    assert row["hole_density"] == "1/16"


def test_correlate_reports_exact_target(capsys):
    code, payload = run_json(capsys, "correlate", "tm", "1", "1024")
    assert code == 0
    assert payload["rows"][0]["exact"] == "-1/3"


def test_stabilize(capsys):
    code, payload = run_json(capsys, "stabilize", "001,01*", "1", "4096", "--levels", "1..3")
    assert code == 0
    assert [row["k"] for row in payload["rows"]] == [1, 2, 3]
    assert all(row["exact"] == "1/3" for row in payload["rows"])


def test_orthogonality(capsys):
    code, payload = run_json(capsys, "orthogonality", "tm", "1000")
    assert code == 0
    assert [row["N"] for row in payload["rows"]] == [10, 100, 1000]
    code, payload = run_json(capsys, "orthogonality", "thue", "1500", "--word", "101",
                             "--offset", "2", "--checkpoints", "10,100")
    assert code == 0
    assert [row["N"] for row in payload["rows"]] == [10, 100, 1500]


def test_rows(capsys):
    code, payload = run_json(capsys, "rows", "1000", "--stage", "3")
    assert code == 0
    assert len(payload["rows"]) == 8
    assert payload["summary"]["hole_rows"] == 1
    assert payload["summary"]["identity_ok"] is True


def test_counterexample(capsys):
    code, payload = run_json(capsys, "counterexample", "10000")
    assert code == 0
    assert payload["summary"]["rho"] == "1/4"
    assert payload["summary"]["inequality_holds"] is True
    assert [row["N"] for row in payload["rows"]] == [10, 100, 1000, 10000]


@pytest.mark.parametrize("argv, code", [
    (["--sieve-limit", "0", "sigma", "1"], 2),
    (["--sieve-limit", "100", "orthogonality", "tm", "1000"], 3),
    (["counterexample", "1000", "--base", "4"], 2),
    (["counterexample", "1000", "--chain", "3"], 2),
    (["rows", "1000", "--stage", "3", "--seq", "tm"], 2),
    (["valuations", "4"], 2),
    (["disjoint", "3", "3"], 2),
    (["stabilize", "001*", "1", "1000"], 2),
    (["--max-horizon", "100", "correlate", "tm", "1", "100"], 2),
    (["generate", "morse:0110,001", "--length", "13"], 2),
    (["rows", "1000", "--stage", "40"], 3),
    (["counterexample", "1000", "--chain", "6,36", "--base", "1"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    assert capsys.readouterr().out == ""


def test_usage_error_exits_through_argparse():
    with pytest.raises(SystemExit) as excinfo:
        main(["sigma"])
    assert excinfo.value.code == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "correlate", "morse:001,01*", "3", "5000", "--threads", "3")
    second = run(capsys, "correlate", "morse:001,01*", "3", "5000")
    assert first == second


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "reports" / "sigma.json"
    assert main(["sigma", "1..3", "--format", "json", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["experiment"] == "sigma"
    assert [row["sigma"] for row in payload["rows"]] == ["-1/3", "-1/3", "1/3"]


def test_rows_has_no_sign_flag():
    with pytest.raises(SystemExit) as excinfo:
        main(["rows", "1000", "--stage", "3", "--sign"])
    assert excinfo.value.code == 2


def test_toeplitz_block_clipped_to_horizon(capsys):
    code, payload = run_json(capsys, "toeplitz", "thue", "--stage", "6", "--horizon", "20")
    assert code == 0
    row = payload["rows"][0]
    assert row["block_length"] == 20
    assert len(row["block"]) == 20


def test_counterexample_explicit_chain_with_small_base(capsys):
    code, payload = run_json(capsys, "counterexample", "1000", "--chain", "6,36", "--base", "3")
    assert code == 0
    assert payload["summary"]["rho"] == "5/24"
    assert payload["summary"]["inequality_holds"] is True
