import json
from fractions import Fraction

import pytest

from modules.core import MoebiusExperiments, MoebiusSieve, SpectralEngine, ToeplitzBuilder
from modules.utils import (CapacityError, ConfigError, DomainError, InvariantViolation,
                           ReportWriter, ResourceMonitor, RunConfig, RunLogger, TimingRecorder,
                           WitnessNotFoundError, exit_code_for, render_record)

RECORD = {
    "experiment": "demo",
    "params": {"command": "demo", "N": 10},
    "rows": [{"k": 1, "sigma": Fraction(-1, 3), "ok": True, "z": 1 + 2j},
             {"k": 2, "sigma": Fraction(-2, 6), "ok": False, "z": None}],
    "summary": {"count": 2},
}


def test_render_table():
    assert render_record(RECORD, "table") == (
        "1, -1/3, true, 1+2j\n"
        "2, -1/3, false, \n"
        "# count: 2\n")


def test_render_csv():
    lines = render_record(RECORD, "csv").splitlines()
    assert lines[0] == "k,sigma,ok,z"
    assert lines[1] == "1,-1/3,true,1+2j"


def test_render_json():
    payload = json.loads(render_record(RECORD, "json"))
    assert payload["rows"][0]["sigma"] == "-1/3"
    assert payload["rows"][1]["z"] is None
    assert payload["summary"] == {"count": 2}


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        render_record(RECORD, "xml")


@pytest.mark.parametrize("error, code", [
    (InvariantViolation("x"), 1),
    (WitnessNotFoundError("x", {"r": 1}), 1),
    (CapacityError("x"), 3),
    (ConfigError("x"), 2),
    (DomainError("x"), 2),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


@pytest.mark.parametrize("kwargs, error", [
    ({"command": "nope"}, ConfigError),
    ({"command": "sigma", "fmt": "xml"}, ConfigError),
    ({"command": "sigma", "threads": 0}, ConfigError),
    ({"command": "correlate", "params": {"k": -1, "N": 10}}, DomainError),
    ({"command": "generate", "params": {"length": 0, "start": 0}}, DomainError),
    ({"command": "disjoint", "params": {"r": 3, "s": 4}}, DomainError),
    ({"command": "stabilize", "params": {"s": 2, "N": 10}}, DomainError),
    ({"command": "counterexample", "params": {"N": 10, "base": 3}}, ConfigError),
])
def test_run_config_validation(kwargs, error):
    with pytest.raises(error):
        RunConfig(**kwargs).validate()


def test_run_config_describe():
    config = RunConfig("sigma", {"ks": [1]}, out_path="x.json").validate()
    assert config.describe() == {"command": "sigma", "ks": [1]}
    assert config.get("missing", 7) == 7


def test_logger_filters_info_unless_verbose():
    seen = []
    quiet = RunLogger(lambda message, level: seen.append(level))
    quiet.log_message("hidden")
    quiet.log_message("shown", "WARNING")
    assert seen == ["WARNING"]
    quiet.set_verbose(True)
    quiet.log_message("now shown")
    assert seen == ["WARNING", "INFO"]


def test_timing_recorder():
    seen = []
    recorder = TimingRecorder(RunLogger(lambda message, level: seen.append((level, message))))
    recorder.start_timing("sieve")
    recorder.end_timing("sieve")
    assert recorder.get_timing("sieve") >= 0
    recorder.end_timing("never-started")
    assert seen[-1][0] == "WARNING"
    recorder.output_summary()
    assert any(level == "TIMING" and message.startswith("sieve") for level, message in seen)


def test_monitor_budget():
    monitor = ResourceMonitor()
    monitor.ensure_available(1024, "small")
    with pytest.raises(CapacityError):
        monitor.ensure_available(2**62, "huge")
    assert monitor.process_info()["rss"] > 0


@pytest.mark.parametrize("engine_class", [MoebiusSieve, SpectralEngine, ToeplitzBuilder,
                                          MoebiusExperiments, ResourceMonitor])
def test_engines_fall_back_to_stderr(capsys, engine_class):
    engine_class().log_message("预算不足", "WARNING")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "[WARNING] 预算不足" in captured.err


def test_report_writer_falls_back_to_stderr(capsys):
    ReportWriter().log_message("写入失败", "ERROR")
    assert "[ERROR] 写入失败" in capsys.readouterr().err


def test_explicit_chain_relaxes_base_check():
    RunConfig("counterexample", {"N": 10, "base": 3, "chain": [6, 36]}).validate()
    with pytest.raises(ConfigError):
        RunConfig("counterexample", {"N": 10, "base": 1, "chain": [6, 36]}).validate()
