import os

import pytest

from hypqec import css
from hypqec.cli import main
from hypqec.errors import ConfigError
from hypqec.harness import ExperimentConfig, default_rounds, run_experiment
from hypqec.io import read_results, save_code

from helpers import toric_complex


@pytest.fixture(scope="module")
def toric_code():
    code = css.from_complex(toric_complex(3, 3), None, "toric33")
    code.d_x, code.d_z = css.distance(code)
    return code


def test_config_validation(toric_code):
    with pytest.raises(ConfigError):
        ExperimentConfig(toric_code, "bogus", [0.01], 10, "x.jsonl")
    with pytest.raises(ConfigError):
        ExperimentConfig(toric_code, "pauli", [], 10, "x.jsonl")
    with pytest.raises(ConfigError):
        ExperimentConfig(toric_code, "pauli", [0.01], 0, "x.jsonl")
    with pytest.raises(ConfigError):
        ExperimentConfig(toric_code, "pauli", [1.5], 10, "x.jsonl")


def test_default_rounds(toric_code):
    assert default_rounds(toric_code, "pauli") == toric_code.d
    assert default_rounds(toric_code, "phenom") == 1


def test_run_and_resume(tmp_path, toric_code):
    out = str(tmp_path / "r.jsonl")
    cfg = ExperimentConfig(
        toric_code, "phenom", [0.01, 0.03], 200, out, seed=11
    )
    first = run_experiment(cfg)
    assert len(first) == 2
    assert [r.p for r in first] == [0.01, 0.03]
    again = run_experiment(cfg)
    assert again == []  # all points already present
    assert len(read_results(out)) == 2
    # extending the grid only adds the new point
    cfg2 = ExperimentConfig(
        toric_code, "phenom", [0.01, 0.03, 0.05], 200, out, seed=11
    )
    more = run_experiment(cfg2)
    assert len(more) == 1 and more[0].p == 0.05


def test_thread_count_independence(tmp_path, toric_code, monkeypatch):
    files = []
    for threads in ("1", "4"):
        out = str(tmp_path / f"r{threads}.jsonl")
        monkeypatch.setenv("HQL_THREADS", threads)
        run_experiment(
            ExperimentConfig(
                toric_code, "pauli", [0.005, 0.01], 150, out, seed=3
            )
        )
        files.append(out)
    with open(files[0], "rb") as a, open(files[1], "rb") as b:
        assert a.read() == b.read()


def test_monotone_in_p(tmp_path, toric_code):
    out = str(tmp_path / "m.jsonl")
    recs = run_experiment(
        ExperimentConfig(
            toric_code, "phenom", [0.005, 0.05], 1500, out, seed=2
        )
    )
    assert recs[0].fails_any < recs[1].fails_any


def test_cli_end_to_end(tmp_path, toric_code):
    code_path = str(tmp_path / "t.json")
    save_code(toric_code, code_path)
    out = str(tmp_path / "res.jsonl")
    rc = main(
        [
            "simulate", "--code", code_path, "--noise", "phenom",
            "--p", "0.01,0.02,0.04", "--shots", "400",
            "--seed", "5", "--out", out,
        ]
    )
    assert rc == 0
    assert len(read_results(out)) == 3
    rc = main(["analyze", "pseudothreshold", "--results", out, "--code", "toric33"])
    assert rc == 0
    rc = main(["export-csv", "--results", out])
    assert rc == 0
    rc = main(["distance", "--code", code_path])
    assert rc == 0


def test_cli_dump_shots(tmp_path, toric_code):
    code_path = str(tmp_path / "t.json")
    save_code(toric_code, code_path)
    out = str(tmp_path / "res.jsonl")
    dump = str(tmp_path / "shots.hex")
    rc = main(
        [
            "simulate", "--code", code_path, "--noise", "phenom",
            "--p", "0.02", "--shots", "50", "--seed", "1",
            "--out", out, "--dump-shots", dump,
        ]
    )
    assert rc == 0
    lines = open(dump).read().strip().split("\n")
    assert len(lines) == 50
    assert all(set(l) <= set("0123456789abcdef") for l in lines)


def test_cli_error_reporting(tmp_path):
    rc = main(["distance", "--code", str(tmp_path / "missing.json")])
    assert rc == 1
