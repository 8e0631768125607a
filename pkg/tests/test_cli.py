import json

import pytest
from click.testing import CliRunner

from levy_transience.cli import main

BM3 = {"family": "brownian_drift", "d": 3, "parameters": {"c": 1.0}}
STABLE_05_D1 = {"family": "isotropic_stable", "d": 1,
                "parameters": {"alpha": 0.5, "gamma": 1.0}}
STABLE_JUMP_A = {"family": "radial_jump", "d": 1,
                 "parameters": {"density": {"kind": "stable", "alpha": 0.5}}}
STABLE_JUMP_B = {"family": "radial_jump", "d": 1,
                 "parameters": {"density": {"kind": "stable", "alpha": 0.8}}}
INTERVAL_SL = {"family": "stable_like", "d": 3,
               "parameters": {"alpha": {"lo": 1.2, "hi": 1.5}, "gamma": 1.0}}


@pytest.fixture
def runner():
    return CliRunner()


def test_classify_weakly_transient(runner, model_file, tmp_path):
    path = model_file(BM3, "bm3.json")
    out = tmp_path / "out"
    result = runner.invoke(main, ["classify", "--model", path,
                                  "--kappa", "0.6", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "weakly_transient" in result.output
    report = json.loads((out / "report.json").read_text())
    assert report["results"][0]["verdict"] == "weakly_transient"
    assert report["results"][0]["rules"]
    lines = (out / "plotdata.csv").read_text().splitlines()
    assert lines[0] == "series,x,y,extra"
    assert any(line.startswith("verdict,") for line in lines)


def test_classify_inconclusive_exit_code(runner, model_file, tmp_path):
    path = model_file(INTERVAL_SL, "sl.json")
    result = runner.invoke(main, ["classify", "--model", path,
                                  "--kappa", "1.2",
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 2, result.output


def test_classify_kappa_grid(runner, model_file, tmp_path):
    path = model_file(BM3, "bm3.json")
    out = tmp_path / "out"
    result = runner.invoke(main, ["classify", "--model", path,
                                  "--kappa-grid", "0.2,0.6,1.5",
                                  "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    verdicts = [r["verdict"] for r in report["results"]]
    assert verdicts == ["strongly_transient", "weakly_transient",
                        "weakly_transient"]
    rows = [l for l in (out / "plotdata.csv").read_text().splitlines()
            if l.startswith("verdict,")]
    assert len(rows) == 3


def test_kappa_star(runner, model_file, tmp_path):
    path = model_file(STABLE_05_D1, "stable.json")
    out = tmp_path / "out"
    result = runner.invoke(main, ["kappa-star", "--model", path,
                                  "--tol", "0.01", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert abs(report["kappa_star"] - 1.0) <= 0.02


def test_pruitt(runner, model_file, tmp_path):
    path = model_file(STABLE_05_D1, "stable.json")
    result = runner.invoke(main, ["pruitt", "--model", path,
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 0, result.output
    assert "lower index = 0.5" in result.output


def test_tails_command(runner, model_file, tmp_path):
    path = model_file(STABLE_JUMP_A, "jump.json")
    out = tmp_path / "out"
    result = runner.invoke(main, ["tails", "--model", path, "--kappa", "2.0",
                                  "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["weak"]["refined_state"] == "diverges"


def test_compare_transfer_pair(runner, model_file, tmp_path):
    a = model_file(STABLE_JUMP_A, "a.json")
    b = model_file(STABLE_JUMP_B, "b.json")
    out = tmp_path / "out"
    result = runner.invoke(main, ["compare", "--model", a, "--model", b,
                                  "--kappa-grid", "3.0", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["comparison"]["domination_ok"] is True
    assert report["verdicts"]["a"] == ["weakly_transient"]


def test_compare_needs_two_models(runner, model_file, tmp_path):
    a = model_file(STABLE_JUMP_A, "a.json")
    result = runner.invoke(main, ["compare", "--model", a,
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 1


def test_simulate_deterministic_csv(runner, model_file, tmp_path):
    path = model_file(BM3, "bm3.json")
    args = ["simulate", "--model", path, "--kappa", "1.0", "--horizon", "10",
            "--paths", "2000", "--seed", "77"]
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    r1 = runner.invoke(main, args + ["--out", str(out1)])
    r2 = runner.invoke(main, args + ["--out", str(out2)])
    assert r1.exit_code == 0 and r2.exit_code == 0, r1.output + r2.output
    assert (out1 / "occupation.csv").read_bytes() == \
        (out2 / "occupation.csv").read_bytes()
    assert (out1 / "plotdata.csv").read_bytes() == \
        (out2 / "plotdata.csv").read_bytes()
    header = (out1 / "occupation.csv").read_text().splitlines()[0]
    assert header == "horizon,S_hat,stderr,growth_exp,verdict"


def test_simulate_euler_trace_dump(runner, model_file, tmp_path):
    path = model_file(STABLE_05_D1, "stable.json")
    out = tmp_path / "out"
    result = runner.invoke(main, [
        "simulate", "--model", path, "--kappa", "1.0", "--horizon", "2",
        "--paths", "50", "--step", "0.05", "--seed", "5",
        "--mode", "euler_path", "--trace-paths", "3", "--out", str(out)])
    assert result.exit_code in (0, 2), result.output
    lines = (out / "traces.csv").read_text().splitlines()
    assert lines[0] == "path,t,x1"
    assert len(lines) == 1 + 3 * 40


def test_classify_dimension_check(runner, model_file, tmp_path):
    path = model_file(BM3, "bm3.json")
    result = runner.invoke(main, ["classify", "--model", path,
                                  "--kappa", "0.6", "--d", "2",
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 1
    assert "dimension" in result.output


def test_validate_sampler(runner, model_file, tmp_path):
    path = model_file(STABLE_05_D1, "stable.json")
    result = runner.invoke(main, ["validate-sampler", "--model", path,
                                  "--paths", "20000", "--seed", "7",
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output


def test_bad_model_file_exit_code(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    result = runner.invoke(main, ["classify", "--model", str(bad),
                                  "--kappa", "1.0",
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 1
    assert "line" in result.output


def test_invariant_violation_exit_code(runner, model_file, tmp_path):
    cfg = {"family": "isotropic_stable", "d": 1,
           "parameters": {"alpha": 2.5, "gamma": 1.0}}
    path = model_file(cfg, "bad_alpha.json")
    result = runner.invoke(main, ["classify", "--model", path,
                                  "--kappa", "1.0",
                                  "--out", str(tmp_path / "o")])
    assert result.exit_code == 1
    assert "(0,2)" in result.output


def test_report_json_round_trip(runner, model_file, tmp_path):
    path = model_file(BM3, "bm3.json")
    out = tmp_path / "out"
    runner.invoke(main, ["classify", "--model", path, "--kappa", "0.6",
                         "--out", str(out)])
    text = (out / "report.json").read_text()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n" == text
