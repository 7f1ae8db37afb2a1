import json
import math

import pytest
from pydantic import ValidationError

import app.experiments as experiments
from app.config import settings
from app.experiments import RunConfig
from app.main import EXIT_CAP, EXIT_CHECK, EXIT_OK, EXIT_PARAMETER, main, parse_config


def run_json(tmp_path, name, argv):
    out = tmp_path / name
    code = main(argv + ["--format", "json", "--out", str(out)])
    return code, out


def test_defaults_are_resolved():
    config = parse_config(["repeats", "--n", "10", "--g", "2", "--h", "2"])
    assert config.t == 3
    assert config.trials == 10_000
    assert config.seed == 42
    assert "workers" not in config.resolved()
    assert parse_config(["henon", "--p", "7"]).t == 5


@pytest.mark.parametrize(
    "options",
    [
        {"command": "involutions", "n": 5, "g": 2, "h": 2},
        {"command": "involutions", "n": 4, "g": 0, "h": 0},
        {"command": "repeats", "n": 4, "g": 2, "h": 2, "t": 5},
        {"command": "map3d", "p": 5},
        {"command": "henon", "p": 9},
        {"command": "phi5"},
        {"command": "henon", "p": 7, "t": 65},
    ],
)
def test_invalid_configurations(options):
    with pytest.raises(ValidationError):
        RunConfig(**options)


def test_cebotarev_json(tmp_path):
    code, out = run_json(tmp_path, "nu.json", ["cebotarev", "--degree", "6"])
    assert code == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert [row["nu"] for row in document["results"]["table"]] == [
        "53/144", "11/30", "3/16", "1/18", "1/48", "0", "1/720",
    ]
    assert all(check["pass"] for check in document["checks"])


def test_cebotarev_csv(tmp_path):
    out = tmp_path / "nu.csv"
    assert main(["cebotarev", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "i,nu,nu_decimal,poisson"
    assert lines[1].startswith("0,53/144,0.368056,")
    assert lines[7].startswith("6,1/720,0.00138889,")


def test_exact_involutions_csv_prints_fractions(tmp_path):
    out = tmp_path / "exact.csv"
    assert main(["involutions", "--n", "4", "--g", "2", "--h", "2", "--exact", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,kind,enumerated,theory,match"
    assert "2,even_g,1/12,1/12,true" in lines


def test_henon_headline_prime(tmp_path):
    code, out = run_json(tmp_path, "henon.json", ["henon", "--a", "1", "--p", "6563", "--t", "5", "--check"])
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))["results"]["primes"][0]
    assert report["symmetric_t_cycles"] == 6
    assert report["phi5_roots"] == 6
    assert report["agree"] is True


def test_henon_full_small_range(tmp_path):
    code, out = run_json(tmp_path, "henon.json", ["henon", "--a", "1", "--p-min", "3", "--p-max", "30", "--full", "--check", "--workers", "1"])
    assert code == EXIT_OK
    reports = json.loads(out.read_text(encoding="utf-8"))["results"]["primes"]
    assert [r["p"] for r in reports] == [3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(r["symmetric_cycles"] == r["p"] for r in reports)
    assert all(r["t"] == 5 and r["agree"] for r in reports)
    by_prime = {r["p"]: r for r in reports}
    assert by_prime[5]["spurious_roots"] == [1]
    assert by_prime[7]["spurious_roots"] == []
    grid = [point["x"] for point in by_prime[29]["distribution"]]
    assert grid == sorted(grid) and len(grid) > 1
    assert all(0.0 <= point["empirical"] <= 1.0 for point in by_prime[29]["distribution"])


def test_map3d_over_f7(tmp_path):
    code, out = run_json(tmp_path, "map3d.json", ["map3d", "--e", "1", "--k", "1", "--p", "7", "--check"])
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))["results"]["primes"][0]
    assert (report["g"], report["h"], report["symmetric_cycles"]) == (49, 7, 28)


def test_phi5_single_prime_cross_check(tmp_path):
    code, out = run_json(tmp_path, "phi5.json", ["phi5", "--p", "6571", "--cross-check", "--check"])
    assert code == EXIT_OK
    results = json.loads(out.read_text(encoding="utf-8"))["results"]
    assert results["roots"] == 2
    assert results["symmetric_5_cycles"] == 2


def test_exact_involutions(tmp_path):
    code, out = run_json(tmp_path, "exact.json", ["involutions", "--n", "4", "--g", "2", "--h", "2", "--exact", "--check"])
    assert code == EXIT_OK
    results = json.loads(out.read_text(encoding="utf-8"))["results"]
    assert results["pairs"] == 36
    assert results["total_mass"] == "1"


def test_zero_fixed_set_results_are_flagged(tmp_path):
    argv = ["involutions", "--n", "40", "--g", "4", "--h", "0", "--trials", "4", "--workers", "1"]
    code, out = run_json(tmp_path, "flag.json", argv)
    assert code == EXIT_OK
    params = json.loads(out.read_text(encoding="utf-8"))["results"]["params"]
    assert params["outside_base_range"] is True


def test_sampled_results_carry_limit_columns(tmp_path):
    code, out = run_json(tmp_path, "inv.json", ["involutions", "--n", "40", "--g", "4", "--h", "4", "--trials", "4", "--workers", "1"])
    assert code == EXIT_OK
    rows = json.loads(out.read_text(encoding="utf-8"))["results"]["distribution"]
    last = rows[-1]
    assert last["asymmetric_limit"] == pytest.approx(-math.expm1(-2 * last["x"]) / 8)
    assert all(0.0 <= row["asymmetric_finite_n"] <= row["finite_n"] for row in rows)


def test_repeats_reports_period_mass(tmp_path):
    argv = ["repeats", "--n", "10000", "--g", "100", "--h", "100", "--t", "3", "--trials", "400", "--workers", "1"]
    code, out = run_json(tmp_path, "mass.json", argv)
    assert code == EXIT_OK
    results = json.loads(out.read_text(encoding="utf-8"))["results"]
    assert results["poisson_period_mass"] == pytest.approx(3 * math.exp(-0.02) / 10000)
    assert results["period_mass"] == pytest.approx(results["poisson_period_mass"], rel=0.3)


def test_exact_repeats(tmp_path):
    code, _ = run_json(tmp_path, "mu.json", ["repeats", "--n", "6", "--g", "2", "--h", "2", "--t", "1", "--exact", "--check"])
    assert code == EXIT_OK


def test_parameter_errors_exit_2():
    assert main(["involutions", "--n", "5", "--g", "2", "--h", "2"]) == EXIT_PARAMETER
    assert main(["map3d", "--p", "13"]) == EXIT_PARAMETER
    with pytest.raises(SystemExit) as excinfo:
        main(["involutions", "--n", "ten", "--g", "2", "--h", "2"])
    assert excinfo.value.code == EXIT_PARAMETER


def test_resource_cap_exits_3(monkeypatch):
    monkeypatch.setattr(settings, "REVMAP_WORK_CAP", 100)
    assert main(["involutions", "--n", "100", "--g", "2", "--h", "2", "--trials", "5"]) == EXIT_CAP


def test_enumeration_cap_exits_3():
    assert main(["involutions", "--n", "12", "--g", "2", "--h", "2", "--exact"]) == EXIT_CAP


def test_failed_check_exits_4(tmp_path, monkeypatch):
    monkeypatch.setattr(experiments, "R_SUP_BOUND", -1.0)
    out = tmp_path / "r.csv"
    argv = ["involutions", "--n", "40", "--g", "4", "--h", "4", "--trials", "4", "--workers", "1", "--out", str(out)]
    assert main(argv + ["--check"]) == EXIT_CHECK
    assert main(argv) == EXIT_OK


def test_json_is_identical_across_worker_counts(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "REVMAP_TRIAL_BATCH", 7)
    argv = ["repeats", "--n", "60", "--g", "4", "--h", "6", "--t", "3", "--trials", "40", "--seed", "3"]
    _, serial = run_json(tmp_path, "serial.json", argv + ["--workers", "1"])
    _, pooled = run_json(tmp_path, "pooled.json", argv + ["--workers", "3"])
    assert serial.read_bytes() == pooled.read_bytes()
