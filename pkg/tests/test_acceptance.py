"""桌面规模的验收运行：默认跳过，用 pytest --run-slow 执行"""

import pytest

from app.main import EXIT_OK, main
from core.stats import (
    asymmetric_mass,
    empirical_R,
    poisson_tv,
    repetition_histogram,
    symmetric_class_mass,
)
from core.theory import TheoryParams, odd_weight
from services.prime_survey import phi5_root_survey
from services.trial_runner import TrialRunner

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def balanced_trials():
    params = TheoryParams(n=40_000, g=200, h=200)
    return params, TrialRunner().run_trials(params, 200, master_seed=42)


def test_cycle_length_distribution_converges(balanced_trials):
    params, results = balanced_trials
    assert empirical_R(results, params).sup_distance() <= 0.02


def test_symmetric_cycles_dominate(balanced_trials):
    params, results = balanced_trials
    ratio = asymmetric_mass(results) * (params.g + params.h)
    assert 0.5 <= ratio <= 2.0
    assert all(r.sym_cycle_count == 200 for r in results)


def test_odd_even_split():
    masses = {}
    for g, h in ((200, 200), (20, 380)):
        params = TheoryParams(n=40_000, g=g, h=h)
        results = TrialRunner().run_trials(params, 200, master_seed=42)
        masses[(g, h)] = symmetric_class_mass(results)["SymmetricOdd"]
        assert masses[(g, h)] == pytest.approx(odd_weight(g, h), abs=0.05)
    assert masses[(20, 380)] < masses[(200, 200)]


def test_symmetric_three_cycles_are_poisson():
    params = TheoryParams(n=10_000, g=100, h=100)
    results = TrialRunner().run_trials(params, 10_000, master_seed=42)
    histogram = repetition_histogram(results, 3)
    assert poisson_tv(histogram, params.repetition(3).alpha) <= 0.05


def test_sparse_fixed_points_give_delta_regime():
    params = TheoryParams(n=10_000, g=10, h=10)
    results = TrialRunner().run_trials(params, 10_000, master_seed=42)
    assert repetition_histogram(results, 3).frequencies().get(0, 0.0) >= 0.98


def test_phi5_root_counts_follow_s6():
    survey = phi5_root_survey(5000, 20_000, runner=TrialRunner())
    assert survey["tv"] <= 0.03


def test_henon_full_range_passes_checks(tmp_path):
    out = tmp_path / "henon.json"
    argv = ["henon", "--a", "1", "--p-min", "3", "--p-max", "199", "--full", "--check", "--format", "json", "--out", str(out)]
    assert main(argv) == EXIT_OK
