from fractions import Fraction

import pytest

from app.config import settings
from core.errors import ParameterError, ResourceCapError
from core.stats import (
    DEFAULT_GRID,
    RepetitionHistogram,
    asymmetric_mass,
    binomial_standard_error,
    check_work_cap,
    empirical_R,
    even_odd_mass,
    mean_cycle_length,
    mean_period_mass,
    merge_histograms,
    poisson_tv,
    repetition_histogram,
    run_trial,
    run_trials,
    symmetric_class_mass,
    total_variation,
)
from core.model import SymmetryClass
from core.theory import TheoryParams, expected_p_asym, expected_p_sym_odd, expected_p_total


@pytest.fixture
def medium_trials():
    params = TheoryParams(n=20, g=4, h=6)
    return params, run_trials(params, 40, master_seed=11)


def test_default_grid():
    assert len(DEFAULT_GRID) == 100
    assert DEFAULT_GRID[0] == 0.05
    assert DEFAULT_GRID[-1] == 5.0


def test_forced_symmetric_fixed_points():
    params = TheoryParams(n=2, g=2, h=2)
    results = run_trials(params, 5, master_seed=1)
    for r in results:
        assert r.period_histogram == {1: {"SymmetricOdd": 2}}
        assert r.sym_cycle_count == 2
        assert r.asym_cycle_count == 0
    assert mean_period_mass(results, 1) == 1.0
    assert repetition_histogram(results, 1).counts == {2: 5}

    distribution = empirical_R(results, params)
    values = dict(zip(distribution.grid, distribution.values))
    assert values[0.5] == 0.0
    assert values[1.0] == 1.0


def test_forced_asymmetric_fixed_points():
    results = run_trials(TheoryParams(n=2, g=0, h=0), 3, master_seed=1)
    assert asymmetric_mass(results) == 1.0
    assert all(r.asym_cycle_count == 2 for r in results)
    assert repetition_histogram(results, 1).counts == {0: 3}
    assert repetition_histogram(results, 1, include_asymmetric=True).counts == {2: 3}


def test_per_trial_invariants(medium_trials):
    params, results = medium_trials
    for r in results:
        r.check(params)
        assert r.sym_cycle_count == 5


def test_masses_are_consistent(medium_trials):
    params, results = medium_trials
    total = sum(mean_period_mass(results, t) for t in range(1, params.n + 1))
    assert total == pytest.approx(1.0)
    even, odd = even_odd_mass(results)
    assert even + odd == pytest.approx(1.0)
    assert sum(symmetric_class_mass(results).values()) == pytest.approx(1.0)
    cycles = sum(r.cycle_count for r in results)
    assert mean_cycle_length(results) == pytest.approx(params.n * len(results) / cycles)


def test_empirical_distribution_is_monotone(medium_trials):
    params, results = medium_trials
    values = empirical_R(results, params).values
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] <= 1.0


def test_merge_is_order_independent(medium_trials):
    _, results = medium_trials
    assert merge_histograms(results) == merge_histograms(list(reversed(results)))


def test_trials_are_pure_in_seed_and_index():
    params = TheoryParams(n=30, g=2, h=4)
    batch = run_trials(params, 6, master_seed=9, start=10)
    assert batch[3] == run_trial(params, 9, 13)
    assert [r.seed for r in batch] == list(range(10, 16))


def test_empty_results_rejected():
    with pytest.raises(ParameterError):
        mean_period_mass([], 1)
    with pytest.raises(ParameterError):
        run_trials(TheoryParams(n=4, g=2, h=2), 0, master_seed=1)


def test_work_cap(monkeypatch):
    monkeypatch.setattr(settings, "REVMAP_WORK_CAP", 100)
    with pytest.raises(ResourceCapError):
        check_work_cap(TheoryParams(n=50, g=2, h=2), 3)
    check_work_cap(TheoryParams(n=50, g=2, h=2), 2)


def test_total_variation():
    assert total_variation({0: 1.0}, {1: 1.0}) == 1.0
    assert total_variation({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}) == 0.0


def test_poisson_tv_delta_case():
    histogram = RepetitionHistogram(t=3, counts={0: 10}, trials=10)
    assert poisson_tv(histogram, 0.0) == 0.0
    assert poisson_tv(histogram, 1.0) == pytest.approx(1 - 0.36787944117144233)


def test_period_mass_from_histogram():
    histogram = RepetitionHistogram(t=3, counts={0: 6, 1: 3, 2: 1}, trials=10)
    assert histogram.mean_count() == pytest.approx(0.5)
    assert histogram.period_mass(30) == pytest.approx(0.05)
    assert RepetitionHistogram(t=3, trials=0).period_mass(30) == 0.0


def test_binomial_standard_error():
    assert binomial_standard_error(0.5, 100) == pytest.approx(0.05)


@pytest.mark.parametrize("n,g,h", [(4, 2, 2), (5, 1, 3), (6, 2, 2), (6, 0, 2), (6, 4, 0)])
def test_estimators_within_four_standard_errors_of_exact(n, g, h):
    params = TheoryParams(n=n, g=g, h=h)
    trials = 4000
    results = run_trials(params, trials, master_seed=2718)
    for t in range(1, n + 1):
        exact = float(expected_p_total(params, t))
        assert abs(mean_period_mass(results, t) - exact) <= 4 * binomial_standard_error(exact, trials) + 1e-12, t
    exact_asym = float(sum(expected_p_asym(params, t) for t in range(1, n + 1)))
    assert abs(asymmetric_mass(results) - exact_asym) <= 4 * binomial_standard_error(exact_asym, trials) + 1e-12


@pytest.mark.slow
def test_symmetric_one_cycle_mass_at_n4():
    params = TheoryParams(n=4, g=2, h=2)
    trials = 100_000
    results = run_trials(params, trials, master_seed=42)
    assert expected_p_sym_odd(params, 1) == Fraction(1, 4)
    estimate = mean_period_mass(results, 1, classes=[SymmetryClass.SYMMETRIC_ODD.value])
    assert abs(estimate - 0.25) <= 3 * binomial_standard_error(0.25, trials)
