from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from core.errors import ParameterError, ResourceCapError
from core.sampler import (
    PairSpace,
    check_admissible,
    count_pairs,
    enumerate_involutions,
    enumerate_pairs,
    involution_count,
    pair_space_size,
    sample_involution,
    sample_pair,
    trial_seed,
)
from core.theory import admissible_triples


@pytest.mark.parametrize(
    "n,g,h,expected",
    [
        (4, 2, 0, 18),
        (6, 2, 2, 2025),
        (4, 2, 2, 36),
        (2, 2, 2, 1),
        (2, 0, 0, 1),
        (3, 1, 1, 9),
    ],
)
def test_count_pairs_known_values(n, g, h, expected):
    assert count_pairs(n, g, h) == expected


def test_parity_violation_rejected():
    with pytest.raises(ParameterError):
        check_admissible(5, 2, 2)
    with pytest.raises(ParameterError):
        count_pairs(4, 5, 0)


def test_lenient_size_is_zero_when_impossible():
    assert pair_space_size(3, 0, 1) == 0
    assert pair_space_size(2, -1, 0) == 0
    assert pair_space_size(0, 0, 0) == 1


def test_pair_space_model_fills_cardinality():
    space = PairSpace(n=6, g=2, h=2)
    assert space.cardinality == 2025
    assert not space.outside_base_range
    assert PairSpace(n=4, g=2, h=0).outside_base_range


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_cardinality_matches_formula(n):
    for nn, g, h in admissible_triples(n, n_min=n):
        pairs = sum(1 for _ in enumerate_pairs(nn, g, h))
        assert pairs == count_pairs(nn, g, h), (nn, g, h)


def test_enumerated_involutions_are_distinct_and_valid():
    found = list(enumerate_involutions(6, 2))
    assert len(found) == involution_count(6, 2) == 45
    assert len({inv.key() for inv in found}) == 45
    assert all(inv.fixed_count == 2 for inv in found)


def test_enumeration_order_is_deterministic():
    first = [inv.key() for inv in enumerate_involutions(5, 1)]
    second = [inv.key() for inv in enumerate_involutions(5, 1)]
    assert first == second
    # 不动点子集按字典序，第一个对合固定 0
    assert first[0][0] == 0


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_pairs(12, 2, 2, cap=10)


def test_sample_has_requested_fixed_points():
    for k in range(20):
        inv = sample_involution(101, 11, trial_seed(7, k))
        assert inv.fixed_count == 11


def test_sampling_is_reproducible():
    a = sample_pair(50, 10, 20, trial_seed(123, 4))
    b = sample_pair(50, 10, 20, trial_seed(123, 4))
    c = sample_pair(50, 10, 20, trial_seed(123, 5))
    assert a == b
    assert a != c


def test_single_pair_space_is_forced():
    g_inv, h_inv = sample_pair(2, 2, 2, trial_seed(7, 0))
    assert g_inv.pairing.tolist() == [0, 1]
    assert h_inv.pairing.tolist() == [0, 1]


def test_sampling_is_uniform_over_involutions():
    keys = [inv.key() for inv in enumerate_involutions(4, 2)]
    rng = np.random.default_rng(2024)
    counts = Counter(sample_involution(4, 2, rng).key() for _ in range(60_000))
    assert set(counts) == set(keys)
    _, p_value = chisquare([counts[key] for key in keys])
    assert p_value > 0.01


UNIFORMITY_CASES = [(n, g) for n in range(1, 7) for g in range(n % 2, n + 1, 2) if involution_count(n, g) > 1]


@pytest.mark.slow
@pytest.mark.parametrize("n,g", UNIFORMITY_CASES)
def test_sampling_covers_full_support_uniformly(n, g):
    keys = [inv.key() for inv in enumerate_involutions(n, g)]
    rng = np.random.default_rng(1000 * n + g)
    counts = Counter(sample_involution(n, g, rng).key() for _ in range(10_000 * len(keys)))
    assert set(counts) == set(keys)
    _, p_value = chisquare([counts[key] for key in keys])
    # 整组 99% 置信
    assert p_value > 0.01 / len(UNIFORMITY_CASES)
