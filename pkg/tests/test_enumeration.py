from fractions import Fraction

import pytest

from core.errors import ResourceCapError
from core.model import SymmetryClass
from core.theory import TheoryParams, admissible_triples
from services.enumeration_oracle import (
    ORACLE_MAX_N,
    compare_masses,
    compare_reconstruction,
    compare_repetitions,
    enumerate_summary,
    total_mass,
)

ORACLE_TRIPLES = list(admissible_triples(ORACLE_MAX_N))


def test_small_space_by_hand(small_params):
    summary = enumerate_summary(small_params)
    assert summary.pairs == 36
    assert summary.mass(SymmetryClass.SYMMETRIC_ODD, 1) == Fraction(1, 4)
    assert summary.mass(SymmetryClass.SYMMETRIC_ODD, 3) == Fraction(1, 2)
    assert summary.mass(SymmetryClass.ASYMMETRIC, 1) == Fraction(1, 12)


@pytest.mark.parametrize("n,g,h", ORACLE_TRIPLES)
def test_enumerated_masses_equal_exact_formulas(n, g, h):
    summary = enumerate_summary(TheoryParams(n=n, g=g, h=h))
    rows = compare_masses(summary)
    assert all(r["match"] for r in rows), [r for r in rows if not r["match"]]
    assert total_mass(summary) == 1


@pytest.mark.parametrize("n,g,h", ORACLE_TRIPLES)
def test_enumerated_repetitions_equal_inclusion_exclusion(n, g, h):
    summary = enumerate_summary(TheoryParams(n=n, g=g, h=h))
    rows = compare_repetitions(summary)
    assert all(r["match"] for r in rows), [r for r in rows if not r["match"]]
    assert all(r["match"] for r in compare_reconstruction(summary))


def test_frequencies_include_asymmetric_cycles():
    summary = enumerate_summary(TheoryParams(n=2, g=0, h=0))
    assert summary.frequency(1, 0) == 1
    assert summary.frequency(1, 2, include_asymmetric=True) == 1


def test_oracle_respects_cap():
    with pytest.raises(ResourceCapError):
        enumerate_summary(TheoryParams(n=8, g=2, h=2), cap=6)
