import pytest
from hypothesis import given, settings as hsettings, strategies as st

from core.errors import FieldMismatchError, ParameterError
from core.ffield import PrimeField
from core.polyroots import (
    PHI5_INTEGER_COEFFS,
    PrimePoly,
    brute_force_roots,
    count_roots,
    derivative,
    evaluate,
    is_squarefree,
    mod_mul,
    mod_pow,
    phi5,
    poly_divmod,
    poly_gcd,
)


def poly(p, *coeffs):
    return PrimePoly.from_ints(PrimeField(p), coeffs)


def test_phi5_integer_coefficients():
    assert PHI5_INTEGER_COEFFS == (3, -4, 8, -6, 5, -2, 1)


def test_phi5_reduction_mod_5():
    f = phi5(PrimeField(5))
    assert f.coeffs == (3, 1, 3, 4, 0, 3, 1)
    assert f.degree == 6


def test_trimming_and_degree():
    assert poly(7, 1, 2, 0, 7).coeffs == (1, 2)
    assert PrimePoly.zero(PrimeField(7)).degree == -1
    assert PrimePoly.monomial(PrimeField(7), 3).coeffs == (0, 0, 0, 1)


def test_divmod_identity():
    a = poly(7, 3, 1, 4, 1, 5)
    b = poly(7, 2, 6, 1)
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_divide_by_zero_polynomial():
    with pytest.raises(ZeroDivisionError):
        poly_divmod(poly(7, 1, 1), PrimePoly.zero(PrimeField(7)))


def test_mod_pow_x_cubed():
    x = poly(3, 0, 1)
    assert mod_pow(x, 3, poly(3, 1, 0, 1)).coeffs == (0, 2)


def test_mod_pow_requires_real_modulus():
    with pytest.raises(ParameterError):
        mod_pow(poly(3, 0, 1), 3, poly(3, 2))


def test_gcd_is_monic():
    assert poly_gcd(poly(5, -1, 0, 1), poly(5, -1, 1)).coeffs == (4, 1)
    assert poly_gcd(poly(5, 0, 3), poly(5, 0, 0, 2)).coeffs == (0, 1)
    with pytest.raises(ParameterError):
        poly_gcd(PrimePoly.zero(PrimeField(5)), PrimePoly.zero(PrimeField(5)))


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        poly(5, 1, 1) + poly(7, 1, 1)


def test_count_roots_edge_degrees():
    with pytest.raises(ParameterError):
        count_roots(PrimePoly.zero(PrimeField(5)))
    assert count_roots(poly(5, 3)) == 0
    assert count_roots(poly(5, 2, 3)) == 1
    # (x-1)²(x-2) 只有两个不同的根
    assert count_roots(poly(5, 1, -2, 1) * poly(5, -2, 1)) == 2


@pytest.mark.parametrize("p,expected", [(6563, 6), (6569, 0), (6571, 2)])
def test_phi5_root_counts(p, expected):
    assert count_roots(phi5(PrimeField(p))) == expected


@pytest.mark.parametrize("p", [7, 11, 13, 31, 41, 101, 211])
def test_phi5_matches_brute_force(p):
    f = phi5(PrimeField(p))
    assert count_roots(f) == len(brute_force_roots(f))


@hsettings(max_examples=80, deadline=None)
@given(
    st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23]),
    st.lists(st.integers(min_value=0, max_value=100), min_size=1, max_size=8),
)
def test_count_roots_matches_brute_force(p, coeffs):
    f = PrimePoly.from_ints(PrimeField(p), coeffs)
    if f.is_zero:
        return
    assert count_roots(f) == len(brute_force_roots(f))


def test_evaluate_and_derivative():
    f = poly(7, 1, 2, 3)
    assert evaluate(f, 2) == (1 + 4 + 12) % 7
    assert derivative(f).coeffs == (2, 6)


def test_squarefree():
    assert is_squarefree(poly(5, -1, 0, 1))
    assert not is_squarefree(poly(5, 1, -2, 1))


@hsettings(max_examples=60, deadline=None)
@given(
    st.sampled_from([3, 5, 7, 11, 13]),
    st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=5),
    st.lists(st.integers(min_value=0, max_value=50), min_size=2, max_size=6),
    st.integers(min_value=0, max_value=32),
)
def test_mod_pow_matches_repeated_mod_mul(p, base_coeffs, modulus_coeffs, exponent):
    field = PrimeField(p)
    modulus = PrimePoly.from_ints(field, modulus_coeffs)
    if modulus.degree < 1:
        return
    base = PrimePoly.from_ints(field, base_coeffs)
    expected = poly_divmod(PrimePoly.from_ints(field, (1,)), modulus)[1]
    for _ in range(exponent):
        expected = mod_mul(expected, base, modulus)
    assert mod_pow(base, exponent, modulus) == expected


def test_coefficients_are_plain_ints():
    f = poly(7, 1, 2, 3) * poly(7, 4, 5)
    assert all(type(c) is int for c in f.coeffs)
    assert all(type(c) is int for c in poly_gcd(f, poly(7, 4, 5)).coeffs)
