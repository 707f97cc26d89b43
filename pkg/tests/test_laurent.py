from fractions import Fraction

import pytest

from utils import FieldMismatchError, InputError, PrecisionError
from utils.laurent import FieldSpec, LaurentSeries, Q, series_from_pairs

F5 = FieldSpec(5)


def _random_series(rng, field, lo, hi):
    coeffs = {e: int(rng.integers(-4, 5)) for e in range(lo, hi)}
    return LaurentSeries(field, coeffs, lo, hi)


def test_field_spec_rejects_composite_characteristic():
    with pytest.raises(InputError):
        FieldSpec(4)


def test_convert_fraction_into_prime_field():
    assert F5.to_fraction(F5.convert("1/2")) == Fraction(3)
    assert Q.to_fraction(Q.convert("-6/4")) == Fraction(-3, 2)


def test_nth_root_of_field_elements():
    F7 = FieldSpec(7)
    r = F7.nth_root(F7.convert(2), 2)
    assert r is not None and r * r == F7.convert(2)
    assert Q.nth_root(Q.convert(Fraction(8, 27)), 3) == Q.convert(Fraction(2, 3))
    assert Q.nth_root(Q.convert(2), 2) is None


def test_product_window_follows_the_shorter_factor():
    a = LaurentSeries(Q, {0: 1, 1: 2, 2: 3}, 0, 3)
    b = LaurentSeries(Q, {-1: 1, 0: -1, 1: 5}, -1, 2)
    product = a * b
    assert product.window == (-1, 2)
    assert [Q.to_fraction(product.coefficient(e)) for e in range(-1, 2)] == [1, 1, 6]
    with pytest.raises(PrecisionError):
        product.coefficient(2)


def test_product_with_an_empty_window_is_a_precision_error():
    shifted = LaurentSeries(Q, {0: 1}, 0, 1) * LaurentSeries(Q, {5: 1}, 5, 6)
    assert shifted.window == (5, 6)
    assert shifted.coefficient(5) == Q.one
    unknown = LaurentSeries(Q, {}, 3, 3)
    with pytest.raises(PrecisionError):
        LaurentSeries(Q, {0: 1, 1: 1}, 0, 4) * unknown
    with pytest.raises(PrecisionError):
        LaurentSeries.one(Q) * unknown
    assert (LaurentSeries.one(Q) * LaurentSeries.monomial(2)).exact


def test_coefficients_below_the_window_vanish():
    s = LaurentSeries(Q, {3: 1}, 2, 5)
    assert s.coefficient(-10) == Q.zero
    assert s.valuation() == 3


def test_invert_geometric_series():
    s = LaurentSeries(Q, {0: 1, 1: -1}, 0, 6)
    inverse = s.invert()
    assert inverse.window == (0, 6)
    assert all(inverse.coefficient(e) == Q.one for e in range(6))
    assert (s * inverse).agrees_with(LaurentSeries.one(Q))


def test_invert_of_a_monomial_is_exact():
    inverse = LaurentSeries.monomial(-3, 2, Q).invert()
    assert inverse.exact
    assert Q.to_fraction(inverse.coefficient(3)) == Fraction(1, 2)


def test_zero_series_has_no_inverse():
    with pytest.raises(InputError):
        LaurentSeries.zero(Q).invert()


def test_residue_needs_the_z_minus_one_coefficient():
    s = LaurentSeries(Q, {-2: 1, -1: 3}, -2, 0)
    assert s.residue() == Q.convert(3)
    with pytest.raises(PrecisionError):
        LaurentSeries(Q, {-2: 1}, -2, -1).residue()


def test_square_root_of_one_plus_z():
    root = LaurentSeries.polynomial({0: 1, 1: 1}, Q).nth_root(2, hi=5)
    expected = [Fraction(1), Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128)]
    assert [Q.to_fraction(root.coefficient(e)) for e in range(5)] == expected


def test_root_of_a_perfect_power_terminates():
    square = LaurentSeries.polynomial({-2: 1, -1: 2, 0: 1}, Q)
    root = square.nth_root(2, hi=4)
    assert root.valuation() == -1
    assert root.coefficient(0) == Q.one
    assert all(root.coefficient(e) == Q.zero for e in range(1, 4))


def test_root_over_f5_squares_back():
    s = LaurentSeries.polynomial({0: 1, 1: 1, 3: 2}, F5)
    root = s.nth_root(2, hi=8)
    assert (root * root).agrees_with(s)


def test_root_failures():
    with pytest.raises(InputError):
        LaurentSeries.polynomial({0: 2}, Q).nth_root(2, hi=3)
    with pytest.raises(InputError):
        LaurentSeries.polynomial({1: 1}, Q).nth_root(2, hi=3)
    with pytest.raises(InputError):
        LaurentSeries.polynomial({0: 1}, F5).nth_root(5, hi=3)


def test_field_mismatch_is_rejected():
    with pytest.raises(FieldMismatchError):
        LaurentSeries.one(Q) + LaurentSeries.one(F5)


def test_ring_axioms_over_f5(rng):
    a = _random_series(rng, F5, -2, 6)
    b = _random_series(rng, F5, 0, 7)
    c = _random_series(rng, F5, -1, 5)
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)
    assert (a * b).agrees_with(b * a)
    assert (a + (-a)).is_zero()


def test_truncation_masks_the_full_product(rng):
    a_coeffs = {e: int(rng.integers(-3, 4)) for e in range(-1, 6)}
    b_coeffs = {e: int(rng.integers(-3, 4)) for e in range(1, 6)}
    a = LaurentSeries.polynomial({**a_coeffs, -2: 1}, Q)
    b = LaurentSeries.polynomial({**b_coeffs, 0: 1}, Q)
    full = a * b
    truncated = a.truncate(2) * b.truncate(3)
    assert truncated.hi == min(-2 + 3, 0 + 2)
    assert truncated.agrees_with(full)


def test_shift_and_derivative():
    s = LaurentSeries.polynomial({-1: 1, 2: 3}, Q)
    assert s.shift(2).valuation() == 1
    derivative = s.derivative()
    assert derivative.coefficient(-2) == Q.convert(-1)
    assert derivative.coefficient(1) == Q.convert(6)


def test_series_from_pairs_accumulates():
    s = series_from_pairs([(0, 1), (0, "1/2"), (2, -1)], Q, 0, 4)
    assert Q.to_fraction(s.coefficient(0)) == Fraction(3, 2)
    assert s.coefficient(2) == Q.convert(-1)
