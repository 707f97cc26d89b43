from fractions import Fraction
from math import factorial

import pytest

from components.gamma import (
    BiSeries,
    abel_element,
    abel_images,
    exp_char0,
    exp_charp,
    exponential_element,
    factor_unit,
    series_inverse_substitution,
    universal_element,
)
from utils import CharacteristicError, InputError
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import TPolynomial

F2 = FieldSpec(2)
F5 = FieldSpec(5)


def _fractions(series, field, count):
    return [field.to_fraction(series.coefficient(e)) for e in range(count)]


def test_universal_element_is_a_unit():
    v = universal_element(3)
    product = v * v.invert()
    assert product.agrees_with(BiSeries.one(3))


def test_inverse_substitution_low_weights():
    t_star = series_inverse_substitution(2)
    t1 = TPolynomial.variable(1, 2)
    t2 = TPolynomial.variable(2, 2)
    assert t_star[0] == -t1
    assert t_star[1] == t1 * t1 - t2


def test_abel_element_is_the_universal_element_at_powers():
    composed = universal_element(3).compose(abel_images(3))
    assert composed.agrees_with(abel_element(3))


def test_exponential_element_at_the_first_time():
    values = exponential_element(3).evaluate([1, 0, 0])
    for k in range(4):
        assert Q.to_fraction(values.coefficient(-k)) == Fraction(1, factorial(k))


def test_exponential_elements_are_mutually_inverse():
    product = exponential_element(3, 1) * exponential_element(3, -1)
    assert product.agrees_with(BiSeries.one(3))


def test_exp_char0_sums_to_the_geometric_series():
    # a_i = 2^i / i gives exp(-log(1 - 2w)) = 1/(1 - 2w)
    series = exp_char0([2, 2, Fraction(8, 3)], sign=1)
    assert series.window == (0, 4)
    assert _fractions(series, Q, 4) == [1, 2, 4, 8]


def test_exp_char0_of_the_abel_parameters():
    # a_i = u^i / i at u = 2 gives (1 - u/z)^{-1}
    series = exp_char0([2, 2, Fraction(8, 3)])
    assert series == abel_element(3).evaluate([2])
    assert series.window == (-3, 1)
    assert [Q.to_fraction(series.coefficient(-k)) for k in range(4)] == [1, 2, 4, 8]
    assert series.coefficient(1) == Q.zero


def test_exp_char0_sign_places_the_exponents():
    minus = exp_char0([1, 0])
    plus = exp_char0([1, 0], sign=1)
    assert minus.exact and not plus.exact
    assert minus.coefficient(-1) == Q.one and minus.coefficient(1) == Q.zero
    assert plus.coefficient(1) == Q.one and plus.coefficient(-1) == Q.zero
    for k in range(3):
        assert minus.coefficient(-k) == plus.coefficient(k)
    with pytest.raises(InputError):
        exp_char0([1], sign=0)


def test_exp_char0_matches_the_exponential_element():
    assert exp_char0([1, 0, 0]) == exponential_element(3).evaluate([1, 0, 0])


def test_exp_char0_is_a_homomorphism():
    a = [1, Fraction(-1, 2), 3, 0]
    b = [Fraction(2, 3), 5, -1, Fraction(1, 4)]
    total = [x + y for x, y in zip(a, b)]
    assert (exp_char0(a, sign=1) * exp_char0(b, sign=1)).agrees_with(exp_char0(total, sign=1))
    negated = [-x for x in a]
    assert (exp_char0(a, sign=1) * exp_char0(negated, sign=1)).agrees_with(LaurentSeries.one(Q))
    # Γ_− products keep heavier terms; compare through weight 4
    product = exp_char0(a) * exp_char0(b)
    assert all(product.coefficient(-k) == exp_char0(total).coefficient(-k) for k in range(5))


def test_exp_char0_needs_characteristic_zero():
    with pytest.raises(CharacteristicError):
        exp_char0([1, 0], field=F5)


def test_exp_charp_single_entry_is_a_binomial():
    series = exp_charp([0, 3], sign=1, field=F5)
    assert _fractions(series, F5, 3) == [1, 0, 2]
    assert exp_charp([3], field=F5) == LaurentSeries.polynomial({0: 1, -1: -3}, F5)


def test_exp_charp_multiplies_the_factors():
    series = exp_charp([1, 2, 3], sign=1, field=F5)
    expected = (LaurentSeries.polynomial({0: 1, 1: -1}, F5)
                * LaurentSeries.polynomial({0: 1, 2: -2}, F5)
                * LaurentSeries.polynomial({0: 1, 3: -3}, F5))
    assert series.agrees_with(expected)
    assert _fractions(series, F5, 4) == [1, 4, 3, 4]
    minus = exp_charp([1, 2, 3], field=F5)
    assert [F5.to_fraction(minus.coefficient(-k)) for k in range(4)] == [1, 4, 3, 4]
    assert minus.window == (-3, 1)


def test_exp_charp_is_not_a_homomorphism_over_f2():
    a = [1, 0]
    product = exp_charp(a, sign=1, field=F2) * exp_charp(a, sign=1, field=F2)
    doubled = exp_charp([x + x for x in a], sign=1, field=F2)
    assert product.coefficient(2) == F2.one
    assert doubled.coefficient(2) == F2.zero
    assert not product.agrees_with(doubled)


def test_factor_unit():
    g = LaurentSeries.polynomial({-2: 3, -1: 3}, Q)
    factors = factor_unit(g)
    assert factors.power == -2
    assert factors.constant == Q.convert(3)
    assert factors.plus == LaurentSeries.polynomial({0: 1, 1: 1}, Q)
    assert factors.minus == LaurentSeries.one(Q)
    with pytest.raises(InputError):
        factor_unit(LaurentSeries.zero(Q))
