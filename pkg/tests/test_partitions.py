from fractions import Fraction

import pytest
import sympy

from utils import InputError, PrecisionError
from utils.laurent import Q
from utils.partitions import (
    Partition,
    TPolynomial,
    ValuationSet,
    apply,
    D_operator,
    elementary_schur,
    from_schur_expansion,
    horizontal_strips,
    maya_of_partition,
    partition_of_valuations,
    partitions_of,
    partitions_up_to,
    schur,
    schur_coefficient,
    schur_expansion,
    schur_operator,
    tensor,
    tensor_operators,
    valuations_of_partition,
)


def _t(i, W):
    return TPolynomial.variable(i, W)


def _alternant_schur(lam, xs):
    """s_λ(x) as a ratio of alternants"""
    n = len(xs)
    parts = [lam.part(j) for j in range(1, n + 1)]
    numerator = sympy.Matrix(n, n, lambda i, j: xs[i] ** (parts[j] + n - 1 - j))
    denominator = sympy.Matrix(n, n, lambda i, j: xs[i] ** (n - 1 - j))
    value = sympy.nsimplify(numerator.det() / denominator.det())
    return Fraction(int(value.p), int(value.q))


def test_partition_validation():
    with pytest.raises(InputError):
        Partition.of(1, 2)
    with pytest.raises(InputError):
        Partition.of(2, -1)
    assert Partition.of(3, 1, 0) == Partition.of(3, 1)


def test_conjugate():
    assert Partition.of(3, 1).conjugate() == Partition.of(2, 1, 1)
    assert Partition().conjugate() == Partition()


def test_partitions_in_canonical_order():
    assert partitions_of(4) == [
        Partition.of(4), Partition.of(3, 1), Partition.of(2, 2), Partition.of(2, 1, 1), Partition.of(1, 1, 1, 1)
    ]
    assert len(partitions_up_to(5)) == 1 + 1 + 2 + 3 + 5 + 7


def test_horizontal_strips():
    assert horizontal_strips(Partition.of(2, 1), 1) == [Partition.of(2), Partition.of(1, 1)]
    assert horizontal_strips(Partition.of(1, 1, 1), 2) == []
    assert horizontal_strips(Partition.of(3), 3) == [Partition()]


def test_valuation_set_round_trip():
    lam = Partition.of(2, 1)
    T = valuations_of_partition(lam, 0)
    assert T == ValuationSet(frozenset({1, -1}), -2)
    assert T.index() == 0
    assert partition_of_valuations(T, 0) == lam
    with pytest.raises(InputError):
        partition_of_valuations(T, 1)


def test_maya_charge_is_minus_the_index():
    assert maya_of_partition(Partition.of(2, 1), 1).virtual_cardinal() == -1
    assert maya_of_partition(Partition(), 0).virtual_cardinal() == 0


def test_gaps_and_pole_orders():
    trigonal = ValuationSet(frozenset({0, -3, -4}), -5)
    assert trigonal.gaps() == [-1, -2, -5]
    assert trigonal.pole_orders(8) == [0, 3, 4, 6, 7, 8]
    cusp = ValuationSet(frozenset({0}), -1)
    assert cusp.dual() == cusp
    assert cusp.deepest_gap() == 1


def test_elementary_schur_low_degrees():
    W = 3
    assert elementary_schur(2, W) == _t(1, W) * _t(1, W) * Fraction(1, 2) + _t(2, W)
    with pytest.raises(PrecisionError):
        elementary_schur(4, W)


def test_schur_of_a_column():
    W = 2
    assert schur(Partition.of(1, 1), W) == _t(1, W) * _t(1, W) * Fraction(1, 2) - _t(2, W)


@pytest.mark.parametrize("lam", [lam for lam in partitions_up_to(4) if lam.length <= 3])
def test_schur_matches_ratio_of_alternants(lam):
    xs = [sympy.Integer(2), sympy.Rational(-1, 3), sympy.Integer(5)]
    W = max(lam.weight, 1)
    power_sums = [sum(x ** k for x in xs) / k for k in range(1, W + 1)]
    values = [Fraction(int(p.p), int(p.q)) for p in power_sums]
    value = schur(lam, W).evaluate(values)
    assert Q.to_fraction(value) == _alternant_schur(lam, xs)


def test_schur_coefficients_are_dual():
    W = 3
    for lam in partitions_up_to(W):
        f = schur(lam, W)
        for mu in partitions_up_to(W):
            expected = Q.one if lam == mu else Q.zero
            assert schur_coefficient(f, [mu]) == expected


def test_schur_expansion_round_trip():
    coefficients = {Partition(): Q.one, Partition.of(2): Q.convert(3), Partition.of(2, 1): Q.convert(-1)}
    f = from_schur_expansion(coefficients, 4)
    assert schur_expansion(f) == coefficients


def test_truncation_drops_heavy_terms():
    product = _t(1, 1) * _t(1, 1)
    assert product.is_zero()
    with pytest.raises(PrecisionError):
        _t(1, 2).truncate(3)


def test_coefficient_of_a_named_monomial():
    W = 3
    f = TPolynomial.constant(5, W) + (_t(1, W) * _t(2, W)).scale(2)
    assert f.coefficient({('t', 1): 1, ('t', 2): 1}) == Q.convert(2)
    assert f.coefficient({}) == Q.convert(5)
    # zero exponents on variables the ring lacks are ignored
    assert f.coefficient({('t', 7): 0, ('t', 1): 1, ('t', 2): 1}) == Q.convert(2)
    assert f.coefficient({('t', 7): 1}) == Q.zero
    with pytest.raises(InputError):
        f.coefficient({('s', 1): 1})


def test_relayout_never_widens_the_weight():
    f = _t(1, 2) + _t(2, 2)
    wide = f.relayout(4)
    assert (wide.nvars, wide.weight) == (4, 2)
    assert wide == f
    assert f.relayout(1, 1) == _t(1, 1)
    with pytest.raises(InputError):
        f.relayout(2, 3)


def test_invert_in_the_truncated_ring():
    W = 3
    f = TPolynomial.constant(1, W) + _t(1, W)
    inverse = f.invert()
    t1 = _t(1, W)
    assert inverse == TPolynomial.constant(1, W) - t1 + t1 * t1 - t1 * t1 * t1
    assert (f * inverse) == 1


def test_d_operator_sums_strips():
    lam = Partition.of(2, 1)
    expected = schur_operator(Partition.of(2)) + schur_operator(Partition.of(1, 1))
    assert D_operator(lam, 1) == expected


def test_separable_and_general_application_agree():
    W = 4
    tags = ('t', 'tp')
    f = TPolynomial.constant(1, W) + _t(1, W) * _t(2, W) + _t(3, W).scale(2)
    g = _t(1, W) * _t(1, W) - _t(4, W)
    op = tensor_operators([schur_operator(Partition.of(1)), schur_operator(Partition.of(2, 1))], tags)
    op = op + tensor_operators([schur_operator(Partition.of(3)), schur_operator(Partition.of(2))], tags)
    evaluated = op.evaluated()
    assert apply(evaluated, (f, g)) == apply(evaluated, tensor([f, g], tags))


def test_operator_beyond_truncation_is_rejected():
    with pytest.raises(PrecisionError):
        apply(schur_operator(Partition.of(2, 1)).evaluated(), _t(1, 2))
