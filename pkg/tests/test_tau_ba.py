import pytest

from components.gamma import BiSeries, exponential_element
from components.grassmannian import monomial_point, random_point
from components.tau_ba import (
    addition_formula,
    addition_pluecker_check,
    ba,
    ba_adjoint,
    ba_hat,
    ba_structure,
    gamma_plus_factor,
    structure_expansion,
    tau_direct,
    tau_expand,
)
from utils import BigCellError, CertificationError, CharacteristicError, InputError
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import EMPTY, Partition, TPolynomial, elementary_schur

from .conftest import DEPTH, PRECISION

F5 = FieldSpec(5)


def test_vacuum_tau_is_one(vacuum_point, line):
    assert tau_expand(vacuum_point, 4) == 1
    assert tau_expand(line, 4) == 1


def test_cusp_tau_is_the_first_time(cusp):
    t1 = TPolynomial.variable(1, 4)
    assert tau_expand(cusp, 4) == t1
    assert tau_direct(cusp, 4) == t1


def test_additive_chart_over_a_prime_field():
    cusp = monomial_point([0] + list(range(-2, -7, -1)), 6, 6, F5)
    assert tau_direct(cusp, 3, chart='additive') == TPolynomial.variable(1, 3, field=F5)
    with pytest.raises(CharacteristicError):
        tau_expand(cusp, 3)
    with pytest.raises(CharacteristicError):
        tau_direct(cusp, 3)


def test_unknown_chart_is_rejected(cusp):
    with pytest.raises(InputError):
        tau_direct(cusp, 2, chart='polar')


@pytest.mark.parametrize("lam, n", [(EMPTY, 0), (Partition.of(1), 1), (Partition.of(2, 1), 0)])
def test_plucker_and_direct_tau_agree(rng, lam, n):
    U = random_point(lam, n, DEPTH, PRECISION, rng)
    assert tau_expand(U, 4) == tau_direct(U, 4)


@pytest.mark.slow
def test_plucker_and_direct_tau_agree_on_the_elliptic_curve(elliptic):
    assert tau_expand(elliptic, 4) == tau_direct(elliptic, 4)


def test_perp_tau_is_tau_at_minus_t(rng):
    U = random_point(EMPTY, 0, DEPTH, PRECISION, rng)
    assert tau_expand(U.perp(), 4) == tau_expand(U, 4).negate_times()


def test_vacuum_ba_is_the_exponential(vacuum_point):
    assert ba(vacuum_point, 3, (-3, 1)).agrees_with(exponential_element(3, -1))
    assert ba_adjoint(vacuum_point, 3, (-3, 1)).agrees_with(exponential_element(3, 1))


def test_ba_needs_the_big_cell(cusp):
    with pytest.raises(BigCellError):
        ba(cusp, 2, (-2, 1))
    with pytest.raises(BigCellError):
        ba_adjoint(cusp, 2, (-2, 1))


def test_tau_multiplied_ba_off_the_big_cell(cusp):
    # exp(-Σ t_i z^{-i}) (t_1 + z)
    hat = ba_hat(cusp, 2, (-2, 2))
    assert hat.coefficient(1) == 1
    assert hat.coefficient(0).is_zero()


def test_ba_window_must_be_nonempty(vacuum_point):
    with pytest.raises(InputError):
        ba_hat(vacuum_point, 2, (0, -3))


def test_structure_leading_parts_on_the_big_cell(rng):
    U = random_point(EMPTY, 0, DEPTH, PRECISION, rng)
    terms = ba_structure(U, 3)
    assert [term.pole_order for term in terms] == [1, 2, 3]
    assert [term.leading_weight for term in terms] == [0, 1, 2]
    for i, term in enumerate(terms):
        assert term.leading_part == elementary_schur(i, 2).negate_times()


def test_structure_leading_weights_off_the_big_cell(cusp):
    terms = ba_structure(cusp, 3)
    assert [term.pole_order for term in terms] == [0, 2, 3]
    assert [term.leading_weight for term in terms] == [0, 2, 3]


def test_adjoint_structure_expansion(cusp):
    expansion = structure_expansion(cusp, 2, adjoint=True)
    member, P = expansion[0]
    assert member.valuation() == 0
    assert P == -1


def test_structure_expansion_certifies_far_above_the_top_member(cusp, monkeypatch):
    genuine = ba_hat

    def stray_term_at_z6(U, W, zwin, adjoint=False):
        hat = genuine(U, W, zwin, adjoint=adjoint)
        stray = BiSeries({6: 1}, hat.lo, hat.hi, False, hat.weight, hat.tags, hat.nvars, hat.field)
        return hat + stray

    assert structure_expansion(cusp, 2)
    monkeypatch.setattr("components.tau_ba.ba_hat", stray_term_at_z6)
    with pytest.raises(CertificationError):
        structure_expansion(cusp, 2)


@pytest.mark.parametrize("N, x", [(1, [3]), (2, [1, -2]), (3, [1, 2, 5])])
def test_addition_formula_on_the_cusp(cusp, N, x):
    result = addition_formula(cusp, N, x)
    assert result.proportional


@pytest.mark.slow
@pytest.mark.parametrize("x", [[1, 2], [3, -1], ["1/2", 4]])
def test_addition_formula_on_the_elliptic_curve(elliptic, x):
    result = addition_formula(elliptic, 2, x)
    assert result.proportional
    assert result.ratio is not None


def test_addition_formula_hypotheses(cusp, trigonal):
    with pytest.raises(InputError):
        addition_formula(cusp, 2, [1, 1])
    with pytest.raises(InputError):
        addition_formula(trigonal, 2, [1, 2])
    with pytest.raises(InputError):
        addition_formula(cusp, 2, [1])


def test_gamma_plus_covariance(cusp):
    h = LaurentSeries.polynomial({0: 1, 1: 2}, Q)
    x = [1, 3]
    moved = addition_formula(cusp.act(h), 2, x)
    base = addition_formula(cusp, 2, x)
    expected = base.lhs * gamma_plus_factor(h, x, 4)
    v = expected.valuation()
    ratio = moved.lhs.coefficient(v) * Q.inverse(expected.coefficient(v))
    assert moved.lhs.agrees_with(expected.scale(ratio))


def test_three_term_relation_from_two_point_addition(rng, elliptic):
    assert addition_pluecker_check(elliptic, [1, 2, 3, 5]).holds
    U = random_point(EMPTY, 0, DEPTH, PRECISION, rng)
    assert addition_pluecker_check(U, [-1, 2, "1/3", 4]).holds
