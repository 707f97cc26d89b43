import pytest

from components.grassmannian import (
    GrassPoint,
    monomial_point,
    normalize,
    random_point,
    residue_pairing,
    vacuum,
)
from utils import InputError, PrecisionError
from utils.laurent import LaurentSeries, Q
from utils.partitions import EMPTY, Partition, partitions_up_to

from .conftest import DEPTH, PRECISION


def test_vacuum_has_only_the_empty_coordinate(vacuum_point):
    assert vacuum_point.index == 0
    assert vacuum_point.is_big_cell()
    assert vacuum_point.pluecker_coordinates(4) == {EMPTY: Q.one}


def test_cusp_sits_in_the_one_box_stratum(cusp):
    assert cusp.partition == Partition.of(1)
    assert cusp.deepest_gap() == 1
    assert cusp.pluecker_coordinates(4) == {Partition.of(1): Q.one}


def test_line_has_index_one(line):
    assert line.index == 1
    assert line.is_big_cell()
    assert line.at_index_zero().index == 0


@pytest.mark.parametrize("lam, n", [(Partition.of(2, 1), 0), (Partition.of(2, 1), 1), (Partition.of(3), -1)])
def test_random_point_keeps_its_stratum(rng, lam, n):
    U = random_point(lam, n, DEPTH, PRECISION, rng)
    assert U.index == n
    assert U.partition == lam


def test_three_term_pluecker_relation(rng):
    U = random_point(EMPTY, 0, DEPTH, PRECISION, rng)
    omega = U.pluecker_coordinates(4)

    def w(*parts):
        return omega.get(Partition.of(*parts), Q.zero)

    assert w() * w(2, 2) - w(1) * w(2, 1) + w(2) * w(1, 1) == Q.zero


def test_pluecker_needs_depth():
    with pytest.raises(PrecisionError):
        vacuum(2, PRECISION).pluecker(Partition.of(1, 1, 1))
    with pytest.raises(PrecisionError):
        vacuum(DEPTH, PRECISION).require_weight(12)


def test_normalize_rejects_a_dependent_frame():
    one = LaurentSeries.one(Q)
    with pytest.raises(InputError):
        normalize([one, one.scale(2)], 3, 3, Q)


def test_normalize_reduces_against_lower_members():
    frame = [
        LaurentSeries.polynomial({0: 1, 1: 2}, Q),
        LaurentSeries.polynomial({-1: 1, 0: 1, 1: 1}, Q),
    ]
    U = normalize(frame, 1, 3, Q)
    assert U.valuations == (0, -1)
    low = U.member(-1)
    assert low.coefficient(0) == Q.zero
    assert low.coefficient(1) == Q.convert(-1)


def test_unreduced_frame_is_rejected():
    frame = [LaurentSeries.polynomial({-1: 1, 0: 2}, Q), LaurentSeries.monomial(0, 1, Q)]
    with pytest.raises(InputError):
        GrassPoint(Q, frame, 2, 2)


def test_perp_of_the_cusp_is_the_cusp(cusp):
    assert cusp.perp().agrees_with(cusp)


def test_perp_negates_the_index(line):
    dual = line.perp()
    assert dual.index == -1
    assert dual.valuations[0] == -2


def test_perp_is_an_involution(rng):
    U = random_point(Partition.of(2, 1), 0, DEPTH, PRECISION, rng)
    assert U.perp().perp().agrees_with(U)


def test_perp_conjugates_pluecker_coordinates(rng):
    U = random_point(EMPTY, 0, DEPTH, PRECISION, rng)
    dual = U.perp()
    for lam in partitions_up_to(4):
        sign = -1 if lam.weight % 2 else 1
        assert dual.pluecker(lam.conjugate()) == U.pluecker(lam) * sign


def test_perp_rejects_a_window_beyond_the_point(cusp):
    with pytest.raises(PrecisionError):
        cusp.perp(depth=PRECISION + 1)


def test_monomial_action_shifts_the_index(line):
    shifted = line.act(LaurentSeries.monomial(-1, 1, Q))
    assert shifted.index == line.index - 1
    assert shifted.is_big_cell()
    assert shifted.depth == line.depth + 1


def test_unit_action_keeps_the_valuation_set(cusp):
    moved = cusp.act(LaurentSeries.polynomial({0: 1, 1: 1}, Q))
    assert moved.valuation_set == cusp.valuation_set
    assert moved.member(0).coefficient(1) == Q.one


def test_residue_pairing():
    assert residue_pairing(LaurentSeries.monomial(-3, 1, Q), LaurentSeries.monomial(2, 1, Q)) == Q.one
    assert residue_pairing(LaurentSeries.monomial(-3, 1, Q), LaurentSeries.monomial(1, 1, Q)) == Q.zero


def test_record_round_trip(rng):
    U = random_point(Partition.of(2), 1, DEPTH, PRECISION, rng)
    restored = GrassPoint.from_record(U.to_record())
    assert restored.agrees_with(U)


def test_record_with_a_wrong_index_is_rejected():
    record = monomial_point([0, -1], 2, 3).to_record()
    record["index"] = 5
    with pytest.raises(InputError):
        GrassPoint.from_record(record)
