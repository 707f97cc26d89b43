import pytest

from components.grassmannian import random_point
from components.krichever import (
    CurveSpec,
    algebra_check,
    gaps_and_genus,
    krichever_map,
    reconstruct_algebra,
    superelliptic_expansions,
    wgp_check,
)
from utils import CertificationError, InputError, PrecisionError
from utils.laurent import FieldSpec, Q
from utils.partitions import Partition

from .conftest import DEPTH, PRECISION


def _relation(presentation, k=0):
    return {exps: Q.to_fraction(c) for exps, c in presentation.relations[k].items()}


# Curves

def test_curve_validation():
    with pytest.raises(InputError):
        CurveSpec.superelliptic(2, [1, 0, 1])
    with pytest.raises(InputError):
        CurveSpec.superelliptic(2, [1, 0, 0, 2])
    with pytest.raises(InputError):
        CurveSpec.superelliptic(1, [0, 1])
    with pytest.raises(InputError):
        CurveSpec.superelliptic(3, [1, 1], FieldSpec(3))


def test_leading_coefficient_with_a_root_is_accepted():
    curve = CurveSpec.superelliptic(2, [0, 0, 0, 4])
    assert curve.genus == 1


def test_genus_formula(elliptic_curve, trigonal_curve):
    assert elliptic_curve.genus == 1
    assert trigonal_curve.genus == 3
    assert CurveSpec.superelliptic(2, [1, 0, 0, 0, 0, 1]).genus == 2


def test_curve_record_round_trip(elliptic_curve):
    assert CurveSpec.from_record(elliptic_curve.to_record()) == elliptic_curve
    with pytest.raises(InputError):
        CurveSpec.from_record({"type": "hyperbolic"})
    with pytest.raises(InputError):
        CurveSpec.from_record({"type": "superelliptic", "m": 2})


def test_local_expansions_satisfy_the_equation(elliptic_curve, trigonal_curve):
    x, y = superelliptic_expansions(elliptic_curve, 12)
    assert (y * y).agrees_with(x ** 3 - x)
    x, y = superelliptic_expansions(trigonal_curve, 16)
    assert (y * y * y).agrees_with(x ** 4 + 1)


# Krichever map

def test_krichever_index_is_one_minus_genus(elliptic, trigonal, line):
    assert elliptic.index == 0
    assert trigonal.index == -2
    assert line.index == 1


def test_krichever_frame_valuations(elliptic, trigonal):
    assert sorted(elliptic.valuations, reverse=True) == [0, -2, -3, -4, -5, -6, -7, -8, -9, -10]
    assert set(trigonal.valuations) == {0, -3, -4, -6, -7, -8, -9, -10}


def test_krichever_needs_the_conductor(trigonal_curve):
    with pytest.raises(PrecisionError):
        krichever_map(trigonal_curve, 4, PRECISION)


def test_krichever_over_a_prime_field():
    curve = CurveSpec.superelliptic(2, [0, -1, 0, 1], FieldSpec(7))
    U = krichever_map(curve, 8, 8)
    assert U.index == 0
    assert algebra_check(U).passed


def test_frame_curves_are_normalized(cusp):
    curve = CurveSpec.from_frame(list(cusp.frame))
    assert krichever_map(curve, DEPTH, PRECISION).agrees_with(cusp)


# Algebra criterion

def test_curve_points_are_algebras(elliptic, trigonal, line, cusp):
    for U in (elliptic, trigonal, line, cusp):
        report = algebra_check(U)
        assert report.passed
        assert report.contains_unit


def test_algebra_check_names_the_first_failing_product(not_an_algebra):
    report = algebra_check(not_an_algebra, threads=2)
    assert not report.passed
    assert report.contains_unit
    assert report.witness["pair"] == [-2, -2]
    assert report.witness["exponent"] == -1
    assert report.to_record()["witness"]["coefficient"] == "2"


def test_algebra_check_without_the_unit(vacuum_point):
    report = algebra_check(vacuum_point)
    assert not report.passed
    assert not report.contains_unit
    assert report.witness["pair"] is None
    assert report.witness["exponent"] == 0


def test_algebra_check_bound_within_depth(cusp):
    with pytest.raises(PrecisionError):
        algebra_check(cusp, DEPTH + 1)


# Gaps

@pytest.mark.parametrize("fixture, gaps, generators, conductor", [
    ("line", [], [1], 0),
    ("elliptic", [-1], [2, 3], 2),
    ("trigonal", [-1, -2, -5], [3, 4], 6),
])
def test_gaps_and_genus(request, fixture, gaps, generators, conductor):
    report = gaps_and_genus(request.getfixturevalue(fixture))
    assert report.gaps == gaps
    assert report.genus == len(gaps)
    assert report.generators == generators
    assert report.conductor == conductor
    assert report.is_semigroup


def test_trigonal_pole_orders(trigonal):
    report = gaps_and_genus(trigonal)
    assert report.multiplicity == 3
    assert report.pole_orders == [0, 3, 4, 6, 7, 8]


def test_non_semigroup_valuations(rng):
    U = random_point(Partition.of(1, 1), 0, DEPTH, PRECISION, rng)
    assert not gaps_and_genus(U).is_semigroup


@pytest.mark.parametrize("lam, n, expected", [
    (Partition.of(1), 0, True),
    (Partition.of(3, 1, 1), -2, True),
    (Partition(), 1, True),
    (Partition.of(2), 0, False),
    (Partition.of(1, 1), 0, False),
])
def test_weierstrass_gap_partitions(lam, n, expected):
    assert wgp_check(lam, n) is expected


# Reconstruction

def test_reconstruct_the_elliptic_curve(elliptic):
    presentation = reconstruct_algebra(elliptic, 6)
    assert presentation.generators == [("x", 2), ("y", 3)]
    assert len(presentation.relations) == 1
    assert _relation(presentation) == {(0, 2): 1, (3, 0): -1, (1, 0): 1}


def test_reconstruct_the_cusp(cusp):
    presentation = reconstruct_algebra(cusp, 8)
    assert _relation(presentation) == {(0, 2): 1, (3, 0): -1}


def test_reconstruct_the_trigonal_curve(trigonal):
    presentation = reconstruct_algebra(trigonal, 12)
    assert presentation.generators == [("x", 3), ("y", 4)]
    assert _relation(presentation) == {(0, 3): 1, (4, 0): -1, (0, 0): -1}
    record = presentation.to_record()
    assert record["bound"] == 12
    assert record["generators"][0] == {"name": "x", "pole_order": 3}


def test_reconstruct_the_line(line):
    presentation = reconstruct_algebra(line, 5)
    assert presentation.generators == [("x", 1)]
    assert presentation.relations == []


def test_reconstruct_needs_every_generator(elliptic):
    with pytest.raises(PrecisionError):
        reconstruct_algebra(elliptic, 2)


def test_reconstruct_rejects_non_algebras(not_an_algebra):
    with pytest.raises(CertificationError):
        reconstruct_algebra(not_an_algebra, 6)

