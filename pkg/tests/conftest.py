"""Shared points and curves for the test suite"""

import numpy as np
import pytest

from components.grassmannian import line_point, monomial_point, normalize, vacuum
from components.krichever import CurveSpec, krichever_map
from utils.laurent import LaurentSeries, Q

DEPTH = 10
PRECISION = 10


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture(scope="session")
def vacuum_point():
    return vacuum(DEPTH, PRECISION)


@pytest.fixture(scope="session")
def line():
    """k[z^{-1}]: the genus 0 curve"""
    return line_point(DEPTH, PRECISION)


@pytest.fixture(scope="session")
def cusp():
    """span{1, z^{-2}, z^{-3}, ...}: the cuspidal cubic, genus 1"""
    return monomial_point([0] + list(range(-2, -DEPTH - 1, -1)), DEPTH, PRECISION)


@pytest.fixture(scope="session")
def elliptic_curve():
    return CurveSpec.superelliptic(2, [0, -1, 0, 1])


@pytest.fixture(scope="session")
def elliptic(elliptic_curve):
    """y^2 = x^3 - x"""
    return krichever_map(elliptic_curve, DEPTH, PRECISION)


@pytest.fixture(scope="session")
def trigonal_curve():
    return CurveSpec.superelliptic(3, [1, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def trigonal(trigonal_curve):
    """y^3 = x^4 + 1, pole semigroup <3, 4>, genus 3"""
    return krichever_map(trigonal_curve, DEPTH, PRECISION)


@pytest.fixture(scope="session")
def not_an_algebra():
    """span{1, z^{-2} + z, z^{-3}, ...}: index 0, contains 1, but (z^{-2} + z)^2 leaves it"""
    frame = [LaurentSeries.one(Q), LaurentSeries.polynomial({-2: 1, 1: 1}, Q)]
    frame += [LaurentSeries.monomial(-k, 1, Q) for k in range(3, DEPTH + 1)]
    return normalize(frame, DEPTH, PRECISION, Q)
