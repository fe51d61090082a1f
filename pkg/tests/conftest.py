import math

import pytest

from TimelikeTubes.curve import make_analytic_curve, reparametrize_unit_speed
from TimelikeTubes.enums import CurvePreset
from TimelikeTubes.tube import ParallelFrame, make_tube

SMALL_GRID = (16, 32)


@pytest.fixture(scope='session')
def helix():
    return make_analytic_curve(CurvePreset.TimelikeHelix)


@pytest.fixture(scope='session')
def hyperbola():
    return make_analytic_curve(CurvePreset.TimelikeHyperbola)


@pytest.fixture(scope='session')
def line():
    return make_analytic_curve(CurvePreset.TimelikeLine)


@pytest.fixture(scope='session')
def polynomial():
    return reparametrize_unit_speed(make_analytic_curve(CurvePreset.PolynomialTimelike, unit_speed=False))


@pytest.fixture(scope='session')
def helix_tube(helix):
    return make_tube(helix, 0.1)


@pytest.fixture(scope='session')
def polynomial_tube(polynomial):
    return make_tube(polynomial, 0.3)


@pytest.fixture(scope='session')
def cylinder(line):
    return make_tube(line, 1.0, ParallelFrame.along(line))


@pytest.fixture
def small_grid():
    return SMALL_GRID


@pytest.fixture(scope='session')
def sqrt2():
    return math.sqrt(2.0)
