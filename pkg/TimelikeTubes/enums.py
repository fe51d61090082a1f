#!/usr/bin/env python

from enum import Enum, IntEnum


class CausalClass(Enum):
    Spacelike = 0
    Timelike = 1
    Lightlike = 2
    Zero = 3


class CurvePreset(Enum):
    TimelikeLine = 'line'
    TimelikeHyperbola = 'hyperbola'
    TimelikeHelix = 'helix'
    PolynomialTimelike = 'polynomial'


class JetSource(Enum):
    Analytic = 0
    SampledFiniteDifference = 1


class CurvaturePair(Enum):
    K_H = ('K', 'H')
    K_KII = ('K', 'KII')
    H_KII = ('H', 'KII')

    @property
    def label(self) -> str:
        return f'({self.value[0]},{self.value[1]})'


class PartialSource(Enum):
    ClosedForm = 0
    FiniteDifference = 1


class TrigBasis(Enum):
    CosPowers = 'cos^k'
    CosPowersSin = 'cos^k*sin'


class Theorem(Enum):
    WeingartenKH = 'weingarten-KH'
    WeingartenKII = 'weingarten-KII'
    LinearKH = 'linear-KH'
    NoLinearKII = 'no-linear-KII'


class ExitCode(IntEnum):
    OK = 0
    FAIL = 1
    RADIUS_TOO_LARGE = 2
    IO_FAILURE = 3
    PARSE_ERROR = 4
