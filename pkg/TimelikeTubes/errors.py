#!/usr/bin/env python

from typing import Optional

from TimelikeTubes.enums import ExitCode


class TubeError(Exception):
    exit_code: ExitCode = ExitCode.FAIL


class NonFiniteVector(TubeError, ValueError):
    pass


class ParamDomain(TubeError, ValueError):
    pass


class NotTimelike(TubeError):
    pass


class NotUnitSpeed(TubeError):
    pass


class VanishingCurvature(TubeError):
    def __init__(self, message: str, parameter: Optional[float] = None) -> None:
        super().__init__(message)
        self.parameter = parameter


class DegenerateTangentPlane(TubeError):
    pass


class DegenerateMetric(TubeError):
    pass


class DegenerateSecondForm(TubeError):
    pass


class StencilOutOfDomain(TubeError):
    pass


class RadiusTooLarge(TubeError):
    exit_code = ExitCode.RADIUS_TOO_LARGE

    def __init__(self, radius: float, sup_kappa: float) -> None:
        self.radius = radius
        self.sup_kappa = sup_kappa
        self.max_radius = 1.0 / sup_kappa if sup_kappa > 0 else float('inf')
        super().__init__(
            f'radius {radius:.9g} too large: sup kappa = {sup_kappa:.9g}, '
            f'admissible radius must be < {self.max_radius:.9g}'
        )


class SingularAlpha(TubeError):
    pass


class DomainViolation(TubeError, ValueError):
    pass


class GridMismatch(TubeError):
    pass


class InsufficientValidGrid(TubeError):
    pass


class IllConditionedFit(TubeError):
    def __init__(self, condition: float) -> None:
        self.condition = condition
        super().__init__(f'least-squares design matrix is ill-conditioned (cond = {condition:.3e})')


class InsufficientSamples(TubeError, ValueError):
    pass


class TrivialRelation(TubeError, ValueError):
    pass


class EmptyFixtureSet(TubeError, ValueError):
    pass


class CurveParseError(TubeError):
    exit_code = ExitCode.PARSE_ERROR

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)


class JobSpecError(TubeError, ValueError):
    exit_code = ExitCode.PARSE_ERROR
