#!/usr/bin/env python
"""Timelike tubes x(t, theta) = gamma(t) + r (cos(theta) n(t) + sin(theta) b(t)).

All closed forms broadcast over `t` and `theta`, so passing t[:, None] and
theta[None, :] evaluates a whole grid while the frame is computed once per
row.
"""

import logging
import math
from collections.abc import Iterator
from typing import Any, NamedTuple, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize_scalar

from TimelikeTubes.curve import FrenetData, TimelikeCurve, frenet_frame
from TimelikeTubes.errors import (
    DegenerateMetric,
    DegenerateSecondForm,
    DomainViolation,
    ParamDomain,
    RadiusTooLarge,
    SingularAlpha,
)
from TimelikeTubes.minkowski import MinkVector, components, lorentz_cross, mink_inner
from TimelikeTubes.surface import SurfaceJets, SurfacePatch

logger = logging.getLogger('tube')

TWO_PI = 2.0 * math.pi
SUP_KAPPA_POINTS = 257
ALPHA_FLOOR = 1e-12
DEGENERACY_TOL = 1e-10
FRAME_TOL = 1e-9

Array = NDArray[np.float64]


def _col(x: ArrayLike) -> Array:
    return np.asarray(x)[..., None]


class ParallelFrame:
    """Constant normal frame for a straight timelike line, where Frenet fails.

    `b0` must equal t ^ n0 so the tube normal has the same orientation as in
    the Frenet case.
    """

    def __init__(self, n0: ArrayLike, b0: ArrayLike) -> None:
        self.n0 = components(n0)
        self.b0 = components(b0)
        for name, vec in (('n0', self.n0), ('b0', self.b0)):
            if abs(float(mink_inner(vec, vec)) - 1.0) > FRAME_TOL:
                raise ParamDomain(f'{name} must be a unit spacelike vector, got {vec.tolist()!r}')
        if abs(float(mink_inner(self.n0, self.b0))) > FRAME_TOL:
            raise ParamDomain('n0 and b0 must be orthogonal')

    @classmethod
    def along(cls, curve: TimelikeCurve, n0: ArrayLike = (0.0, 1.0, 0.0)) -> 'ParallelFrame':
        t = curve.jet(curve.domain[0]).d1
        n0 = components(n0)
        return cls(n0, lorentz_cross(t, n0))

    def check(self, curve: TimelikeCurve, n: int = 65) -> None:
        jet = curve.jet(curve.grid(n))
        if float(np.max(np.abs(jet.d2))) > FRAME_TOL:
            raise ParamDomain(f'{curve.name} is not a straight line; a constant frame does not apply')
        if float(np.max(np.abs(mink_inner(jet.d1, self.n0)))) > FRAME_TOL or float(
            np.max(np.abs(mink_inner(jet.d1, self.b0)))
        ) > FRAME_TOL:
            raise ParamDomain('constant frame is not orthogonal to the tangent')
        if float(np.max(np.abs(lorentz_cross(jet.d1, self.n0) - self.b0))) > FRAME_TOL:
            raise ParamDomain('constant frame must satisfy b0 = t ^ n0')

    def frame(self, curve: TimelikeCurve, t: ArrayLike) -> FrenetData:
        d1 = curve.jet(t).d1
        shape = d1.shape
        zero = np.zeros(shape[:-1])
        return FrenetData(d1, np.broadcast_to(self.n0, shape), np.broadcast_to(self.b0, shape), zero, zero)

    def __repr__(self) -> str:
        return f'ParallelFrame(n0={self.n0.tolist()!r}, b0={self.b0.tolist()!r})'


class TubeGrid:
    """Sample grid: t on a closed linspace, theta offset by half a step."""

    def __init__(self, tube: 'TubeSurface', nt: int, ntheta: int) -> None:
        self.nt = nt
        self.ntheta = ntheta
        self.t = np.linspace(tube.domain[0][0], tube.domain[0][1], nt)
        self.theta = (np.arange(ntheta) + 0.5) * TWO_PI / ntheta
        self.dt = float(self.t[1] - self.t[0]) if nt > 1 else 0.0
        self.dtheta = TWO_PI / ntheta

    @property
    def T(self) -> Array:
        return self.t[:, None]

    @property
    def THETA(self) -> Array:
        return self.theta[None, :]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nt, self.ntheta)

    def __repr__(self) -> str:
        return f'TubeGrid(nt={self.nt}, ntheta={self.ntheta})'


class TubeSurface:
    def __init__(self, curve: TimelikeCurve, r: float, frame: Optional[ParallelFrame] = None) -> None:
        self.curve = curve
        self.r = float(r)
        self.frame = frame
        self.domain = (curve.domain, (0.0, TWO_PI))
        self.sup_kappa = 0.0

    @property
    def name(self) -> str:
        return f'tube({self.curve.name}, r={self.r:.9g})'

    @property
    def is_cylinder(self) -> bool:
        return self.frame is not None

    def frenet(self, t: ArrayLike) -> FrenetData:
        if self.frame is not None:
            return self.frame.frame(self.curve, t)
        return frenet_frame(self.curve, t)

    def kappa_prime(self, t: ArrayLike) -> Array:
        if self.frame is not None:
            return np.zeros(np.shape(t))
        return self.curve.kappa_prime(t)

    def tau_prime(self, t: ArrayLike) -> Array:
        if self.frame is not None:
            return np.zeros(np.shape(t))
        return self.curve.tau_prime(t)

    def alpha(self, t: ArrayLike, theta: ArrayLike) -> Array:
        return 1.0 + self.r * self.frenet(t).kappa * np.cos(theta)

    def position(self, t: ArrayLike, theta: ArrayLike) -> Array:
        t = np.asarray(t, dtype=float)
        theta = np.asarray(theta, dtype=float)
        fr = self.frenet(t)
        c, s = _col(np.cos(theta)), _col(np.sin(theta))
        return self.curve.jet(t).position + self.r * (c * fr.n + s * fr.b)

    def natural_frame(self, t: ArrayLike, theta: ArrayLike) -> tuple[Array, Array]:
        fr = self.frenet(t)
        c, s = np.cos(theta), np.sin(theta)
        alpha = 1.0 + self.r * fr.kappa * c
        v = _col(c) * fr.b - _col(s) * fr.n
        x_t = _col(alpha) * fr.t + _col(self.r * fr.tau) * v
        return x_t, self.r * v

    def unit_normal(self, t: ArrayLike, theta: ArrayLike) -> Array:
        fr = self.frenet(t)
        c, s = _col(np.cos(theta)), _col(np.sin(theta))
        return -(c * fr.n + s * fr.b)

    def jets(self, t: ArrayLike, theta: ArrayLike) -> SurfaceJets:
        fr = self.frenet(t)
        r = self.r
        kp = self.kappa_prime(t)
        tp = self.tau_prime(t)
        c, s = np.cos(theta), np.sin(theta)
        alpha = 1.0 + r * fr.kappa * c
        k, tau = fr.kappa, fr.tau

        v = _col(c) * fr.b - _col(s) * fr.n
        x_t = _col(alpha) * fr.t + _col(r * tau) * v
        x_theta = r * v
        x_tt = (
            _col(r * kp * c - r * tau * k * s) * fr.t
            + _col(alpha * k - r * tau**2 * c) * fr.n
            - _col(r * tau**2 * s) * fr.b
            + _col(r * tp) * v
        )
        x_ttheta = -_col(r * k * s) * fr.t - _col(r * tau) * (_col(c) * fr.n + _col(s) * fr.b)
        x_thth = -r * (_col(c) * fr.n + _col(s) * fr.b)
        return SurfaceJets(x_t, x_theta, x_tt, x_ttheta, x_thth)

    def as_patch(self, analytic: bool = True) -> SurfacePatch:
        def position(t: Array, theta: Array) -> Array:
            return self.position(t, theta)

        def jets(t: Array, theta: Array) -> SurfaceJets:
            return self.jets(t, theta)

        return SurfacePatch(
            position, self.domain, jets=jets if analytic else None, periodic=(False, True), name=self.name
        )

    def grid(self, nt: int, ntheta: int) -> TubeGrid:
        return TubeGrid(self, nt, ntheta)

    def __repr__(self) -> str:
        return f'TubeSurface(curve={self.curve!r}, r={self.r!r}, frame={self.frame!r})'


def sup_curvature(curve: TimelikeCurve, points: int = SUP_KAPPA_POINTS) -> float:
    """Largest kappa on an even sample, refined by a bounded search between the neighbours of the best sample."""
    s = curve.grid(points)
    kappa = frenet_frame(curve, s).kappa
    i = int(np.argmax(kappa))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, points - 1)]
    best = minimize_scalar(
        lambda x: -float(frenet_frame(curve, np.array([x])).kappa[0]),
        bounds=(lo, hi),
        method='bounded',
        options={'xatol': 1e-12 * max(1.0, curve.span)},
    )
    return max(float(kappa[i]), -float(best.fun))


def make_tube(curve: TimelikeCurve, r: float, frame: Optional[ParallelFrame] = None) -> TubeSurface:
    """Build a tube, requiring r * sup(kappa) < 1 so that alpha stays positive."""
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise ParamDomain(f'radius must be a positive real, got {r!r}')

    tube = TubeSurface(curve, r, frame)
    if frame is not None:
        frame.check(curve)
    else:
        tube.sup_kappa = sup_curvature(curve)

    if r * tube.sup_kappa >= 1.0:
        raise RadiusTooLarge(r, tube.sup_kappa)

    coarse = tube.grid(17, 16)
    if np.any(first_form_det(tube, coarse.T, coarse.THETA) >= 0.0):
        raise DegenerateMetric(f'{tube.name} is not timelike: EG - F^2 >= 0 somewhere')

    logger.info('Built %s (sup kappa %.9g)', tube.name, tube.sup_kappa)
    return tube


class HValue(NamedTuple):
    magnitude: Array
    closed_sign: Array

    @property
    def value(self) -> Array:
        return self.closed_sign * self.magnitude


class CurvaturePartials:
    def __init__(
        self,
        K_t: Array,
        K_theta: Array,
        H_t: Array,
        H_theta: Array,
        KII_t: Array,
        KII_theta: Array,
        KII_t_transcribed: Array,
        kii_valid: NDArray[np.bool_],
    ) -> None:
        self.K_t = K_t
        self.K_theta = K_theta
        self.H_t = H_t
        self.H_theta = H_theta
        self.KII_t = KII_t
        self.KII_theta = KII_theta
        self.KII_t_transcribed = KII_t_transcribed
        self.kii_valid = kii_valid

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'K_t': self.K_t,
            'K_theta': self.K_theta,
            'H_t': self.H_t,
            'H_theta': self.H_theta,
            'KII_t': self.KII_t,
            'KII_theta': self.KII_theta,
        }.items()

    def __repr__(self) -> str:
        return f'CurvaturePartials(K_t={self.K_t!r}, K_theta={self.K_theta!r}, H_t={self.H_t!r}, H_theta={self.H_theta!r})'


class TubePointData:
    def __init__(self, **fields: Any) -> None:
        self.__dict__.update(fields)

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from self.__dict__.items()

    def __repr__(self) -> str:
        keys = ', '.join(f'{k}={v!r}' for k, v in self.__dict__.items() if k in ('E', 'F', 'G', 'K', 'KII'))
        return f'TubePointData({keys})'


def _checked_alpha(tube: TubeSurface, kappa: Array, c: Array) -> Array:
    alpha = 1.0 + tube.r * kappa * c
    if np.any(np.abs(alpha) <= ALPHA_FLOOR):
        raise SingularAlpha(f'alpha = 1 + r kappa cos(theta) vanishes on {tube.name}')
    return alpha


def closed_form_forms(tube: TubeSurface, t: ArrayLike, theta: ArrayLike) -> dict[str, Array]:
    fr = tube.frenet(t)
    r, k, tau = tube.r, fr.kappa, fr.tau
    c = np.cos(theta)
    alpha = 1.0 + r * k * c
    shape = np.broadcast_shapes(np.shape(alpha), np.shape(c))
    return {
        'E': np.broadcast_to(-(alpha**2) + r**2 * tau**2, shape),
        'F': np.broadcast_to(r**2 * tau, shape),
        'G': np.full(shape, r**2),
        'e': np.broadcast_to(r * tau**2 - k * alpha * c, shape),
        'f': np.broadcast_to(r * tau, shape),
        'g': np.full(shape, r),
    }


def closed_form_K(tube: TubeSurface, t: ArrayLike, theta: ArrayLike) -> Array:
    kappa = tube.frenet(t).kappa
    c = np.cos(theta)
    alpha = _checked_alpha(tube, kappa, c)
    return kappa * c / (tube.r * alpha)


def closed_form_H(tube: TubeSurface, t: ArrayLike, theta: ArrayLike) -> HValue:
    kappa = tube.frenet(t).kappa
    c = np.cos(theta)
    alpha = _checked_alpha(tube, kappa, c)
    printed = -(1.0 + 2.0 * tube.r * kappa * c) / (2.0 * tube.r * alpha)
    return HValue(np.abs(printed), np.copysign(1.0, printed))


def second_form_valid(
    tube: TubeSurface, t: ArrayLike, theta: ArrayLike, tol: float = DEGENERACY_TOL
) -> NDArray[np.bool_]:
    """Where eg - f^2 = -r kappa alpha cos(theta) stays away from zero."""
    kappa = tube.frenet(t).kappa
    c = np.cos(theta)
    return np.abs(tube.r * kappa * (1.0 + tube.r * kappa * c) * c) > tol


def closed_form_KII(
    tube: TubeSurface, t: ArrayLike, theta: ArrayLike, masked: bool = False, tol: float = DEGENERACY_TOL
) -> Array:
    kappa = tube.frenet(t).kappa
    c = np.cos(theta)
    r = tube.r
    alpha = _checked_alpha(tube, kappa, c)
    valid = second_form_valid(tube, t, theta, tol)
    if not masked and not np.all(valid):
        raise DegenerateSecondForm(f'second fundamental form of {tube.name} is degenerate at a requested point')

    with np.errstate(divide='ignore', invalid='ignore'):
        value = (4.0 * r**2 * kappa**2 * c**4 + 6.0 * r * kappa * c**3 + c**2 + 1.0) / (4.0 * r * alpha**2 * c**2)
    return np.where(valid, value, np.nan)


def curvature_partials(
    tube: TubeSurface, t: ArrayLike, theta: ArrayLike, tol: float = DEGENERACY_TOL
) -> CurvaturePartials:
    """Closed-form t and theta partials of K, closed-form-sign H and K_II.

    `KII_t_transcribed` keeps the typeset numerator term 4 r cos^2(theta);
    `KII_t` carries the kappa' that differentiation of K_II produces there.
    K_II partials are NaN wherever the second form degenerates.
    """
    fr = tube.frenet(t)
    k, r = fr.kappa, tube.r
    kp = tube.kappa_prime(t)
    c, s = np.cos(theta), np.sin(theta)
    alpha = _checked_alpha(tube, k, c)
    valid = second_form_valid(tube, t, theta, tol)
    shape = np.broadcast_shapes(np.shape(alpha), np.shape(s))

    def full(x: Array) -> Array:
        return np.array(np.broadcast_to(x, shape), dtype=float)

    K_t = full(kp * c / (r * alpha**2))
    K_theta = full(-k * s / (r * alpha**2))
    H_t = full(-kp * c / (2.0 * alpha**2))
    H_theta = full(k * s / (2.0 * alpha**2))

    common = 2 * r**3 * k**2 * kp * c**4 + 6 * r**2 * k * kp * c**3 - 2 * r**2 * k * kp * c - 2 * r * kp
    with np.errstate(divide='ignore', invalid='ignore'):
        KII_t = (common + 4 * r * kp * c**2) / (4 * r * alpha**4 * c)
        KII_t_transcribed = (common + 4 * r * c**2) / (4 * r * alpha**4 * c)
        KII_theta = (
            s
            * (
                -2 * r**3 * k**3 * c**6
                - 6 * r**2 * k**2 * c**5
                - 4 * r * k * c**4
                + 4 * r**2 * k**2 * c**3
                + 6 * r * k * c**2
                + 2 * c
            )
            / (4 * r * alpha**4 * c**4)
        )

    def masked(x: Array) -> Array:
        return full(np.where(valid, x, np.nan))

    return CurvaturePartials(
        K_t,
        K_theta,
        H_t,
        H_theta,
        masked(KII_t),
        masked(KII_theta),
        masked(KII_t_transcribed),
        np.broadcast_to(valid, shape).copy(),
    )


def evaluate(tube: TubeSurface, t: ArrayLike, theta: ArrayLike) -> TubePointData:
    t = np.asarray(t, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if not tube.curve.contains(t):
        raise DomainViolation(f't outside {tube.curve.domain!r}')
    if not np.all(np.isfinite(theta) & (theta >= 0.0) & (theta < TWO_PI)):
        raise DomainViolation('theta must lie in [0, 2 pi)')

    position = tube.position(t, theta)
    x_t, x_theta = tube.natural_frame(t, theta)
    forms = closed_form_forms(tube, t, theta)
    point = t.ndim == 0 and theta.ndim == 0
    if point:
        position, x_t, x_theta = (MinkVector.from_array(x) for x in (position, x_t, x_theta))
        forms = {k: float(v) for k, v in forms.items()}

    return TubePointData(
        position=position,
        x_t=x_t,
        x_theta=x_theta,
        alpha=tube.alpha(t, theta),
        **forms,
        K=closed_form_K(tube, t, theta),
        H=closed_form_H(tube, t, theta),
        KII=closed_form_KII(tube, t, theta, masked=True),
        KII_valid=second_form_valid(tube, t, theta),
        partials=curvature_partials(tube, t, theta),
    )


def first_form_det(tube: TubeSurface, t: ArrayLike, theta: ArrayLike) -> Array:
    """-alpha^2 r^2, negative on every regular tube."""
    return -(tube.alpha(t, theta) ** 2) * tube.r**2

