#!/usr/bin/env python

import csv
import logging
import math
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Any, Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import make_interp_spline
from scipy.optimize import newton

from TimelikeTubes.enums import CurvePreset, JetSource
from TimelikeTubes.errors import (
    CurveParseError,
    NotTimelike,
    NotUnitSpeed,
    ParamDomain,
    VanishingCurvature,
)
from TimelikeTubes.minkowski import DEFAULT_CAUSAL_TOL, components, lorentz_cross, mink_inner, mink_norm
from TimelikeTubes.numdiff import central_first, central_second, central_third, clamped_derivative, fd_step

logger = logging.getLogger('curve')

UNIT_SPEED_TOL = 1e-7
KAPPA_FLOOR = 1e-8
VALIDATION_POINTS = 64
DERIVATIVE_STEP = 1e-4
MIN_SAMPLES = 7

JetTuple = tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]


class CurveJet:
    def __init__(self, position: ArrayLike, d1: ArrayLike, d2: ArrayLike, d3: ArrayLike) -> None:
        self.position = components(position)
        self.d1 = components(d1)
        self.d2 = components(d2)
        self.d3 = components(d3)

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'position': self.position,
            'd1': self.d1,
            'd2': self.d2,
            'd3': self.d3,
        }.items()

    def __repr__(self) -> str:
        return f'CurveJet(position={self.position!r}, d1={self.d1!r}, d2={self.d2!r}, d3={self.d3!r})'


class FrenetData:
    def __init__(
        self,
        t: NDArray[np.float64],
        n: NDArray[np.float64],
        b: NDArray[np.float64],
        kappa: NDArray[np.float64],
        tau: NDArray[np.float64],
    ) -> None:
        self.t = t
        self.n = n
        self.b = b
        self.kappa = kappa
        self.tau = tau

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {'t': self.t, 'n': self.n, 'b': self.b, 'kappa': self.kappa, 'tau': self.tau}.items()

    def __repr__(self) -> str:
        return f'FrenetData(t={self.t!r}, n={self.n!r}, b={self.b!r}, kappa={self.kappa!r}, tau={self.tau!r})'


class TimelikeCurve:
    """A curve s -> CurveJet over a closed parameter interval.

    `jet_fn` must accept an array of any shape and return position and the
    first three derivatives with one extra trailing axis of length 3.
    """

    def __init__(
        self,
        jet_fn: Callable[[NDArray[np.float64]], JetTuple],
        domain: tuple[float, float],
        source: JetSource = JetSource.Analytic,
        name: str = 'curve',
    ) -> None:
        lo, hi = (float(x) for x in domain)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ParamDomain(f'invalid parameter domain {domain!r}')
        self._jet_fn = jet_fn
        self.domain = (lo, hi)
        self.source = source
        self.name = name
        self.unit_speed_tol = UNIT_SPEED_TOL
        self.kappa_floor = KAPPA_FLOOR
        self.causal_tol = DEFAULT_CAUSAL_TOL
        self._unit_speed: dict[float, bool] = {}

    @property
    def span(self) -> float:
        return self.domain[1] - self.domain[0]

    def jet(self, s: ArrayLike) -> CurveJet:
        s = np.asarray(s, dtype=float)
        return CurveJet(*self._jet_fn(s))

    def contains(self, s: ArrayLike, slack: float = 1e-12) -> bool:
        s = np.asarray(s, dtype=float)
        pad = slack * max(1.0, self.span)
        return bool(np.all((s >= self.domain[0] - pad) & (s <= self.domain[1] + pad)))

    def grid(self, n: int) -> NDArray[np.float64]:
        return np.linspace(self.domain[0], self.domain[1], n)

    def speed_defect(self, n: int = VALIDATION_POINTS) -> float:
        d1 = self.jet(self.grid(n)).d1
        return float(np.max(np.abs(mink_inner(d1, d1) + 1.0)))

    def is_unit_speed(self, tol: Optional[float] = None) -> bool:
        tol = self.unit_speed_tol if tol is None else tol
        if tol not in self._unit_speed:
            self._unit_speed[tol] = self.speed_defect() <= tol
        return self._unit_speed[tol]

    def frenet(self, s: ArrayLike) -> FrenetData:
        return frenet_frame(self, s)

    def kappa(self, s: ArrayLike) -> NDArray[np.float64]:
        return mink_norm(self.jet(s).d2)

    def tau(self, s: ArrayLike) -> NDArray[np.float64]:
        return self.frenet(s).tau

    def kappa_prime(self, s: ArrayLike, h: float = DERIVATIVE_STEP) -> NDArray[np.float64]:
        """<d2, d3> sign(<d2, d2>) / kappa from analytic jets, central differences of kappa otherwise."""
        if self.source is not JetSource.Analytic:
            return clamped_derivative(self.kappa, s, h, *self.domain)
        jet = self.jet(s)
        q = mink_inner(jet.d2, jet.d2)
        kappa = np.sqrt(np.abs(q))
        with np.errstate(divide='ignore', invalid='ignore'):
            kp = np.sign(q) * mink_inner(jet.d2, jet.d3) / kappa
        return np.where(kappa > self.kappa_floor, kp, 0.0)

    def tau_prime(self, s: ArrayLike, h: float = DERIVATIVE_STEP) -> NDArray[np.float64]:
        return clamped_derivative(self.tau, s, h, *self.domain)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'TimelikeCurve':
        s, y = read_curve_csv(path)
        spline = make_interp_spline(s, y, k=5)
        span = float(s[-1] - s[0])
        h1, h2, h3 = fd_step(1, span), fd_step(2, span), fd_step(3, span)

        def jet_fn(x: NDArray[np.float64]) -> JetTuple:
            return (
                spline(x),
                central_first(spline, x, h1),
                central_second(spline, x, h2),
                central_third(spline, x, h3),
            )

        logger.info('Loaded %d samples from %s', len(s), path)
        return cls(jet_fn, (s[0], s[-1]), JetSource.SampledFiniteDifference, name=Path(path).stem)

    def __repr__(self) -> str:
        return f'TimelikeCurve(name={self.name!r}, domain={self.domain!r}, source={self.source.name})'


def read_curve_csv(path: Union[str, Path]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    rows: list[list[float]] = []
    with Path(path).open(newline='') as fp:
        reader = csv.reader(fp)
        for line_number, row in enumerate(reader, start=1):
            if line_number == 1:
                header = [x.strip() for x in row]
                if header != ['s', 'y1', 'y2', 'y3']:
                    raise CurveParseError(f'expected header s,y1,y2,y3, got {",".join(header)!r}', line_number)
                continue
            if not row or all(not x.strip() for x in row):
                continue
            if len(row) != 4:
                raise CurveParseError(f'expected 4 fields, got {len(row)}', line_number)
            try:
                values = [float(x) for x in row]
            except ValueError as exc:
                raise CurveParseError(str(exc), line_number) from exc
            if not all(math.isfinite(x) for x in values):
                raise CurveParseError('non-finite value', line_number)
            if rows and values[0] <= rows[-1][0]:
                raise CurveParseError('s column must be strictly increasing', line_number)
            rows.append(values)

    if len(rows) < MIN_SAMPLES:
        raise CurveParseError(f'need at least {MIN_SAMPLES} samples, got {len(rows)}')

    data = np.array(rows)
    return data[:, 0], data[:, 1:]


def _stack(*cols: ArrayLike) -> NDArray[np.float64]:
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _line(s: NDArray[np.float64]) -> JetTuple:
    zero = np.zeros_like(s)
    one = np.ones_like(s)
    return _stack(s, zero, zero), _stack(one, zero, zero), _stack(zero, zero, zero), _stack(zero, zero, zero)


def _hyperbola(s: NDArray[np.float64]) -> JetTuple:
    sh, ch, zero = np.sinh(s), np.cosh(s), np.zeros_like(s)
    return _stack(sh, ch, zero), _stack(ch, sh, zero), _stack(sh, ch, zero), _stack(ch, sh, zero)


def _helix(a: float, b: float, omega: float) -> Callable[[NDArray[np.float64]], JetTuple]:
    def jet_fn(s: NDArray[np.float64]) -> JetTuple:
        c, sn = np.cos(omega * s), np.sin(omega * s)
        zero = np.zeros_like(s)
        return (
            _stack(a * s, b * c, b * sn),
            _stack(a + zero, -b * omega * sn, b * omega * c),
            _stack(zero, -b * omega**2 * c, -b * omega**2 * sn),
            _stack(zero, b * omega**3 * sn, -b * omega**3 * c),
        )

    return jet_fn


def _polynomial(u: NDArray[np.float64]) -> JetTuple:
    zero = np.zeros_like(u)
    return (
        _stack(2.0 * u, u**2, u**3 / 3.0),
        _stack(2.0 + zero, 2.0 * u, u**2),
        _stack(zero, 2.0 + zero, 2.0 * u),
        _stack(zero, zero, 2.0 + zero),
    )


DEFAULT_DOMAINS = {
    CurvePreset.TimelikeLine: (-1.0, 1.0),
    CurvePreset.TimelikeHyperbola: (-1.0, 1.0),
    CurvePreset.TimelikeHelix: (0.0, 2.0 * math.pi),
    CurvePreset.PolynomialTimelike: (-0.5, 0.5),
}
DEFAULT_HELIX = (math.sqrt(2.0), 1.0, 1.0)


def make_analytic_curve(
    preset: Union[CurvePreset, str],
    params: Sequence[float] = (),
    domain: Optional[tuple[float, float]] = None,
    unit_speed: bool = True,
) -> TimelikeCurve:
    preset = CurvePreset(preset)
    params = [float(x) for x in params]
    domain = DEFAULT_DOMAINS[preset] if domain is None else domain

    if preset is CurvePreset.TimelikeHelix:
        if not params:
            params = list(DEFAULT_HELIX)
        if len(params) != 3:
            raise ParamDomain(f'helix takes (a, b, omega), got {params!r}')
        a, b, omega = params
        defect = a**2 - b**2 * omega**2
        if unit_speed and not math.isclose(defect, 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise ParamDomain(f'unit-speed helix needs a^2 - b^2 omega^2 = 1, got {defect:.12g}')
        if defect <= 0:
            raise ParamDomain(f'helix with a^2 - b^2 omega^2 = {defect:.12g} is not timelike')
        jet_fn = _helix(a, b, omega)
        name = f'helix(a={a:.9g},b={b:.9g},omega={omega:.9g})'
    else:
        if params:
            raise ParamDomain(f'{preset.value} takes no parameters, got {params!r}')
        jet_fn = {
            CurvePreset.TimelikeLine: _line,
            CurvePreset.TimelikeHyperbola: _hyperbola,
            CurvePreset.PolynomialTimelike: _polynomial,
        }[preset]
        name = preset.value
        if preset is CurvePreset.PolynomialTimelike and max(abs(x) for x in domain) > 0.5:
            raise ParamDomain('polynomial curve is only defined on |u| <= 0.5')

    curve = TimelikeCurve(jet_fn, domain, JetSource.Analytic, name=name)
    logger.debug('make_analytic_curve(%s, %r) -> %r', preset.value, params, curve)
    return curve


class ArclengthMap:
    """s(u) = integral of the Lorentzian speed, and its inverse by Newton."""

    GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)

    def __init__(self, curve: TimelikeCurve, quad_steps: int) -> None:
        self.curve = curve
        self.nodes = np.linspace(curve.domain[0], curve.domain[1], quad_steps + 1)

        samples = np.concatenate((self.nodes, self._gauss_points(self.nodes[:-1], self.nodes[1:]).ravel()))
        d1 = curve.jet(samples).d1
        speed2 = -mink_inner(d1, d1)
        # same lightlike band as causal_character
        if np.any(speed2 <= curve.causal_tol * (1.0 + np.sum(d1**2, axis=-1))):
            bad = samples[int(np.argmin(speed2))]
            raise NotTimelike(f'{curve.name}: velocity is not timelike at parameter {bad:.9g}')

        panels = self._integrate(self.nodes[:-1], self.nodes[1:])
        self.cumulative = np.concatenate(([0.0], np.cumsum(panels)))
        self.length = float(self.cumulative[-1])

    def _gauss_points(self, a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        half = (b - a) / 2.0
        mid = (a + b) / 2.0
        return mid[..., None] + half[..., None] * self.GAUSS_NODES

    def _integrate(self, a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        half = (b - a) / 2.0
        return half * np.sum(self.GAUSS_WEIGHTS * self.speed(self._gauss_points(a, b)), axis=-1)

    def speed(self, u: ArrayLike) -> NDArray[np.float64]:
        d1 = self.curve.jet(u).d1
        return np.sqrt(np.abs(mink_inner(d1, d1)))

    def arclength(self, u: ArrayLike) -> NDArray[np.float64]:
        u = np.asarray(u, dtype=float)
        k = np.clip(np.searchsorted(self.nodes, u, side='right') - 1, 0, len(self.nodes) - 2)
        return self.cumulative[k] + self._integrate(self.nodes[k], u)

    def inverse(self, s: ArrayLike) -> NDArray[np.float64]:
        s = np.asarray(s, dtype=float)
        guess = np.interp(s, self.cumulative, self.nodes)
        return np.asarray(newton(lambda u: self.arclength(u) - s, guess, fprime=self.speed, tol=1e-14, maxiter=50))


def reparametrize_unit_speed(curve: TimelikeCurve, quad_steps: int = 64) -> TimelikeCurve:
    if quad_steps < 16:
        raise ParamDomain('quad_steps must be at least 16')

    amap = ArclengthMap(curve, quad_steps)

    def jet_fn(s: NDArray[np.float64]) -> JetTuple:
        u = amap.inverse(s)
        jet = curve.jet(u)
        g1, g2, g3 = jet.d1, jet.d2, jet.d3
        v = np.sqrt(np.abs(mink_inner(g1, g1)))
        v_u = -mink_inner(g1, g2) / v
        v_uu = (-mink_inner(g2, g2) - mink_inner(g1, g3) - v_u**2) / v
        v, v_u, v_uu = v[..., None], v_u[..., None], v_uu[..., None]
        d1 = g1 / v
        d2 = g2 / v**2 - g1 * v_u / v**3
        d3 = g3 / v**3 - 3.0 * g2 * v_u / v**4 - g1 * v_uu / v**4 + 3.0 * g1 * v_u**2 / v**5
        return jet.position, d1, d2, d3

    logger.info('Reparametrized %s by arclength, length %.12g', curve.name, amap.length)
    unit = TimelikeCurve(jet_fn, (0.0, amap.length), curve.source, name=f'{curve.name}~arclength')
    unit.unit_speed_tol = curve.unit_speed_tol
    unit.kappa_floor = curve.kappa_floor
    unit.causal_tol = curve.causal_tol
    return unit


def frenet_frame(curve: TimelikeCurve, s: ArrayLike) -> FrenetData:
    if not curve.is_unit_speed():
        raise NotUnitSpeed(
            f'{curve.name} is not unit speed (defect {curve.speed_defect():.3e}); reparametrize it first'
        )

    jet = curve.jet(s)
    kappa = mink_norm(jet.d2)
    low = kappa <= curve.kappa_floor
    if np.any(low):
        where = float(np.asarray(s, dtype=float)[low].flat[0]) if np.ndim(s) else float(s)
        raise VanishingCurvature(f'{curve.name}: curvature vanishes at s={where:.9g}', where)

    t = jet.d1
    n = jet.d2 / kappa[..., None]
    # t^n is the orientation that makes x_t^x_theta point along -cos n - sin b
    b = lorentz_cross(t, n)
    tau = mink_inner(jet.d3, b) / kappa
    return FrenetData(t, n, b, kappa, tau)


def frenet_residuals(curve: TimelikeCurve, s: ArrayLike, h: float = DERIVATIVE_STEP) -> dict[str, float]:
    """Largest Euclidean residuals of t' = k n, n' = k t + tau b, b' = -tau n."""
    s = np.asarray(s, dtype=float)
    frame = frenet_frame(curve, s)
    ahead = frenet_frame(curve, s + h)
    behind = frenet_frame(curve, s - h)
    dt = (ahead.t - behind.t) / (2.0 * h)
    dn = (ahead.n - behind.n) / (2.0 * h)
    db = (ahead.b - behind.b) / (2.0 * h)
    k, tau = frame.kappa[..., None], frame.tau[..., None]

    def worst(v: NDArray[np.float64]) -> float:
        return float(np.max(np.linalg.norm(v, axis=-1)))

    return {
        'tangent': worst(dt - k * frame.n),
        'normal': worst(dn - (k * frame.t + tau * frame.b)),
        'binormal': worst(db + tau * frame.n),
        'tau_crosscheck': float(np.max(np.abs(frame.tau + mink_inner(db, frame.n)))),
    }


def curvature_profile(curve: TimelikeCurve, grid: ArrayLike) -> list[tuple[float, float, float, float]]:
    grid = np.asarray(grid, dtype=float)
    frame = frenet_frame(curve, grid)
    kappa_prime = curve.kappa_prime(grid)
    return [
        (float(s), float(k), float(tau), float(kp))
        for s, k, tau, kp in zip(grid, frame.kappa, frame.tau, kappa_prime)
    ]
