#!/usr/bin/env python
"""Jacobi determinants, Weingarten classification and linear relations on tubes."""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space

from TimelikeTubes.config import DEFAULT_GRID, Tolerances
from TimelikeTubes.curve import TimelikeCurve, make_analytic_curve, reparametrize_unit_speed
from TimelikeTubes.enums import CurvaturePair, CurvePreset, PartialSource, Theorem, TrigBasis
from TimelikeTubes.errors import (
    EmptyFixtureSet,
    GridMismatch,
    IllConditionedFit,
    InsufficientSamples,
    InsufficientValidGrid,
    ParamDomain,
    TrivialRelation,
)
from TimelikeTubes.numdiff import central_first
from TimelikeTubes.report import Section, VerificationReport
from TimelikeTubes.tube import (
    ParallelFrame,
    TubeGrid,
    TubeSurface,
    closed_form_H,
    closed_form_K,
    closed_form_KII,
    curvature_partials,
    make_tube,
)

logger = logging.getLogger('weingarten')

Array = NDArray[np.float64]

MAX_TRIG_DEGREE = 6
CONDITION_LIMIT = 1e8
FD_PARTIAL_STEP = 1e-4
LATTICE = range(-2, 3)
CYLINDER_AC_PAIRS = ((5.0, 1.0), (1.0, 0.5), (-3.0, 2.0), (0.0, -1.0), (2.5, 0.25))


class CurvatureField:
    """A scalar on a (t, theta) grid with its partials and a validity mask."""

    def __init__(  # noqa: PLR0913
        self,
        name: str,
        t: ArrayLike,
        theta: ArrayLike,
        values: ArrayLike,
        valid: Optional[ArrayLike] = None,
        d_t: Optional[ArrayLike] = None,
        d_theta: Optional[ArrayLike] = None,
        source: PartialSource = PartialSource.ClosedForm,
    ) -> None:
        self.name = name
        self.t = np.asarray(t, dtype=float)
        self.theta = np.asarray(theta, dtype=float)
        if np.any(np.diff(self.t) <= 0) or np.any(np.diff(self.theta) <= 0):
            raise GridMismatch(f'{name}: grid axes must be strictly increasing')
        shape = (self.t.size, self.theta.size)
        self.values = np.broadcast_to(np.asarray(values, dtype=float), shape)
        mask = np.ones(shape, dtype=bool) if valid is None else np.broadcast_to(np.asarray(valid, dtype=bool), shape)
        self.valid = mask & np.isfinite(self.values)
        self.d_t = None if d_t is None else np.broadcast_to(np.asarray(d_t, dtype=float), shape)
        self.d_theta = None if d_theta is None else np.broadcast_to(np.asarray(d_theta, dtype=float), shape)
        self.source = source

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def valid_fraction(self) -> float:
        return float(self.valid.mean())

    @property
    def has_partials(self) -> bool:
        return self.d_t is not None and self.d_theta is not None

    def same_grid(self, other: 'CurvatureField') -> bool:
        return (
            self.t.shape == other.t.shape
            and self.theta.shape == other.theta.shape
            and bool(np.array_equal(self.t, other.t))
            and bool(np.array_equal(self.theta, other.theta))
        )

    def masked(self) -> Array:
        return np.where(self.valid, self.values, np.nan)

    def scaled(self, factor: float) -> 'CurvatureField':
        return CurvatureField(
            self.name,
            self.t,
            self.theta,
            self.values * factor,
            self.valid,
            None if self.d_t is None else self.d_t * factor,
            None if self.d_theta is None else self.d_theta * factor,
            self.source,
        )

    def __repr__(self) -> str:
        return f'CurvatureField(name={self.name!r}, shape={self.shape}, valid={self.valid_fraction:.3f})'


class JacobiField(CurvatureField):
    """Phi(X, Y) = X_t Y_theta - X_theta Y_t with the gradient-norm product as scale."""

    def __init__(self, X: CurvatureField, Y: CurvatureField) -> None:
        valid = X.valid & Y.valid & np.isfinite(X.d_t * Y.d_theta) & np.isfinite(X.d_theta * Y.d_t)
        with np.errstate(invalid='ignore'):
            phi = X.d_t * Y.d_theta - X.d_theta * Y.d_t
            scale = np.hypot(X.d_t, X.d_theta) * np.hypot(Y.d_t, Y.d_theta)
        super().__init__(f'Phi({X.name},{Y.name})', X.t, X.theta, np.where(valid, phi, np.nan), valid, source=X.source)
        self.scale = np.where(valid, scale, np.nan)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values[self.valid]))) if self.valid.any() else 0.0

    def normalizer(self, floor: float) -> float:
        return max(float(np.max(self.scale[self.valid])) if self.valid.any() else 0.0, floor)

    def normalized_max(self, floor: float) -> float:
        return self.max_abs() / self.normalizer(floor)


def jacobi_field(X: CurvatureField, Y: CurvatureField) -> JacobiField:
    if not X.same_grid(Y):
        raise GridMismatch(f'{X.name} and {Y.name} live on different grids')
    if not (X.has_partials and Y.has_partials):
        raise GridMismatch('both fields need t and theta partials')
    return JacobiField(X, Y)


def _difference_partials(fn: Any, grid: TubeGrid, tube: TubeSurface) -> tuple[Array, Array, Array]:
    """5-point partials of a closed-form field; rows whose stencil leaves the curve domain are masked."""
    ht = FD_PARTIAL_STEP * (tube.domain[0][1] - tube.domain[0][0])
    hth = FD_PARTIAL_STEP * 2.0 * math.pi
    T, TH = grid.T, grid.THETA
    with np.errstate(divide='ignore', invalid='ignore'):
        d_t = central_first(lambda x: fn(x, TH), T, ht)
        d_theta = central_first(lambda x: fn(T, x), TH, hth)
    lo, hi = tube.domain[0]
    rows = (grid.t - 2.0 * ht >= lo) & (grid.t + 2.0 * ht <= hi)
    return d_t, d_theta, np.broadcast_to(rows[:, None], grid.shape)


def tube_fields(
    tube: TubeSurface,
    grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID,
    source: PartialSource = PartialSource.ClosedForm,
    tolerances: Optional[Tolerances] = None,
) -> dict[str, CurvatureField]:
    """K, closed-form-sign H and K_II on the grid, with partials from `source`."""
    tol = tolerances or Tolerances()
    grid = grid if isinstance(grid, TubeGrid) else tube.grid(*grid)
    T, TH = grid.T, grid.THETA

    K = closed_form_K(tube, T, TH)
    H = closed_form_H(tube, T, TH).value
    KII = closed_form_KII(tube, T, TH, masked=True, tol=tol.degeneracy_tol)
    kii_valid = np.isfinite(KII)

    if source is PartialSource.ClosedForm:
        p = curvature_partials(tube, T, TH, tol.degeneracy_tol)
        partials = {'K': (p.K_t, p.K_theta), 'H': (p.H_t, p.H_theta), 'KII': (p.KII_t, p.KII_theta)}
        rows = np.ones(grid.shape, dtype=bool)
    else:
        partials = {}
        for name, fn in (
            ('K', lambda t, th: closed_form_K(tube, t, th)),
            ('H', lambda t, th: closed_form_H(tube, t, th).value),
            ('KII', lambda t, th: closed_form_KII(tube, t, th, masked=True, tol=tol.degeneracy_tol)),
        ):
            d_t, d_theta, rows = _difference_partials(fn, grid, tube)
            partials[name] = (d_t, d_theta)

    fields = {
        'K': CurvatureField('K', grid.t, grid.theta, K, rows, *partials['K'], source),
        'H': CurvatureField('H', grid.t, grid.theta, H, rows, *partials['H'], source),
        'KII': CurvatureField('KII', grid.t, grid.theta, KII, rows & kii_valid, *partials['KII'], source),
    }
    logger.debug('tube_fields(%s, %r): KII valid on %.3f of the grid', tube.name, grid, fields['KII'].valid_fraction)
    return fields


class WeingartenReport:
    def __init__(  # noqa: PLR0913
        self,
        pair: CurvaturePair,
        max_phi: float,
        scale: float,
        tolerance: float,
        kappa_prime_max: float,
        source: PartialSource,
        valid_fraction: float,
    ) -> None:
        self.pair = pair
        self.max_phi = max_phi
        self.scale = scale
        self.normalized = max_phi / scale
        self.tolerance = tolerance
        self.verdict = self.normalized <= tolerance
        self.kappa_prime_max = kappa_prime_max
        self.source = source
        self.valid_fraction = valid_fraction

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'pair': self.pair.label,
            'max_phi': self.max_phi,
            'scale': self.scale,
            'normalized': self.normalized,
            'verdict': self.verdict,
            'kappa_prime_max': self.kappa_prime_max,
        }.items()

    def __repr__(self) -> str:
        return (
            f'WeingartenReport(pair={self.pair.label}, normalized={self.normalized:.3e}, '
            f'verdict={self.verdict}, kappa_prime_max={self.kappa_prime_max:.3e})'
        )


def kappa_prime_max(tube: TubeSurface, grid: TubeGrid) -> float:
    return float(np.max(np.abs(tube.kappa_prime(grid.t))))


def classify_weingarten(
    tube: TubeSurface,
    grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID,
    source: PartialSource = PartialSource.ClosedForm,
    tolerances: Optional[Tolerances] = None,
    fields: Optional[dict[str, CurvatureField]] = None,
) -> list[WeingartenReport]:
    tol = tolerances or Tolerances()
    grid = grid if isinstance(grid, TubeGrid) else tube.grid(*grid)
    fields = fields if fields is not None else tube_fields(tube, grid, source, tol)
    coverage = fields['KII'].valid_fraction
    if coverage < tol.min_valid_fraction:
        raise InsufficientValidGrid(
            f'{tube.name}: second form is non-degenerate on {coverage:.1%} of the grid, '
            f'need {tol.min_valid_fraction:.0%}'
        )

    threshold = tol.jacobi_tol if source is PartialSource.ClosedForm else tol.jacobi_fd_tol
    kp = kappa_prime_max(tube, grid)
    reports = []
    for pair in CurvaturePair:
        X, Y = (fields[name] for name in pair.value)
        phi = jacobi_field(X, Y)
        reports.append(
            WeingartenReport(
                pair, phi.max_abs(), phi.normalizer(tol.scale_floor), threshold, kp, source, phi.valid_fraction
            )
        )
    logger.info('classify_weingarten(%s): %s', tube.name, ', '.join(repr(r) for r in reports))
    return reports


class TrigFit:
    def __init__(self, coefficients: Array, residual: float, relative_residual: float, condition: float) -> None:
        self.coefficients = coefficients
        self.residual = residual
        self.relative_residual = relative_residual
        self.condition = condition

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'coefficients': self.coefficients.tolist(),
            'residual': self.residual,
            'relative_residual': self.relative_residual,
            'condition': self.condition,
        }.items()

    def __repr__(self) -> str:
        return f'TrigFit(coefficients={self.coefficients!r}, residual={self.residual:.3e})'


def trig_design(theta: ArrayLike, basis: TrigBasis, k: int) -> Array:
    theta = np.asarray(theta, dtype=float)
    columns = np.cos(theta)[:, None] ** np.arange(k + 1)
    if basis is TrigBasis.CosPowersSin:
        columns = columns * np.sin(theta)[:, None]
    return columns


def trig_coefficients(theta: ArrayLike, values: ArrayLike, basis: TrigBasis, k: int) -> TrigFit:
    """Least-squares coefficients of `values` in {cos^j} or {cos^j sin}, j = 0..k."""
    theta = np.ravel(np.asarray(theta, dtype=float))
    values = np.ravel(np.asarray(values, dtype=float))
    if not 0 <= k <= MAX_TRIG_DEGREE:
        raise ParamDomain(f'degree must be between 0 and {MAX_TRIG_DEGREE}, got {k}')
    if theta.size != values.size:
        raise GridMismatch('theta and values differ in length')
    if theta.size < 2 * (k + 1):
        raise InsufficientSamples(f'need at least {2 * (k + 1)} samples for degree {k}, got {theta.size}')

    A = trig_design(theta, basis, k)
    condition = float(np.linalg.cond(A))
    if not math.isfinite(condition) or condition > CONDITION_LIMIT:
        raise IllConditionedFit(condition)

    coefficients, *_ = np.linalg.lstsq(A, values, rcond=None)
    residual = float(np.sqrt(np.mean((A @ coefficients - values) ** 2)))
    size = float(np.sqrt(np.mean(values**2)))
    return TrigFit(coefficients, residual, residual / max(size, 1e-300), condition)


def jacobi_polynomial_coefficients(
    tube: TubeSurface, grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID, tolerances: Optional[Tolerances] = None
) -> tuple[Array, Array]:
    """Per-row fit of Phi(K, K_II) 2 r^2 alpha^6 cos^2 in {sin, cos sin, cos^2 sin}.

    Returns (fitted, expected) with shape (nt, 3); expected is
    (kappa', 2 r kappa kappa', r^2 kappa^2 kappa').
    """
    grid = grid if isinstance(grid, TubeGrid) else tube.grid(*grid)
    fields = tube_fields(tube, grid, PartialSource.ClosedForm, tolerances)
    phi = jacobi_field(fields['K'], fields['KII'])
    r = tube.r
    kappa = tube.frenet(grid.t).kappa
    kp = tube.kappa_prime(grid.t)
    alpha = 1.0 + r * kappa[:, None] * np.cos(grid.THETA)
    scaled = phi.values * 2.0 * r**2 * alpha**6 * np.cos(grid.THETA) ** 2

    fitted = np.empty((grid.nt, 3))
    for row in range(grid.nt):
        ok = phi.valid[row]
        fitted[row] = trig_coefficients(grid.theta[ok], scaled[row, ok], TrigBasis.CosPowersSin, 2).coefficients
    expected = np.stack((kp, 2.0 * r * kappa * kp, r**2 * kappa**2 * kp), axis=-1)
    return fitted, expected


class LinearResult:
    def __init__(self, residual: CurvatureField, max_residual: float, normalized: float, verdict: bool) -> None:
        self.residual = residual
        self.max_residual = max_residual
        self.normalized = normalized
        self.verdict = verdict

    def __repr__(self) -> str:
        return f'LinearResult(normalized={self.normalized:.3e}, verdict={self.verdict})'


def _pair_values(fields: dict[str, CurvatureField], pair: CurvaturePair, h_sign: str) -> tuple[Array, Array, Array]:
    X, Y = (fields[name] for name in pair.value)
    valid = X.valid & Y.valid
    xv, yv = X.values, Y.values
    if h_sign == 'oracle':
        xv = -xv if pair.value[0] == 'H' else xv
        yv = -yv if pair.value[1] == 'H' else yv
    return xv, yv, valid


def linear_residual_from_fields(  # noqa: PLR0913
    fields: dict[str, CurvatureField],
    pair: CurvaturePair,
    a: float,
    b: float,
    c: float,
    tolerances: Optional[Tolerances] = None,
    h_sign: str = 'closed',
) -> LinearResult:
    tol = tolerances or Tolerances()
    if a == 0 and b == 0 and c == 0:
        raise TrivialRelation('(a, b, c) = (0, 0, 0) is not a relation')
    if h_sign not in ('closed', 'oracle'):
        raise ParamDomain(f"h_sign must be 'closed' or 'oracle', got {h_sign!r}")

    xv, yv, valid = _pair_values(fields, pair, h_sign)
    if not valid.any():
        raise InsufficientValidGrid(f'no valid points for {pair.label}')
    with np.errstate(invalid='ignore'):
        residual = np.abs(a * xv + b * yv - c)
    X = fields[pair.value[0]]
    field = CurvatureField(f'{a:g}*{pair.value[0]}+{b:g}*{pair.value[1]}-{c:g}', X.t, X.theta, residual, valid)
    worst = float(np.max(residual[valid]))
    scale = abs(a) * float(np.max(np.abs(xv[valid]))) + abs(b) * float(np.max(np.abs(yv[valid]))) + abs(c)
    normalized = worst / max(scale, tol.scale_floor)
    return LinearResult(field, worst, normalized, normalized <= tol.lw_tol)


def linear_weingarten_residual(  # noqa: PLR0913
    tube: TubeSurface,
    pair: CurvaturePair,
    a: float,
    b: float,
    c: float,
    grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID,
    tolerances: Optional[Tolerances] = None,
    h_sign: str = 'closed',
) -> LinearResult:
    """|a X + b Y - c| on the grid; verdict is max normalized residual <= lw_tol."""
    if a == 0 and b == 0 and c == 0:
        raise TrivialRelation('(a, b, c) = (0, 0, 0) is not a relation')
    fields = tube_fields(tube, grid, PartialSource.ClosedForm, tolerances)
    return linear_residual_from_fields(fields, pair, a, b, c, tolerances, h_sign)


# cos-polynomial degree after clearing denominators, and the multiplier that clears them
RELATION_DEGREE = {CurvaturePair.K_H: 1, CurvaturePair.K_KII: 4, CurvaturePair.H_KII: 4}


def _clearing_factor(pair: CurvaturePair, r: float, kappa: Array, c: Array) -> Array:
    alpha = 1.0 + r * kappa * c
    if pair is CurvaturePair.K_H:
        return 2.0 * r * alpha
    return 4.0 * r * alpha**2 * c**2


def linear_relation_space(
    tube: TubeSurface,
    pair: CurvaturePair,
    grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID,
    tolerances: Optional[Tolerances] = None,
    rcond: float = 1e-9,
) -> Array:
    """All (a, b, c) with a X + b Y = c on the tube, as orthonormal columns.

    Each row of the grid contributes the cos-power coefficients of
    w X, w Y and -w, where w clears the denominators; the relation space is
    the null space of the stacked coefficient matrix.
    """
    grid = grid if isinstance(grid, TubeGrid) else tube.grid(*grid)
    fields = tube_fields(tube, grid, PartialSource.ClosedForm, tolerances)
    xv, yv, valid = _pair_values(fields, pair, 'closed')
    kappa = tube.frenet(grid.t).kappa
    k = RELATION_DEGREE[pair]

    blocks = []
    for row in range(grid.nt):
        ok = valid[row]
        if ok.sum() < 2 * (k + 1):
            continue
        theta = grid.theta[ok]
        w = _clearing_factor(pair, tube.r, kappa[row], np.cos(theta))
        columns = [
            trig_coefficients(theta, w * series, TrigBasis.CosPowers, k).coefficients
            for series in (xv[row, ok], yv[row, ok], -np.ones(ok.sum()))
        ]
        blocks.append(np.stack(columns, axis=-1))
    if not blocks:
        raise InsufficientValidGrid(f'{tube.name}: no row has enough valid samples for {pair.label}')

    M = np.concatenate(blocks)
    M = M / max(float(np.max(np.abs(M))), 1e-300)
    return null_space(M, rcond=rcond)


class BestFit:
    def __init__(self, coefficients: Array, normalized: float, singular_values: Array) -> None:
        self.coefficients = coefficients
        self.normalized = normalized
        self.singular_values = singular_values

    def __repr__(self) -> str:
        return f'BestFit(coefficients={self.coefficients!r}, normalized={self.normalized:.3e})'


def best_linear_fit(
    fields: dict[str, CurvatureField], pair: CurvaturePair, tolerances: Optional[Tolerances] = None
) -> BestFit:
    """(a, b, c) minimizing ||a X + b Y - c|| over unit vectors after column scaling."""
    tol = tolerances or Tolerances()
    xv, yv, valid = _pair_values(fields, pair, 'closed')
    A = np.stack((xv[valid], yv[valid], -np.ones(int(valid.sum()))), axis=-1)
    norms = np.maximum(np.linalg.norm(A, axis=0), tol.scale_floor)
    _, sigma, vt = np.linalg.svd(A / norms, full_matrices=False)
    coefficients = vt[-1] / norms
    coefficients = coefficients / np.linalg.norm(coefficients)
    a, b, c = (float(x) for x in coefficients)
    result = linear_residual_from_fields(fields, pair, a, b, c, tol)
    return BestFit(coefficients, result.normalized, sigma)


class Fixture:
    def __init__(
        self,
        name: str,
        curve: TimelikeCurve,
        frame: Optional[ParallelFrame] = None,
        radii: Optional[Sequence[float]] = None,
    ) -> None:
        self.name = name
        self.curve = curve
        self.frame = frame
        self.radii = tuple(radii) if radii is not None else None

    @property
    def is_cylinder(self) -> bool:
        return self.frame is not None

    def __repr__(self) -> str:
        return f'Fixture(name={self.name!r}, curve={self.curve.name!r}, radii={self.radii!r})'


DEFAULT_RADII = (0.1, 0.3, 0.5)


def default_fixtures() -> list[Fixture]:
    line = make_analytic_curve(CurvePreset.TimelikeLine)
    polynomial = make_analytic_curve(CurvePreset.PolynomialTimelike, unit_speed=False)
    return [
        Fixture('helix', make_analytic_curve(CurvePreset.TimelikeHelix)),
        Fixture('hyperbola', make_analytic_curve(CurvePreset.TimelikeHyperbola)),
        Fixture('polynomial', reparametrize_unit_speed(polynomial)),
        Fixture('cylinder', line, ParallelFrame.along(line), radii=(1.0,)),
    ]


class TubeSummary:
    """Everything the suite needs from one (fixture, radius) tube."""

    def __init__(self, fixture: Fixture, tube: TubeSurface, grid: TubeGrid, tolerances: Tolerances) -> None:
        self.fixture = fixture
        self.tube = tube
        self.grid = grid
        self.label = f'{fixture.name} r={tube.r:g}'
        self.fields = tube_fields(tube, grid, PartialSource.ClosedForm, tolerances)
        self.kappa_prime_max = kappa_prime_max(tube, grid)
        self.kii_coverage = self.fields['KII'].valid_fraction
        self.phi = {
            pair: jacobi_field(*(self.fields[name] for name in pair.value)).normalized_max(tolerances.scale_floor)
            for pair in CurvaturePair
            if pair is CurvaturePair.K_H or self.kii_coverage >= tolerances.min_valid_fraction
        }


def _summarize(fixture: Fixture, r: float, grid: tuple[int, int], tol: Tolerances) -> TubeSummary:
    tube = make_tube(fixture.curve, r, fixture.frame)
    return TubeSummary(fixture, tube, tube.grid(*grid), tol)


def _weingarten_kh(section: Section, summaries: list[TubeSummary], tol: Tolerances) -> None:
    for s in summaries:
        value = s.phi[CurvaturePair.K_H]
        section.add(s.label, value <= tol.weingarten_tol, normalized_phi=value)


def _weingarten_kii(section: Section, summaries: list[TubeSummary], tol: Tolerances) -> None:
    branches = set()
    for s in summaries:
        if s.kii_coverage < tol.min_valid_fraction:
            section.add(s.label, None, 'second form degenerate', kii_coverage=s.kii_coverage)
            continue
        constant = s.kappa_prime_max <= tol.kappa_prime_tol
        branch = 'direct' if constant else 'contrapositive'
        branches.add(branch)
        for pair in (CurvaturePair.K_KII, CurvaturePair.H_KII):
            value = s.phi[pair]
            if constant:
                ok = value <= tol.jacobi_tol
            else:
                ok = value >= tol.contrapositive_factor * tol.jacobi_tol
            section.add(f'{s.label} {pair.label}', ok, branch, normalized_phi=value, kappa_prime_max=s.kappa_prime_max)

        fitted, expected = jacobi_polynomial_coefficients(s.tube, s.grid, tol)
        scale = max(1.0, float(np.max(np.abs(expected))))
        error = float(np.max(np.abs(fitted - expected))) / scale
        section.add(f'{s.label} sin-coefficients', error <= tol.weingarten_tol, coefficient_error=error)

    for branch in ('direct', 'contrapositive'):
        if branch in branches:
            section.note(f'{branch} branch exercised')
        else:
            section.note(f'{branch} branch not exercised by this fixture set')


def _linear_kh(section: Section, summaries: list[TubeSummary], tol: Tolerances) -> None:
    cylinders = [s for s in summaries if s.fixture.is_cylinder]
    if not cylinders:
        section.add('cylinder', None, 'no straight-line fixture')
    for s in cylinders:
        r = s.tube.r
        worst = 0.0
        for a, c in CYLINDER_AC_PAIRS:
            result = linear_residual_from_fields(s.fields, CurvaturePair.K_H, a, -2.0 * r * c, c, tol)
            worst = max(worst, result.max_residual)
        section.add(f'{s.label} b=-2rc', worst <= 1e-12, max_residual=worst)

        a, c = CYLINDER_AC_PAIRS[0]
        K, H = s.fields['K'].values, s.fields['H'].values
        coefficients = [
            trig_coefficients(s.grid.theta, a * K[row] + (-2.0 * r * c) * H[row] - c, TrigBasis.CosPowers, 2)
            .coefficients
            for row in range(s.grid.nt)
        ]
        largest = float(np.max(np.abs(coefficients)))
        section.add(f'{s.label} residual coefficients', largest <= tol.lw_tol, max_coefficient=largest)

        space = linear_relation_space(s.tube, CurvaturePair.K_H, s.grid, tol)
        defect = float(np.max(np.abs(space[1] + 2.0 * r * space[2]))) if space.size else math.inf
        section.add(
            f'{s.label} recovered b=-2rc', space.shape[1] >= 1 and defect <= 1e-8, dimension=space.shape[1], defect=defect
        )

    for s in summaries:
        if s.fixture.is_cylinder:
            continue
        space = linear_relation_space(s.tube, CurvaturePair.K_H, s.grid, tol)
        if space.shape[1] != 1:
            section.add(f'{s.label} relation space', False, dimension=space.shape[1])
            continue
        a, b, c = space[:, 0] / space[2, 0]
        r = s.tube.r
        section.add(
            f'{s.label} relation -r^2 K - 2 r H = 1',
            abs(a + r**2) <= 1e-8 and abs(b + 2.0 * r) <= 1e-8,
            a=a,
            b=b,
        )
        section.find(
            f'{s.label} hypothesis',
            'the relation found satisfies a + b r != 0 but lies on a + c r^2 = 0',
            a_plus_br=a + b * r,
            a_plus_cr2=a + c * r**2,
        )


def _no_linear_kii(section: Section, summaries: list[TubeSummary], tol: Tolerances) -> None:
    for s in summaries:
        if s.kii_coverage < tol.min_valid_fraction:
            section.add(s.label, None, 'second form degenerate', kii_coverage=s.kii_coverage)
            continue
        for pair in (CurvaturePair.K_KII, CurvaturePair.H_KII):
            passing = 0
            smallest = math.inf
            for a, b, c in itertools.product(LATTICE, LATTICE, LATTICE):
                if b == 0:
                    continue
                result = linear_residual_from_fields(s.fields, pair, a, b, c, tol)
                passing += result.verdict
                smallest = min(smallest, result.normalized)
            section.add(f'{s.label} {pair.label} lattice', passing == 0, min_normalized=smallest)

            fit = best_linear_fit(s.fields, pair, tol)
            section.add(
                f'{s.label} {pair.label} best fit',
                fit.normalized >= tol.contrapositive_factor * tol.lw_tol,
                normalized=fit.normalized,
            )

            space = linear_relation_space(s.tube, pair, s.grid, tol)
            section.add(f'{s.label} {pair.label} relation space', space.shape[1] == 0, dimension=space.shape[1])


def theorem_suite(
    fixtures: Sequence[Fixture],
    radii: Sequence[float] = DEFAULT_RADII,
    grid: tuple[int, int] = DEFAULT_GRID,
    tolerances: Optional[Tolerances] = None,
    workers: int = 1,
) -> VerificationReport:
    if not fixtures:
        raise EmptyFixtureSet('theorem_suite needs at least one fixture')
    tol = tolerances or Tolerances()

    jobs = [(f, r) for f in fixtures for r in (f.radii if f.radii is not None else radii)]
    logger.info('theorem_suite: %d tubes on a %dx%d grid, %d worker(s)', len(jobs), *grid, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(lambda job: _summarize(*job, grid, tol), jobs))
    else:
        summaries = [_summarize(f, r, grid, tol) for f, r in jobs]

    report = VerificationReport('Weingarten theorems for timelike tubes')
    steps = (
        (Theorem.WeingartenKH, 'Phi(K,H) vanishes on every tube', _weingarten_kh),
        (Theorem.WeingartenKII, 'Phi(K,KII), Phi(H,KII) vanish iff kappa is constant', _weingarten_kii),
        (Theorem.LinearKH, 'cylinders satisfy aK + bH = c on b = -2rc', _linear_kh),
        (Theorem.NoLinearKII, 'no aX + bKII = c with b != 0', _no_linear_kii),
    )
    for theorem, title, step in steps:
        step(report.section(theorem.value, title), summaries, tol)
    return report
