#!/usr/bin/env python
"""Closed-form tube geometry checked against the definitional machinery of `surface`."""

import logging
import math
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import NDArray

from TimelikeTubes.config import DEFAULT_GRID, Tolerances
from TimelikeTubes.curve import frenet_residuals
from TimelikeTubes.enums import CausalClass
from TimelikeTubes.minkowski import causal_character
from TimelikeTubes.numdiff import central_first, max_relative_error
from TimelikeTubes.report import Section, VerificationReport
from TimelikeTubes.surface import (
    fundamental_forms,
    gaussian_curvature,
    mean_curvature,
    second_gaussian_curvature_field,
    unit_normal,
)
from TimelikeTubes.tube import (
    TubeGrid,
    TubeSurface,
    closed_form_forms,
    closed_form_H,
    closed_form_K,
    closed_form_KII,
    curvature_partials,
)

logger = logging.getLogger('verification')

Array = NDArray[np.float64]

PARTIAL_STEP = 1e-5
FLOOR = 1e-9


def _interior(grid: TubeGrid) -> tuple[Array, Array]:
    """Grid without its first and last t rows."""
    return grid.t[1:-1, None], grid.THETA


def _rel(actual: Array, expected: Array, mask: Optional[NDArray[np.bool_]] = None, floor: float = FLOOR) -> float:
    actual = np.broadcast_to(actual, np.broadcast_shapes(np.shape(actual), np.shape(expected)))
    expected = np.broadcast_to(expected, actual.shape)
    if mask is not None:
        actual, expected = actual[mask], expected[mask]
    return max_relative_error(actual, expected, floor)


def _frame_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    if tube.is_cylinder:
        section.add('frenet residuals', None, 'constant frame along a straight line')
        return
    residuals = frenet_residuals(tube.curve, grid.t[1:-1])
    for name, value in residuals.items():
        section.add(name, value <= tol.frenet_tol, residual=value)

    fr = tube.frenet(grid.t)
    expected = ((fr.t, CausalClass.Timelike), (fr.n, CausalClass.Spacelike), (fr.b, CausalClass.Spacelike))
    wrong = sum(causal_character(v, tol.causal_tol) is not cls for vectors, cls in expected for v in vectors)
    section.add('t timelike, n and b spacelike', wrong == 0, misclassified=wrong)


def _natural_frame_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = _interior(grid)
    x_t, x_theta = tube.natural_frame(T, TH)
    fd = tube.as_patch(analytic=False).jets(T, TH)
    for name, closed, approx in (('x_t', x_t, fd.x_u), ('x_theta', x_theta, fd.x_v)):
        size = max(float(np.max(np.linalg.norm(closed, axis=-1))), FLOOR)
        err = float(np.max(np.linalg.norm(closed - approx, axis=-1))) / size
        section.add(f'{name} vs difference quotient', err <= tol.fd_jet_tol, max_relative_error=err)


def _forms_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = grid.T, grid.THETA
    patch = tube.as_patch()
    oracle = fundamental_forms(patch, T, TH)
    closed = closed_form_forms(tube, T, TH)
    for name in ('E', 'F', 'G', 'e', 'f', 'g'):
        err = _rel(closed[name], getattr(oracle, name))
        section.add(name, err <= tol.forms_tol, max_relative_error=err)

    U = unit_normal(patch, T, TH)
    err = float(np.max(np.linalg.norm(U - tube.unit_normal(T, TH), axis=-1)))
    section.add('U = -cos n - sin b', err <= tol.forms_tol, max_error=err)

    alpha = tube.alpha(T, TH)
    kappa = tube.frenet(grid.t).kappa[:, None]
    r = tube.r
    first = oracle.E * oracle.G - oracle.F**2
    second = oracle.e * oracle.g - oracle.f**2
    err_first = _rel(first, -(alpha**2) * r**2)
    err_second = _rel(second, -r * kappa * alpha * np.cos(TH))
    section.add('EG - F^2 = -alpha^2 r^2', err_first <= tol.identity_tol, max_relative_error=err_first)
    section.add('eg - f^2 = -r kappa alpha cos', err_second <= tol.identity_tol, max_relative_error=err_second)
    section.add('timelike', bool(np.all(first < 0)), max_first_det=float(np.max(first)))


def _curvature_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = grid.T, grid.THETA
    forms = fundamental_forms(tube.as_patch(), T, TH)
    K_oracle = gaussian_curvature(forms, forms.epsU)
    H_oracle = mean_curvature(forms, forms.epsU)

    err = _rel(closed_form_K(tube, T, TH), K_oracle)
    section.add('K', err <= tol.curvature_tol, max_relative_error=err)

    H = closed_form_H(tube, T, TH)
    err = _rel(H.magnitude, np.abs(H_oracle))
    section.add('|H|', err <= tol.curvature_tol, max_relative_error=err)

    ratio = np.sign(H.value * H_oracle)
    consistent = bool(np.all(ratio == ratio.flat[0]))
    section.add('H sign ratio constant', consistent, sign_ratio=float(ratio.flat[0]))
    if consistent and ratio.flat[0] < 0:
        section.find(
            'H-sign',
            'printed H is the negative of the definitional mean curvature with U = -cos n - sin b',
            sign_ratio=float(ratio.flat[0]),
        )


def _kii_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = grid.T, grid.THETA
    oracle, valid = second_gaussian_curvature_field(tube.as_patch(), T, TH, degeneracy_tol=tol.degeneracy_tol)
    closed = closed_form_KII(tube, T, TH, masked=True, tol=tol.degeneracy_tol)
    valid = valid & np.isfinite(closed)
    fraction = float(valid.mean())
    if fraction < tol.min_valid_fraction:
        section.add('KII vs Brioschi', None, 'second form degenerate on most of the grid', valid_fraction=fraction)
        return
    err = _rel(closed, oracle, valid)
    section.add('KII vs Brioschi', err <= tol.kii_tol, max_relative_error=err, valid_fraction=fraction)


def _difference(fn: Callable[[Array, Array], Array], T: Array, TH: Array, ht: float, hth: float) -> tuple[Array, Array]:
    with np.errstate(divide='ignore', invalid='ignore'):
        return central_first(lambda x: fn(x, TH), T, ht), central_first(lambda x: fn(T, x), TH, hth)


def _partials_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = _interior(grid)
    ht = PARTIAL_STEP * (tube.domain[0][1] - tube.domain[0][0])
    hth = PARTIAL_STEP * 2.0 * math.pi
    p = curvature_partials(tube, T, TH, tol.degeneracy_tol)

    parents = (
        ('K', lambda t, th: closed_form_K(tube, t, th), p.K_t, p.K_theta),
        ('H', lambda t, th: closed_form_H(tube, t, th).value, p.H_t, p.H_theta),
        ('KII', lambda t, th: closed_form_KII(tube, t, th, masked=True, tol=tol.degeneracy_tol), p.KII_t, p.KII_theta),
    )
    for name, fn, closed_t, closed_theta in parents:
        d_t, d_theta = _difference(fn, T, TH, ht, hth)
        mask = np.isfinite(d_t) & np.isfinite(d_theta) & np.isfinite(closed_t) & np.isfinite(closed_theta)
        if float(mask.mean()) < tol.min_valid_fraction:
            section.add(f'{name}_t', None, 'parent field degenerate')
            section.add(f'{name}_theta', None, 'parent field degenerate')
            continue
        floor = 1e-3 * float(np.max(np.hypot(closed_t[mask], closed_theta[mask])))
        floor = max(floor, FLOOR)
        errors = {}
        for suffix, closed, approx in (('t', closed_t, d_t), ('theta', closed_theta, d_theta)):
            errors[suffix] = err = _rel(closed, approx, mask, floor)
            section.add(f'{name}_{suffix}', err <= tol.partial_tol, max_relative_error=err)

        if name == 'KII':
            if errors['theta'] <= tol.partial_tol:
                section.note('typeset KII_theta agrees with differentiation on this tube')
            err = _rel(p.KII_t_transcribed, d_t, mask, floor)
            if err > tol.partial_tol:
                section.find(
                    'KII_t-transcription',
                    'the typeset 4 r cos^2 numerator term disagrees with differentiation; '
                    'the kappa-weighted term 4 r kappa\' cos^2 is used instead',
                    transcribed_error=err,
                )
            else:
                section.note('typeset KII_t agrees with differentiation on this tube')


def _fd_jet_section(section: Section, tube: TubeSurface, grid: TubeGrid, tol: Tolerances) -> None:
    T, TH = _interior(grid)
    forms = fundamental_forms(tube.as_patch(analytic=False), T, TH)
    K = gaussian_curvature(forms, forms.epsU)
    H = mean_curvature(forms, forms.epsU)
    # difference jets leave ~1e-10 noise where K vanishes identically (cylinders)
    r = tube.r
    err_K = _rel(K, closed_form_K(tube, T, TH), floor=max(FLOOR, 1e-3 / r**2))
    err_H = _rel(np.abs(H), closed_form_H(tube, T, TH).magnitude, floor=max(FLOOR, 1e-3 / r))
    section.add('K from difference jets', err_K <= tol.fd_jet_tol, max_relative_error=err_K)
    section.add('|H| from difference jets', err_H <= tol.fd_jet_tol, max_relative_error=err_H)


def verify_tube(
    tube: TubeSurface,
    grid: Union[TubeGrid, tuple[int, int]] = DEFAULT_GRID,
    tolerances: Optional[Tolerances] = None,
) -> VerificationReport:
    tol = tolerances or Tolerances()
    grid = grid if isinstance(grid, TubeGrid) else tube.grid(*grid)
    logger.info('verify_tube(%s) on %r', tube.name, grid)

    report = VerificationReport(f'Closed forms versus definitional oracles for {tube.name} on {grid.nt}x{grid.ntheta}')
    steps = (
        ('frame', 'Frenet equations along the core curve', _frame_section),
        ('natural-frame', 'x_t = alpha t + r tau v and x_theta = r v', _natural_frame_section),
        ('forms', 'fundamental forms and their determinants', _forms_section),
        ('curvatures', 'K and H against the definitional quotients', _curvature_section),
        ('second-gaussian', 'KII against the Brioschi formula on (e, f, g)', _kii_section),
        ('partials', 'partials against central differences of their parents', _partials_section),
        ('fd-jets', 'K and H from difference-quotient jets', _fd_jet_section),
    )
    for id_, title, step in steps:
        step(report.section(id_, title), tube, grid, tol)
    return report

