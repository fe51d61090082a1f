#!/usr/bin/env python
"""Definitional curvature machinery for parametric surfaces.

Nothing here knows about tubes: fundamental forms come from the patch's
jets, K and H from their textbook quotients, and K_II from the Brioschi
determinants applied to (e, f, g) with finite-difference partials.
"""

import logging
from collections.abc import Iterator
from typing import Any, Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from TimelikeTubes.enums import JetSource
from TimelikeTubes.errors import (
    DegenerateMetric,
    DegenerateSecondForm,
    DegenerateTangentPlane,
    StencilOutOfDomain,
)
from TimelikeTubes.minkowski import LORENTZIAN, Metric
from TimelikeTubes.numdiff import FIRST, OFFSETS, SECOND, richardson

logger = logging.getLogger('surface')

NORMAL_FLOOR = 1e-10
METRIC_FLOOR = 1e-14
DEGENERACY_TOL = 1e-10
JET_STEP = 1e-3
BRIOSCHI_STEP = 1e-3

Array = NDArray[np.float64]
Steps = Union[float, tuple[float, float], None]


class SurfaceJets:
    def __init__(self, x_u: Array, x_v: Array, x_uu: Array, x_uv: Array, x_vv: Array) -> None:
        self.x_u = x_u
        self.x_v = x_v
        self.x_uu = x_uu
        self.x_uv = x_uv
        self.x_vv = x_vv

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {'x_u': self.x_u, 'x_v': self.x_v, 'x_uu': self.x_uu, 'x_uv': self.x_uv, 'x_vv': self.x_vv}.items()

    def __repr__(self) -> str:
        return f'SurfaceJets(x_u={self.x_u!r}, x_v={self.x_v!r})'


class SurfacePatch:
    """(u, v) -> position over a rectangle, with optional analytic jets.

    Without analytic jets, first and second derivatives come from 5-point
    central differences of the position with steps `fd_step` per axis.
    """

    def __init__(
        self,
        position: Callable[[Array, Array], Array],
        domain: tuple[tuple[float, float], tuple[float, float]],
        jets: Optional[Callable[[Array, Array], SurfaceJets]] = None,
        periodic: tuple[bool, bool] = (False, False),
        name: str = 'patch',
        fd_step: Steps = None,
    ) -> None:
        self._position = position
        self._jets = jets
        self.domain = (tuple(float(x) for x in domain[0]), tuple(float(x) for x in domain[1]))
        self.periodic = periodic
        self.name = name
        self.fd_step = self.steps(JET_STEP) if fd_step is None else self.step_pair(fd_step)

    @property
    def jet_source(self) -> JetSource:
        return JetSource.Analytic if self._jets is not None else JetSource.SampledFiniteDifference

    @property
    def spans(self) -> tuple[float, float]:
        return (self.domain[0][1] - self.domain[0][0], self.domain[1][1] - self.domain[1][0])

    def steps(self, fraction: float) -> tuple[float, float]:
        return (fraction * self.spans[0], fraction * self.spans[1])

    @staticmethod
    def step_pair(h: Union[float, tuple[float, float]]) -> tuple[float, float]:
        if np.ndim(h) == 0:
            return (float(h), float(h))
        return (float(h[0]), float(h[1]))

    def evaluate(self, u: ArrayLike, v: ArrayLike) -> Array:
        return self._position(np.asarray(u, dtype=float), np.asarray(v, dtype=float))

    def jets(self, u: ArrayLike, v: ArrayLike) -> SurfaceJets:
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        if self._jets is not None:
            return self._jets(u, v)
        return self._difference_jets(u, v)

    def _difference_jets(self, u: Array, v: Array) -> SurfaceJets:
        hu, hv = self.fd_step
        x_u = sum(w * self.evaluate(u + k * hu, v) for k, w in zip(OFFSETS, FIRST) if w) / hu
        x_v = sum(w * self.evaluate(u, v + k * hv) for k, w in zip(OFFSETS, FIRST) if w) / hv
        x_uu = sum(w * self.evaluate(u + k * hu, v) for k, w in zip(OFFSETS, SECOND)) / hu**2
        x_vv = sum(w * self.evaluate(u, v + k * hv) for k, w in zip(OFFSETS, SECOND)) / hv**2
        x_uv = (
            sum(
                wi * wj * self.evaluate(u + i * hu, v + j * hv)
                for i, wi in zip(OFFSETS, FIRST)
                for j, wj in zip(OFFSETS, FIRST)
                if wi and wj
            )
            / (hu * hv)
        )
        return SurfaceJets(x_u, x_v, x_uu, x_uv, x_vv)

    def finite_difference(self, step: Steps = None) -> 'SurfacePatch':
        return SurfacePatch(
            self._position,
            self.domain,
            jets=None,
            periodic=self.periodic,
            name=f'{self.name}~fd',
            fd_step=step if step is not None else self.fd_step,
        )

    def axis_fits(self, axis: int, x: ArrayLike, reach: float) -> NDArray[np.bool_]:
        x = np.asarray(x, dtype=float)
        if self.periodic[axis]:
            return np.ones(x.shape, dtype=bool)
        lo, hi = self.domain[axis]
        return (x - reach >= lo) & (x + reach <= hi)

    def stencil_fits(self, u: ArrayLike, v: ArrayLike, reach: tuple[float, float]) -> NDArray[np.bool_]:
        """True where [u - reach, u + reach] x [v - reach, v + reach] stays in the domain."""
        return self.axis_fits(0, u, reach[0]) & self.axis_fits(1, v, reach[1])

    def reach(self, hu: float, hv: float) -> tuple[float, float]:
        """How far a stencil of steps (hu, hv) samples, including the jet stencil."""
        if self._jets is not None:
            return (hu, hv)
        return (hu + 2.0 * self.fd_step[0], hv + 2.0 * self.fd_step[1])

    def __repr__(self) -> str:
        return f'SurfacePatch(name={self.name!r}, domain={self.domain!r}, jets={self.jet_source.name})'


class FundamentalForms:
    def __init__(
        self, E: Array, F: Array, G: Array, e: Array, f: Array, g: Array, epsU: Optional[Array] = None
    ) -> None:
        self.E = np.asarray(E, dtype=float)
        self.F = np.asarray(F, dtype=float)
        self.G = np.asarray(G, dtype=float)
        self.e = np.asarray(e, dtype=float)
        self.f = np.asarray(f, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.epsU = epsU

    @property
    def first_det(self) -> Array:
        return self.E * self.G - self.F**2

    @property
    def second_det(self) -> Array:
        return self.e * self.g - self.f**2

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {'E': self.E, 'F': self.F, 'G': self.G, 'e': self.e, 'f': self.f, 'g': self.g}.items()

    def __repr__(self) -> str:
        return (
            f'FundamentalForms(E={self.E!r}, F={self.F!r}, G={self.G!r}, '
            f'e={self.e!r}, f={self.f!r}, g={self.g!r})'
        )


def _normal_from_jets(jets: SurfaceJets, metric: Metric) -> Array:
    w = metric.cross(jets.x_u, jets.x_v)
    length = metric.norm(w)
    if np.any(length <= NORMAL_FLOOR):
        raise DegenerateTangentPlane('x_u ^ x_v is null or zero; the tangent plane is degenerate')
    return w / length[..., None]


def unit_normal(patch: SurfacePatch, u: ArrayLike, v: ArrayLike, metric: Metric = LORENTZIAN) -> Array:
    return _normal_from_jets(patch.jets(u, v), metric)


def fundamental_forms(
    patch: SurfacePatch, u: ArrayLike, v: ArrayLike, metric: Metric = LORENTZIAN
) -> FundamentalForms:
    jets = patch.jets(u, v)
    U = _normal_from_jets(jets, metric)
    inner = metric.inner
    return FundamentalForms(
        inner(jets.x_u, jets.x_u),
        inner(jets.x_u, jets.x_v),
        inner(jets.x_v, jets.x_v),
        inner(jets.x_uu, U),
        inner(jets.x_uv, U),
        inner(jets.x_vv, U),
        epsU=np.sign(inner(U, U)),
    )


def _checked_first_det(forms: FundamentalForms) -> Array:
    det = forms.first_det
    if np.any(np.abs(det) <= METRIC_FLOOR):
        raise DegenerateMetric('EG - F^2 vanishes; the first fundamental form is degenerate')
    return det


def gaussian_curvature(forms: FundamentalForms, epsU: ArrayLike) -> Array:
    return forms.second_det / _checked_first_det(forms) * epsU


def mean_curvature(forms: FundamentalForms, epsU: ArrayLike) -> Array:
    numerator = forms.e * forms.G - 2.0 * forms.f * forms.F + forms.g * forms.E
    return numerator / (2.0 * _checked_first_det(forms)) * epsU


def brioschi(
    a: Array, b: Array, c: Array, d: dict[str, Array]
) -> Array:
    """Brioschi's two-determinant formula for the metric a du^2 + 2b du dv + c dv^2.

    `d` holds the partials keyed 'a_u', 'a_v', 'a_vv', 'b_u', 'b_v', 'b_uv',
    'c_u', 'c_v', 'c_uu'.
    """
    first = np.stack(
        (
            np.stack((-0.5 * d['a_vv'] + d['b_uv'] - 0.5 * d['c_uu'], 0.5 * d['a_u'], d['b_u'] - 0.5 * d['a_v']), -1),
            np.stack((d['b_v'] - 0.5 * d['c_u'], a, b), -1),
            np.stack((0.5 * d['c_v'], b, c), -1),
        ),
        -2,
    )
    zero = np.zeros_like(a)
    second = np.stack(
        (
            np.stack((zero, 0.5 * d['a_v'], 0.5 * d['c_u']), -1),
            np.stack((0.5 * d['a_v'], a, b), -1),
            np.stack((0.5 * d['c_u'], b, c), -1),
        ),
        -2,
    )
    return (np.linalg.det(first) - np.linalg.det(second)) / (a * c - b**2) ** 2


def _second_form_partials(
    patch: SurfacePatch, u: Array, v: Array, hu: float, hv: float, metric: Metric
) -> tuple[dict[str, Array], Array]:
    grid = {}
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            grid[i, j] = fundamental_forms(patch, u + i * hu, v + j * hv, metric)

    def pick(name: str, i: int, j: int) -> Array:
        return getattr(grid[i, j], name)

    d = {}
    for name, key in (('e', 'a'), ('f', 'b'), ('g', 'c')):
        d[f'{key}_u'] = (pick(name, 1, 0) - pick(name, -1, 0)) / (2.0 * hu)
        d[f'{key}_v'] = (pick(name, 0, 1) - pick(name, 0, -1)) / (2.0 * hv)
        d[f'{key}_uu'] = (pick(name, 1, 0) - 2.0 * pick(name, 0, 0) + pick(name, -1, 0)) / hu**2
        d[f'{key}_vv'] = (pick(name, 0, 1) - 2.0 * pick(name, 0, 0) + pick(name, 0, -1)) / hv**2
        d[f'{key}_uv'] = (
            pick(name, 1, 1) - pick(name, 1, -1) - pick(name, -1, 1) + pick(name, -1, -1)
        ) / (4.0 * hu * hv)

    smallest = np.min(np.stack([np.abs(forms.second_det) for forms in grid.values()]), axis=0)
    return d, smallest


def second_gaussian_curvature_field(
    patch: SurfacePatch,
    u: ArrayLike,
    v: ArrayLike,
    h: Steps = None,
    metric: Metric = LORENTZIAN,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> tuple[Array, NDArray[np.bool_]]:
    """K_II on many points at once; invalid points come back as NaN with a False mask.

    A point is invalid when its stencil leaves the domain or when
    |eg - f^2| <= degeneracy_tol anywhere on the stencil.
    """
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    hu, hv = patch.steps(BRIOSCHI_STEP) if h is None else SurfacePatch.step_pair(h)
    ru, rv = patch.reach(hu, hv)

    # out-of-domain rows are moved to a safe point and masked afterwards
    fits_u, fits_v = patch.axis_fits(0, u, ru), patch.axis_fits(1, v, rv)
    uu = np.where(fits_u, u, 0.5 * sum(patch.domain[0]))
    vv = np.where(fits_v, v, 0.5 * sum(patch.domain[1]))
    valid = fits_u & fits_v
    e0 = fundamental_forms(patch, uu, vv, metric)

    coarse, low_coarse = _second_form_partials(patch, uu, vv, hu, hv, metric)
    fine, low_fine = _second_form_partials(patch, uu, vv, hu / 2.0, hv / 2.0, metric)
    d = {key: richardson(coarse[key], fine[key]) for key in coarse}
    valid &= np.minimum(low_coarse, low_fine) > degeneracy_tol

    with np.errstate(divide='ignore', invalid='ignore'):
        values = brioschi(e0.e, e0.f, e0.g, d)
    values = np.where(valid, values, np.nan)
    logger.debug('Brioschi sweep on %s: %d/%d valid points', patch.name, int(valid.sum()), valid.size)
    return values, valid


def second_gaussian_curvature(
    patch: SurfacePatch,
    u: ArrayLike,
    v: ArrayLike,
    h: Steps = None,
    metric: Metric = LORENTZIAN,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> Array:
    hu, hv = patch.steps(BRIOSCHI_STEP) if h is None else SurfacePatch.step_pair(h)
    ru, rv = patch.reach(hu, hv)
    if not np.all(patch.stencil_fits(u, v, (ru, rv))):
        raise StencilOutOfDomain(f'Brioschi stencil of reach {ru:.3g}, {rv:.3g} leaves {patch.domain!r}')

    values, valid = second_gaussian_curvature_field(patch, u, v, (hu, hv), metric, degeneracy_tol)
    if not np.all(valid):
        raise DegenerateSecondForm('eg - f^2 vanishes on the stencil; K_II is undefined there')
    return values
