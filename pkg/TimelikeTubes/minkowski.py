#!/usr/bin/env python
"""Vector algebra of Minkowski 3-space with signature (-, +, +).

Every function accepts a `MinkVector` or any array-like whose last axis has
length 3, so grids of vectors are handled in one call.
"""

import logging
from collections.abc import Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

from TimelikeTubes.enums import CausalClass
from TimelikeTubes.errors import NonFiniteVector

logger = logging.getLogger('minkowski')

SIGNATURE = np.array([-1.0, 1.0, 1.0])
DEFAULT_CAUSAL_TOL = 1e-10


def components(beta: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(beta, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f'expected vectors with 3 components, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise NonFiniteVector('vector components must be finite')
    return arr


class MinkVector:
    __slots__ = ('_y',)

    def __init__(self, y1: float, y2: float, y3: float) -> None:
        self._y = components((y1, y2, y3))
        self._y.setflags(write=False)

    @classmethod
    def from_array(cls, arr: ArrayLike) -> 'MinkVector':
        y1, y2, y3 = components(arr)
        return cls(y1, y2, y3)

    @property
    def y1(self) -> float:
        return float(self._y[0])

    @property
    def y2(self) -> float:
        return float(self._y[1])

    @property
    def y3(self) -> float:
        return float(self._y[2])

    def __array__(self, dtype: object = None, copy: object = None) -> NDArray[np.float64]:
        return self._y.astype(dtype) if dtype is not None else self._y.copy()

    def __iter__(self) -> Iterator[float]:
        yield from (self.y1, self.y2, self.y3)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MinkVector):
            return bool(np.array_equal(self._y, other._y))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self))

    def __neg__(self) -> 'MinkVector':
        return MinkVector.from_array(-self._y)

    def __add__(self, other: 'MinkVector') -> 'MinkVector':
        return MinkVector.from_array(self._y + np.asarray(other))

    def __sub__(self, other: 'MinkVector') -> 'MinkVector':
        return MinkVector.from_array(self._y - np.asarray(other))

    def __mul__(self, scalar: float) -> 'MinkVector':
        return MinkVector.from_array(self._y * scalar)

    __rmul__ = __mul__

    def inner(self, other: ArrayLike) -> float:
        return float(mink_inner(self, other))

    def norm(self) -> float:
        return float(mink_norm(self))

    def cross(self, other: ArrayLike) -> 'MinkVector':
        return MinkVector.from_array(lorentz_cross(self, other))

    def causal_character(self, tol: float = DEFAULT_CAUSAL_TOL) -> CausalClass:
        return causal_character(self, tol)

    def __repr__(self) -> str:
        return f'MinkVector(y1={self.y1!r}, y2={self.y2!r}, y3={self.y3!r})'


def mink_inner(beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
    b = components(beta)
    m = components(mu)
    return -b[..., 0] * m[..., 0] + b[..., 1] * m[..., 1] + b[..., 2] * m[..., 2]


def mink_norm(beta: ArrayLike) -> NDArray[np.float64]:
    return np.sqrt(np.abs(mink_inner(beta, beta)))


def causal_character(beta: ArrayLike, tol: float = DEFAULT_CAUSAL_TOL) -> CausalClass:
    """Classify a single vector by the sign of <beta, beta>.

    The zero vector gets its own class instead of being folded into
    Spacelike, since normalization and frame construction reject it.
    """
    if tol <= 0:
        raise ValueError('tol must be positive')
    b = components(beta)
    if b.shape != (3,):
        raise ValueError('causal_character classifies one vector at a time')

    if np.all(np.abs(b) <= tol):
        return CausalClass.Zero
    q = float(mink_inner(b, b))
    if abs(q) <= tol * (1.0 + float(np.dot(b, b))):
        return CausalClass.Lightlike
    return CausalClass.Timelike if q < 0 else CausalClass.Spacelike


def lorentz_cross(beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
    b = components(beta)
    m = components(mu)
    b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2]
    m1, m2, m3 = m[..., 0], m[..., 1], m[..., 2]
    return np.stack(
        (
            b3 * m2 - b2 * m3,
            b3 * m1 - b1 * m3,
            b1 * m2 - b2 * m1,
        ),
        axis=-1,
    )


def euclidean_inner(beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
    return np.sum(components(beta) * components(mu), axis=-1)


def euclidean_cross(beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
    return np.cross(components(beta), components(mu))


class Metric:
    """Inner product, norm and vector product of one ambient space."""

    def __init__(self, name: str, inner, cross) -> None:
        self.name = name
        self._inner = inner
        self._cross = cross

    def inner(self, beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
        return self._inner(beta, mu)

    def norm(self, beta: ArrayLike) -> NDArray[np.float64]:
        return np.sqrt(np.abs(self._inner(beta, beta)))

    def cross(self, beta: ArrayLike, mu: ArrayLike) -> NDArray[np.float64]:
        return self._cross(beta, mu)

    def __repr__(self) -> str:
        return f'Metric({self.name!r})'


LORENTZIAN = Metric('lorentzian', mink_inner, lorentz_cross)
EUCLIDEAN = Metric('euclidean', euclidean_inner, euclidean_cross)
