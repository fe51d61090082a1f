#!/usr/bin/env python
"""Finite-difference stencils shared by curves, surfaces and the verifiers."""

from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

EPS = np.finfo(float).eps

# 5-point central stencils on offsets -2h..2h
FIRST = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
SECOND = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
THIRD = np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0
OFFSETS = np.arange(-2, 3)

Field = Callable[[NDArray[np.float64]], NDArray[np.float64]]


def fd_step(order: int, span: float) -> float:
    """Step for a 5-point stencil of the given derivative order.

    Rounding error grows like eps/h**order, so the cube root of eps suits
    first derivatives and the fourth root suits the higher ones.
    """
    root = 3 if order == 1 else 4
    return max(1e-4, EPS ** (1.0 / root) * span)


def _apply(f: Field, x: ArrayLike, h: float, weights: NDArray[np.float64]) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    total = None
    for k, w in zip(OFFSETS, weights):
        if w == 0.0:
            continue
        term = w * f(x + k * h)
        total = term if total is None else total + term
    return total


def central_first(f: Field, x: ArrayLike, h: float) -> NDArray[np.float64]:
    return _apply(f, x, h, FIRST) / h


def central_second(f: Field, x: ArrayLike, h: float) -> NDArray[np.float64]:
    return _apply(f, x, h, SECOND) / h**2


def central_third(f: Field, x: ArrayLike, h: float) -> NDArray[np.float64]:
    return _apply(f, x, h, THIRD) / h**3


def three_point(f: Field, x: ArrayLike, h: float) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    return (f(x + h) - f(x - h)) / (2.0 * h)


def clamped_derivative(f: Field, x: ArrayLike, h: float, lo: float, hi: float) -> NDArray[np.float64]:
    """Central difference that shrinks to one-sided at the ends of [lo, hi]."""
    x = np.asarray(x, dtype=float)
    left = np.clip(x - h, lo, hi)
    right = np.clip(x + h, lo, hi)
    return (f(right) - f(left)) / (right - left)


def richardson(coarse: ArrayLike, fine: ArrayLike, order: int = 2) -> NDArray[np.float64]:
    """Combine estimates at h and h/2 whose leading error is O(h**order)."""
    factor = 2.0**order
    return (factor * np.asarray(fine) - np.asarray(coarse)) / (factor - 1.0)


def max_relative_error(actual: ArrayLike, expected: ArrayLike, floor: float = 1e-9) -> float:
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    if actual.size == 0:
        return 0.0
    denom = np.maximum(np.abs(expected), floor)
    return float(np.max(np.abs(actual - expected) / denom))
