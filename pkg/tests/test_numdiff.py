import numpy as np
import pytest

from TimelikeTubes.numdiff import (
    central_first,
    central_second,
    central_third,
    clamped_derivative,
    fd_step,
    max_relative_error,
    richardson,
    three_point,
)

x = np.linspace(-1.0, 1.0, 9)


def test_central_stencils_on_smooth_functions():
    np.testing.assert_allclose(central_first(np.sin, x, 1e-3), np.cos(x), atol=1e-10)
    np.testing.assert_allclose(central_second(np.exp, x, 1e-3), np.exp(x), rtol=1e-7)
    np.testing.assert_allclose(central_third(np.sin, x, 1e-2), -np.cos(x), atol=1e-4)
    np.testing.assert_allclose(three_point(np.sin, x, 1e-5), np.cos(x), atol=1e-9)


def test_stencils_are_exact_on_low_degree_polynomials():
    cubic = lambda s: s**3 - 2 * s  # noqa: E731
    np.testing.assert_allclose(central_first(cubic, x, 0.1), 3 * x**2 - 2, atol=1e-12)
    np.testing.assert_allclose(central_second(cubic, x, 0.1), 6 * x, atol=1e-11)


def test_clamped_derivative_goes_one_sided_at_the_ends():
    square = lambda s: s**2  # noqa: E731
    assert clamped_derivative(square, 0.0, 1e-4, 0.0, 1.0) == pytest.approx(1e-4)
    assert clamped_derivative(square, 1.0, 1e-4, 0.0, 1.0) == pytest.approx(2.0, abs=1e-3)
    assert clamped_derivative(square, 0.5, 1e-4, 0.0, 1.0) == pytest.approx(1.0)


def test_richardson_cancels_the_leading_term():
    exact, c, h = 1.5, 0.7, 0.1
    assert richardson(exact + c * h**2, exact + c * (h / 2) ** 2) == pytest.approx(exact)


def test_fd_step_scales_with_span():
    assert fd_step(1, 1000.0) == pytest.approx(10 * fd_step(1, 100.0))
    assert fd_step(2, 1.0) > fd_step(1, 1.0)
    assert fd_step(1, 1e-9) == 1e-4


def test_max_relative_error_floor():
    assert max_relative_error([1.1], [1.0]) == pytest.approx(0.1)
    assert max_relative_error([1e-12], [0.0], floor=1e-9) == pytest.approx(1e-3)
    assert max_relative_error([], []) == 0.0
