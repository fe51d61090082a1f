import math

import numpy as np
import pytest

from TimelikeTubes.curve import (
    TimelikeCurve,
    curvature_profile,
    frenet_frame,
    frenet_residuals,
    make_analytic_curve,
    read_curve_csv,
    reparametrize_unit_speed,
)
from TimelikeTubes.enums import CurvePreset, JetSource
from TimelikeTubes.errors import CurveParseError, NotTimelike, NotUnitSpeed, ParamDomain, VanishingCurvature
from TimelikeTubes.minkowski import mink_inner
from TimelikeTubes.numdiff import clamped_derivative

s = np.linspace(0.5, 5.5, 11)


def test_helix_frame(helix, sqrt2):
    fr = frenet_frame(helix, s)
    np.testing.assert_allclose(fr.kappa, 1.0, atol=1e-12)
    np.testing.assert_allclose(fr.tau, sqrt2, atol=1e-12)
    np.testing.assert_allclose(fr.b, np.stack((-np.ones_like(s), sqrt2 * np.sin(s), -sqrt2 * np.cos(s)), -1), atol=1e-12)
    np.testing.assert_allclose(mink_inner(fr.t, fr.t), -1.0, atol=1e-12)
    np.testing.assert_allclose(mink_inner(fr.n, fr.n), 1.0, atol=1e-12)
    np.testing.assert_allclose(mink_inner(fr.b, fr.b), 1.0, atol=1e-12)
    np.testing.assert_allclose(mink_inner(fr.t, fr.b), 0.0, atol=1e-12)


def test_helix_with_other_parameters():
    helix = make_analytic_curve('helix', (math.sqrt(2.0), 0.5, 2.0))
    fr = helix.frenet(s)
    np.testing.assert_allclose(fr.kappa, 0.5 * 2.0**2, rtol=1e-9)
    np.testing.assert_allclose(np.abs(fr.tau), math.sqrt(2.0) * 2.0, rtol=1e-9)


def test_hyperbola_is_planar(hyperbola):
    fr = hyperbola.frenet(np.linspace(-0.9, 0.9, 7))
    np.testing.assert_allclose(fr.kappa, 1.0, atol=1e-12)
    np.testing.assert_allclose(fr.tau, 0.0, atol=1e-12)


@pytest.mark.parametrize('name', ['helix', 'hyperbola', 'polynomial'])
def test_frenet_equations(name, helix, hyperbola, polynomial):
    curve = {'helix': helix, 'hyperbola': hyperbola, 'polynomial': polynomial}[name]
    lo, hi = curve.domain
    residuals = frenet_residuals(curve, np.linspace(lo + 0.05, hi - 0.05, 9))
    assert set(residuals) == {'tangent', 'normal', 'binormal', 'tau_crosscheck'}
    for value in residuals.values():
        assert value <= 1e-5


def test_unit_speed_checks(polynomial):
    raw = make_analytic_curve(CurvePreset.PolynomialTimelike, unit_speed=False)
    assert not raw.is_unit_speed()
    with pytest.raises(NotUnitSpeed):
        frenet_frame(raw, 0.0)
    assert polynomial.is_unit_speed()
    assert polynomial.domain[0] == 0.0


def test_reparametrization_keeps_the_trace(polynomial):
    raw = make_analytic_curve(CurvePreset.PolynomialTimelike, unit_speed=False)
    end = polynomial.jet(polynomial.domain[1]).position
    np.testing.assert_allclose(end, raw.jet(0.5).position, atol=1e-9)


def test_varying_curvature(polynomial):
    profile = curvature_profile(polynomial, np.linspace(0.1, polynomial.domain[1] - 0.1, 5))
    kappas = [k for _, k, _, _ in profile]
    assert max(kappas) - min(kappas) > 1e-3
    assert any(abs(kp) > 1e-3 for *_, kp in profile)


def test_line_has_no_frenet_frame(line):
    with pytest.raises(VanishingCurvature) as info:
        frenet_frame(line, [0.0, 0.5])
    assert info.value.parameter == 0.0


@pytest.mark.parametrize(
    'preset, params, domain',
    [
        ('helix', (1.0, 1.0, 1.0), None),
        ('helix', (1.0, 2.0), None),
        ('line', (1.0,), None),
        ('polynomial', (), (-1.0, 1.0)),
    ],
)
def test_bad_presets(preset, params, domain):
    with pytest.raises(ParamDomain):
        make_analytic_curve(preset, params, domain)


def test_bad_domain():
    with pytest.raises(ParamDomain):
        TimelikeCurve(lambda x: (x, x, x, x), (1.0, 1.0))


def test_reparametrize_rejects_coarse_quadrature(helix):
    with pytest.raises(ParamDomain):
        reparametrize_unit_speed(helix, quad_steps=4)


def _write_helix_csv(path, n=201):
    lines = ['s,y1,y2,y3']
    for x in np.linspace(0.0, 2.0 * math.pi, n):
        lines.append(f'{x!r},{math.sqrt(2.0) * x!r},{math.cos(x)!r},{math.sin(x)!r}')
    path.write_text('\n'.join(lines) + '\n')


def test_sampled_curve(tmp_path):
    path = tmp_path / 'helix.csv'
    _write_helix_csv(path)
    curve = TimelikeCurve.from_csv(path)
    assert curve.source is JetSource.SampledFiniteDifference
    assert curve.name == 'helix'
    assert curve.domain == pytest.approx((0.0, 2.0 * math.pi))
    np.testing.assert_allclose(curve.kappa(np.linspace(2.0, 4.0, 5)), 1.0, atol=1e-4)


@pytest.mark.parametrize(
    'text, line_number',
    [
        ('t,y1,y2,y3\n0,0,1,0\n', 1),
        ('s,y1,y2,y3\n0,0,1,0\n1,abc,1,0\n', 3),
        ('s,y1,y2,y3\n0,0,1,0\n1,1,1\n', 3),
        ('s,y1,y2,y3\n0,0,1,0\n0,1,1,0\n', 3),
        ('s,y1,y2,y3\n0,0,1,0\n1,nan,1,0\n', 3),
    ],
)
def test_csv_parse_errors(tmp_path, text, line_number):
    path = tmp_path / 'bad.csv'
    path.write_text(text)
    with pytest.raises(CurveParseError) as info:
        read_curve_csv(path)
    assert info.value.line_number == line_number
    assert f'line {line_number}' in str(info.value)


def test_csv_needs_enough_samples(tmp_path):
    path = tmp_path / 'short.csv'
    path.write_text('s,y1,y2,y3\n0,0,1,0\n1,1,1,0\n')
    with pytest.raises(CurveParseError):
        read_curve_csv(path)


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _spacelike_line(u):
    zero, one = np.zeros_like(u), np.ones_like(u)
    return _stack(zero, u, zero), _stack(zero, one, zero), _stack(zero, zero, zero), _stack(zero, zero, zero)


def _null_at_end(u):
    zero, one = np.zeros_like(u), np.ones_like(u)
    return _stack(u, u**2 / 2.0, zero), _stack(one, u, zero), _stack(zero, one, zero), _stack(zero, zero, zero)


@pytest.mark.parametrize('jet_fn', [_spacelike_line, _null_at_end])
def test_reparametrization_rejects_non_timelike_velocity(jet_fn):
    curve = TimelikeCurve(jet_fn, (0.0, 1.0))
    with pytest.raises(NotTimelike):
        reparametrize_unit_speed(curve)


def test_causal_tolerance_widens_the_null_band():
    raw = make_analytic_curve(CurvePreset.PolynomialTimelike, unit_speed=False)
    raw.causal_tol = 10.0
    with pytest.raises(NotTimelike):
        reparametrize_unit_speed(raw)


def test_reparametrization_is_idempotent(polynomial):
    again = reparametrize_unit_speed(polynomial)
    assert again.domain == pytest.approx(polynomial.domain, abs=1e-9)
    grid = np.linspace(0.0, min(again.domain[1], polynomial.domain[1]), 17)
    first, second = polynomial.jet(grid), again.jet(grid)
    for name in ('position', 'd1', 'd2', 'd3'):
        np.testing.assert_allclose(getattr(second, name), getattr(first, name), atol=1e-9, err_msg=name)


def test_unit_speed_helix_is_unchanged_by_reparametrization(helix):
    again = reparametrize_unit_speed(helix)
    assert again.domain == pytest.approx(helix.domain, abs=1e-9)
    grid = helix.grid(33)
    for name in ('position', 'd1', 'd2', 'd3'):
        np.testing.assert_allclose(getattr(again.jet(grid), name), getattr(helix.jet(grid), name), atol=1e-9)


def test_helix_kappa_prime_vanishes(helix):
    profile = curvature_profile(helix, helix.grid(65))
    assert max(abs(kp) for *_, kp in profile) <= 1e-8


def test_analytic_kappa_prime_matches_differences(polynomial):
    s = np.linspace(0.05, polynomial.domain[1] - 0.05, 9)
    differenced = clamped_derivative(polynomial.kappa, s, 1e-4, *polynomial.domain)
    np.testing.assert_allclose(polynomial.kappa_prime(s), differenced, atol=1e-6)
