import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from TimelikeTubes.config import DEFAULT_GRID, Tolerances
from TimelikeTubes.enums import CurvaturePair, PartialSource, Theorem, TrigBasis
from TimelikeTubes.errors import (
    EmptyFixtureSet,
    GridMismatch,
    IllConditionedFit,
    InsufficientSamples,
    InsufficientValidGrid,
    ParamDomain,
    TrivialRelation,
)
from TimelikeTubes.util import Verdict
from TimelikeTubes.weingarten import (
    CurvatureField,
    Fixture,
    best_linear_fit,
    DEFAULT_RADII,
    classify_weingarten,
    default_fixtures,
    jacobi_field,
    jacobi_polynomial_coefficients,
    linear_relation_space,
    linear_weingarten_residual,
    theorem_suite,
    trig_coefficients,
    tube_fields,
)


def _by_pair(reports):
    return {r.pair: r for r in reports}


def test_constant_curvature_tube_is_weingarten_for_every_pair(helix_tube, small_grid):
    reports = _by_pair(classify_weingarten(helix_tube, small_grid))
    assert set(reports) == set(CurvaturePair)
    for report in reports.values():
        assert report.verdict, report
        assert report.kappa_prime_max <= 1e-6


def test_difference_partials_agree(helix_tube, small_grid):
    reports = classify_weingarten(helix_tube, small_grid, PartialSource.FiniteDifference)
    for report in reports:
        assert report.tolerance == Tolerances().jacobi_fd_tol
        assert report.verdict, report


def test_varying_curvature_breaks_the_second_gaussian_pairs(polynomial_tube, small_grid):
    reports = _by_pair(classify_weingarten(polynomial_tube, small_grid))
    assert reports[CurvaturePair.K_H].verdict
    threshold = 100 * Tolerances().jacobi_tol
    assert reports[CurvaturePair.K_KII].normalized >= threshold
    assert reports[CurvaturePair.H_KII].normalized >= threshold
    assert reports[CurvaturePair.K_KII].kappa_prime_max > 1e-3


def test_cylinder_has_no_second_gaussian_curvature(cylinder, small_grid):
    with pytest.raises(InsufficientValidGrid):
        classify_weingarten(cylinder, small_grid)


def test_jacobi_polynomial_coefficients(polynomial_tube, small_grid):
    fitted, expected = jacobi_polynomial_coefficients(polynomial_tube, small_grid)
    assert fitted.shape == (small_grid[0], 3)
    np.testing.assert_allclose(fitted, expected, atol=1e-8)
    assert np.max(np.abs(expected[:, 0])) > 1e-3


def test_jacobi_field_grid_checks(helix_tube, small_grid):
    a = tube_fields(helix_tube, small_grid)
    b = tube_fields(helix_tube, (small_grid[0], small_grid[1] * 2))
    with pytest.raises(GridMismatch):
        jacobi_field(a['K'], b['H'])
    bare = CurvatureField('K', a['K'].t, a['K'].theta, a['K'].values)
    with pytest.raises(GridMismatch):
        jacobi_field(bare, a['H'])
    with pytest.raises(GridMismatch):
        CurvatureField('K', [0.0, 0.0, 1.0], [0.1, 0.2], np.zeros((3, 2)))


def test_jacobi_is_antisymmetric(polynomial_tube, small_grid):
    fields = tube_fields(polynomial_tube, small_grid)
    forward = jacobi_field(fields['K'], fields['KII'])
    backward = jacobi_field(fields['KII'], fields['K'])
    np.testing.assert_allclose(forward.masked(), -backward.masked(), equal_nan=True)


partials = arrays(np.float64, (3, 4), elements=st.floats(-1e3, 1e3))


@given(partials, partials, partials, partials)
def test_jacobi_antisymmetry_on_arbitrary_partials(xt, xth, yt, yth):
    t, theta = [0.0, 0.5, 1.0], [0.1, 0.2, 0.3, 0.4]
    X = CurvatureField('X', t, theta, np.zeros((3, 4)), d_t=xt, d_theta=xth)
    Y = CurvatureField('Y', t, theta, np.ones((3, 4)), d_t=yt, d_theta=yth)
    np.testing.assert_array_equal(jacobi_field(X, Y).masked(), -jacobi_field(Y, X).masked())
    np.testing.assert_array_equal(jacobi_field(X, X).masked(), np.zeros((3, 4)))


def test_trig_coefficients():
    theta = np.linspace(0.1, 6.2, 40)
    c = np.cos(theta)
    fit = trig_coefficients(theta, 1.0 + 2.0 * c - 0.5 * c**2, TrigBasis.CosPowers, 2)
    np.testing.assert_allclose(fit.coefficients, [1.0, 2.0, -0.5], atol=1e-10)
    assert fit.residual <= 1e-12
    fit = trig_coefficients(theta, np.sin(theta) * (3.0 - c), TrigBasis.CosPowersSin, 1)
    np.testing.assert_allclose(fit.coefficients, [3.0, -1.0], atol=1e-10)


def test_trig_coefficients_errors():
    theta = np.linspace(0.1, 6.2, 40)
    with pytest.raises(ParamDomain):
        trig_coefficients(theta, theta, TrigBasis.CosPowers, 7)
    with pytest.raises(InsufficientSamples):
        trig_coefficients(theta[:5], theta[:5], TrigBasis.CosPowers, 2)
    with pytest.raises(IllConditionedFit):
        trig_coefficients(np.full(10, 0.3), np.ones(10), TrigBasis.CosPowers, 2)


def test_cylinder_linear_relations(cylinder, small_grid):
    r = cylinder.r
    for a, c in ((5.0, 1.0), (-3.0, 2.0), (0.0, -1.0)):
        result = linear_weingarten_residual(cylinder, CurvaturePair.K_H, a, -2.0 * r * c, c, small_grid)
        assert result.verdict
        assert result.max_residual <= 1e-12
    assert not linear_weingarten_residual(cylinder, CurvaturePair.K_H, 1.0, 1.0, 1.0, small_grid).verdict

    space = linear_relation_space(cylinder, CurvaturePair.K_H, small_grid)
    assert space.shape == (3, 2)
    np.testing.assert_allclose(space[1] + 2.0 * r * space[2], 0.0, atol=1e-10)


def test_every_tube_satisfies_one_linear_relation(helix_tube, small_grid):
    r = helix_tube.r
    result = linear_weingarten_residual(helix_tube, CurvaturePair.K_H, -(r**2), -2.0 * r, 1.0, small_grid)
    assert result.verdict
    space = linear_relation_space(helix_tube, CurvaturePair.K_H, small_grid)
    assert space.shape == (3, 1)
    a, b, c = space[:, 0] / space[2, 0]
    assert a == pytest.approx(-(r**2))
    assert b == pytest.approx(-2.0 * r)
    assert result.residual.valid_fraction == 1.0


def test_oracle_sign_flips_the_relation(helix_tube, small_grid):
    r = helix_tube.r
    closed = linear_weingarten_residual(helix_tube, CurvaturePair.K_H, -(r**2), -2.0 * r, 1.0, small_grid)
    oracle = linear_weingarten_residual(
        helix_tube, CurvaturePair.K_H, -(r**2), 2.0 * r, 1.0, small_grid, h_sign='oracle'
    )
    assert closed.verdict and oracle.verdict


def test_no_linear_relation_with_second_gaussian_curvature(helix_tube, small_grid):
    fields = tube_fields(helix_tube, small_grid)
    for pair in (CurvaturePair.K_KII, CurvaturePair.H_KII):
        assert linear_relation_space(helix_tube, pair, small_grid).shape == (3, 0)
        assert best_linear_fit(fields, pair).normalized >= 100 * Tolerances().lw_tol


def test_trivial_relation_rejected(helix_tube, small_grid):
    with pytest.raises(TrivialRelation):
        linear_weingarten_residual(helix_tube, CurvaturePair.K_H, 0.0, 0.0, 0.0, small_grid)


def test_theorem_suite(small_grid):
    report = theorem_suite(default_fixtures(), grid=small_grid)
    assert [s.id for s in report.sections] == [t.value for t in Theorem]
    assert report.ok, report.to_text()
    kii = report[Theorem.WeingartenKII.value]
    assert kii.notes == ['direct branch exercised', 'contrapositive branch exercised']
    assert any(c.verdict == Verdict(None) for c in kii.checks)
    names = [f.name for f in report.findings]
    assert any(name.endswith('hypothesis') for name in names)


def test_theorem_suite_is_deterministic_across_workers(helix, small_grid):
    fixtures = [Fixture('helix', helix)]
    serial = theorem_suite(fixtures, radii=(0.1, 0.3), grid=small_grid)
    threaded = theorem_suite(fixtures, radii=(0.1, 0.3), grid=small_grid, workers=2)
    assert serial.to_text() == threaded.to_text()


def test_theorem_suite_needs_fixtures():
    with pytest.raises(EmptyFixtureSet):
        theorem_suite([])


def test_weingarten_kh_acceptance_on_the_default_grid():
    report = theorem_suite(default_fixtures(), DEFAULT_RADII, DEFAULT_GRID)
    assert report.ok, report.to_text()
    checks = report[Theorem.WeingartenKH.value].checks
    assert len(checks) == 3 * len(DEFAULT_RADII) + 1
    for check in checks:
        assert check.metrics['normalized_phi'] <= 1e-8, check
    for check in report[Theorem.WeingartenKII.value].checks:
        if check.name.endswith('sin-coefficients'):
            assert check.metrics['coefficient_error'] <= 1e-8, check
    for radius in DEFAULT_RADII:
        assert any(check.name == f'polynomial r={radius:g}' for check in checks)


def test_weingarten_tolerance_drives_the_kh_verdict(polynomial, small_grid):
    report = theorem_suite([Fixture('polynomial', polynomial)], (0.3,), small_grid, Tolerances(weingarten_tol=1e-30))
    assert report[Theorem.WeingartenKH.value].verdict.failed
