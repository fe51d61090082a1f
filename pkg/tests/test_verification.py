import numpy as np
import pytest

from TimelikeTubes.config import DEFAULT_GRID, Tolerances
from TimelikeTubes.verification import verify_tube

SECTIONS = ['frame', 'natural-frame', 'forms', 'curvatures', 'second-gaussian', 'partials', 'fd-jets']


@pytest.fixture(scope='module')
def helix_report(helix_tube):
    return verify_tube(helix_tube, (16, 32))


def test_helix_closed_forms_agree_with_the_oracles(helix_report):
    assert [s.id for s in helix_report.sections] == SECTIONS
    assert helix_report.ok, helix_report.to_text()
    for section in helix_report.sections:
        assert section.counts()['FAIL'] == 0


def test_sign_and_transcription_findings(helix_report, polynomial_tube):
    names = [f.name for f in helix_report.findings]
    assert 'H-sign' in names
    ratio = helix_report['curvatures'].checks[-1].metrics['sign_ratio']
    assert ratio == -1.0

    report = verify_tube(polynomial_tube, (16, 32))
    assert 'KII_t-transcription' in [f.name for f in report.findings]


def test_cylinder_skips_the_second_gaussian_checks(cylinder):
    report = verify_tube(cylinder, (16, 32))
    assert report.ok, report.to_text()
    assert report['second-gaussian'].summary_line().startswith('SKIP second-gaussian')
    assert report['frame'].counts()['SKIP'] == 1


def test_verification_is_deterministic(helix_tube):
    first = verify_tube(helix_tube, (8, 16)).to_text()
    second = verify_tube(helix_tube, (8, 16)).to_text()
    assert first == second


def test_tight_tolerance_fails(helix_tube):
    report = verify_tube(helix_tube, (8, 16), Tolerances(kii_tol=1e-30))
    assert not report.ok
    assert report['second-gaussian'].counts()['FAIL'] == 1
    assert report.to_text().endswith('RESULT FAIL\n')


def test_every_metric_is_finite(helix_report):
    for section in helix_report.sections:
        for check in section.checks:
            assert all(v is not None and np.isfinite(v) for v in check.metrics.values()), check


def test_frenet_vectors_have_the_expected_causal_characters(helix_report, helix_tube):
    check = next(c for c in helix_report['frame'].checks if c.name == 't timelike, n and b spacelike')
    assert check.metrics['misclassified'] == 0

    report = verify_tube(helix_tube, (8, 16), Tolerances(causal_tol=2.0))
    check = next(c for c in report['frame'].checks if c.name == 't timelike, n and b spacelike')
    assert check.verdict.failed
    assert check.metrics['misclassified'] > 0


def test_kii_theta_partial_is_confirmed(helix_report):
    assert 'typeset KII_theta agrees with differentiation on this tube' in helix_report['partials'].notes


def test_polynomial_tube_on_the_default_grid(polynomial_tube):
    report = verify_tube(polynomial_tube, DEFAULT_GRID)
    assert report.ok, report.to_text()
