import json
import math

import pytest
from rich.console import Console

from TimelikeTubes.report import Check, VerificationReport
from TimelikeTubes.util import Verdict, color_verdict


def _report():
    report = VerificationReport('demo')
    forms = report.section('forms', 'fundamental forms')
    forms.add('E', True, max_relative_error=1.5e-12)
    forms.add('F', None, 'not applicable')
    kii = report.section('kii')
    kii.add('KII', False, max_relative_error=0.25, valid_fraction=math.nan)
    kii.find('H-sign', 'printed H has the opposite sign', sign_ratio=-1.0)
    kii.note('something worth knowing')
    return report


def test_verdict():
    assert Verdict(True).name == 'PASS'
    assert Verdict.parse('SKIP') == Verdict(None)
    assert Verdict.combine([Verdict(True), Verdict(None)]) == Verdict(True)
    assert Verdict.combine([Verdict(True), Verdict(False)]).failed
    assert Verdict.combine([]) == Verdict(None)
    with pytest.raises(TypeError):
        bool(Verdict(True))
    with pytest.raises(ValueError):
        Verdict('yes')
    with pytest.raises(ValueError):
        Verdict.parse('MAYBE')


def test_color_verdict():
    assert color_verdict(False).plain == 'FAIL'
    assert color_verdict(Verdict(None), align_left=6).plain == 'SKIP  '


def test_text_form():
    text = _report().to_text()
    lines = text.splitlines()
    assert lines[0] == '# demo'
    assert lines[1] == 'PASS forms passed=1 failed=0 skipped=1'
    assert lines[2] == '  # fundamental forms'
    assert lines[3] == '  PASS E max_relative_error=1.500000e-12'
    assert lines[4] == '  SKIP F (not applicable)'
    assert lines[5] == 'FAIL kii passed=0 failed=1 skipped=0'
    assert lines[6] == '  FAIL KII max_relative_error=2.500000e-01 valid_fraction=nan'
    assert lines[7] == '  FINDING H-sign: printed H has the opposite sign sign_ratio=-1.000000e+00'
    assert lines[8] == '  note: something worth knowing'
    assert lines[-1] == 'RESULT FAIL'
    assert text.endswith('\n')


def test_json_round_trip(tmp_path):
    report = _report()
    data = json.loads(report.to_json())
    assert data['verdict'] == 'FAIL'
    assert data['sections'][1]['checks'][0]['metrics']['valid_fraction'] is None

    path = tmp_path / 'report.json'
    report.save(path, as_json=True)
    with path.open() as fp:
        loaded = VerificationReport.from_json(fp)
    assert loaded.to_text() == report.to_text()
    assert [f.name for f in loaded.findings] == ['H-sign']


def test_save_text(tmp_path):
    path = tmp_path / 'report.txt'
    _report().save(path)
    assert path.read_bytes().decode() == _report().to_text()


def test_lookup_and_verdicts():
    report = _report()
    assert report['forms'].verdict == Verdict(True)
    assert not report.ok
    with pytest.raises(KeyError):
        report['missing']
    assert Check.from_dict(dict(report['forms'].checks[0])).line() == report['forms'].checks[0].line()


def test_render_matches_text():
    console = Console(record=True, width=200, color_system=None)
    report = _report()
    report.render(console)
    assert console.export_text() == report.to_text()
