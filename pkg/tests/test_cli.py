import json
import math

import pytest

from TimelikeTubes.cli import build_parser, main
from TimelikeTubes.enums import ExitCode, Theorem
from TimelikeTubes.report import VerificationReport


def test_mesh_default_grid(tmp_path, capsys):
    out = tmp_path / 'helix.obj'
    assert main(['mesh', '--curve', 'helix', '--radius', '0.3', '--out', str(out)]) == ExitCode.OK
    lines = out.read_text().splitlines()
    assert sum(line.startswith('v ') for line in lines) == 64 * 128
    assert sum(line.startswith('f ') for line in lines) == 2 * 63 * 128
    assert '8192 vertices, 16128 faces' in capsys.readouterr().out


def test_mesh_rerun_is_byte_identical(tmp_path):
    args = ['mesh', '--curve', 'helix', '--params', '1.4142135623730951,1,1', '--grid', '8x16', '--normals']
    assert main([*args, '--out', str(tmp_path / 'a.obj')]) == ExitCode.OK
    assert main([*args, '--out', str(tmp_path / 'b.obj')]) == ExitCode.OK
    assert (tmp_path / 'a.obj').read_bytes() == (tmp_path / 'b.obj').read_bytes()


def test_radius_too_large(tmp_path, capsys):
    code = main(['mesh', '--curve', 'helix', '--radius', '1.2', '--out', str(tmp_path / 'x.obj')])
    assert code == ExitCode.RADIUS_TOO_LARGE
    assert 'RadiusTooLarge' in capsys.readouterr().err
    assert not (tmp_path / 'x.obj').exists()


@pytest.mark.parametrize(
    'argv',
    [
        ['mesh', '--curve', 'helix', '--bogus'],
        ['mesh', '--curve', 'helix', '--grid', '8by16', '--out', 'x.obj'],
        ['mesh', '--curve', 'helix', '--grid', '4x4', '--out', 'x.obj'],
        ['mesh', '--curve', 'helix'],
        ['mesh', '--curve', 'helix', '--radius', '-1', '--out', 'x.obj'],
        ['verify', '--curve', 'helix', '--tol-jacobi', '0'],
        ['verify'],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == ExitCode.PARSE_ERROR


def test_malformed_curve_csv(tmp_path, capsys):
    path = tmp_path / 'bad.csv'
    path.write_text('s,y1,y2,y3\n0,0,0,0\n1,oops,0,0\n')
    assert main(['verify', '--curve', str(path)]) == ExitCode.PARSE_ERROR
    assert 'line 3' in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    out = tmp_path / 'missing' / 'helix.obj'
    assert main(['mesh', '--curve', 'helix', '--grid', '8x16', '--out', str(out)]) == ExitCode.IO_FAILURE


def test_curvature_csv_rows(tmp_path, capsys):
    out = tmp_path / 'helix.csv'
    assert main(['curvature', '--curve', 'helix', '--radius', '0.1', '--grid', '8x16', '--out', str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == 't,theta,K,H_paper,H_oracle,KII,KII_valid'
    assert len(lines) == 1 + 8 * 16
    assert '128 rows' in capsys.readouterr().out


def test_cylinder_through_constant_frame(tmp_path):
    out = tmp_path / 'cylinder.csv'
    argv = ['curvature', '--curve', 'line', '--frame', '--radius', '0.5', '--grid', '8x16', '--out', str(out)]
    assert main(argv) == ExitCode.OK
    row = out.read_text().splitlines()[1].split(',')
    assert float(row[2]) == 0.0
    assert math.isclose(float(row[3]), -1.0)
    assert row[5:] == ['', '0']


def test_line_without_frame_fails(tmp_path):
    argv = ['mesh', '--curve', 'line', '--grid', '8x16', '--out', str(tmp_path / 'line.obj')]
    assert main(argv) == ExitCode.FAIL


def test_classify_single_curve(tmp_path, capsys):
    report_path = tmp_path / 'classify.json'
    argv = ['classify', '--curve', 'helix', '--radius', '0.3', '--grid', '16x32', '--json', str(report_path)]
    assert main(argv) == ExitCode.OK

    out = capsys.readouterr().out.splitlines()
    for theorem in Theorem:
        assert any(line.startswith(f'PASS {theorem.value} ') for line in out), theorem
    assert out[-1] == 'RESULT PASS'

    with report_path.open() as fp:
        report = VerificationReport.from_json(fp)
    assert [s.id for s in report.sections] == [t.value for t in Theorem]


def test_classify_polynomial_takes_the_contrapositive_branch(capsys):
    assert main(['classify', '--curve', 'polynomial', '--radius', '0.3', '--grid', '16x32']) == ExitCode.OK
    assert 'note: contrapositive branch exercised' in capsys.readouterr().out


def test_verify_writes_text_and_json(tmp_path, capsys):
    text, data = tmp_path / 'verify.txt', tmp_path / 'verify.json'
    argv = ['verify', '--curve', 'helix', '--radius', '0.1', '--grid', '16x32', '--out', str(text), '--json', str(data)]
    assert main(argv) == ExitCode.OK
    assert text.read_text().endswith('RESULT PASS\n')
    assert json.loads(data.read_text())['verdict'] == 'PASS'
    assert capsys.readouterr().out.splitlines()[-1] == 'RESULT PASS'


def test_tolerance_flags_reach_the_job():
    args = build_parser().parse_args(['verify', '--curve', 'helix', '--tol-kii', '1e-2', '--tol-kappa-floor', '1e-6'])
    assert args.tol_kii_tol == 1e-2
    assert args.tol_kappa_floor == 1e-6


def test_weingarten_tolerance_flag():
    args = build_parser().parse_args(['classify', '--tol-weingarten', '1e-9'])
    assert args.tol_weingarten_tol == 1e-9


def test_causal_tolerance_reaches_the_curve(capsys):
    assert main(['verify', '--curve', 'polynomial', '--grid', '8x16', '--tol-causal', '10']) == ExitCode.FAIL
    assert 'NotTimelike' in capsys.readouterr().err
