#!/usr/bin/env python
"""Command-line front end: mesh, curvature, classify, verify and explore."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.text import Text

from TimelikeTubes.config import DEFAULT_GRID, JobSpec, Tolerances
from TimelikeTubes.curve import TimelikeCurve, make_analytic_curve, reparametrize_unit_speed
from TimelikeTubes.enums import ExitCode
from TimelikeTubes.errors import JobSpecError, TubeError
from TimelikeTubes.export import write_curvature_csv, write_obj
from TimelikeTubes.report import VerificationReport
from TimelikeTubes.tube import ParallelFrame, TubeSurface, make_tube
from TimelikeTubes.verification import verify_tube
from TimelikeTubes.weingarten import DEFAULT_RADII, Fixture, default_fixtures, theorem_suite

logger = logging.getLogger('cli')

LOG_FORMAT = '%(asctime)s %(name)-8s %(levelname)-6s %(message)s'


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the parse-error code instead of argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ExitCode.PARSE_ERROR, f'{self.prog}: error: {message}\n')


def configure_logging(verbosity: int, log_file: Optional[Path]) -> None:
    level = logging.DEBUG if verbosity > 1 else logging.INFO
    if log_file:
        logging.basicConfig(level=level, format=LOG_FORMAT, filename=log_file, filemode='w', force=True)
    elif verbosity:
        logging.basicConfig(
            level=level,
            format='%(name)s: %(message)s',
            handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
            force=True,
        )


def load_curve(spec: JobSpec) -> TimelikeCurve:
    """Preset or sampled CSV, reparametrized by arclength when it is not unit speed."""
    if spec.curve is None:
        raise JobSpecError('--curve is required')
    if spec.is_preset:
        curve = make_analytic_curve(spec.curve, spec.params, unit_speed=False)
    else:
        if spec.params:
            raise JobSpecError('--params only applies to preset curves')
        curve = TimelikeCurve.from_csv(spec.curve)
    curve.unit_speed_tol = spec.tolerances.unit_speed_tol
    curve.kappa_floor = spec.tolerances.kappa_floor
    curve.causal_tol = spec.tolerances.causal_tol
    if not curve.is_unit_speed():
        logger.info('%s is not unit speed (defect %.3e), reparametrizing', curve.name, curve.speed_defect())
        curve = reparametrize_unit_speed(curve)
    return curve


def build_frame(spec: JobSpec, curve: TimelikeCurve) -> Optional[ParallelFrame]:
    if spec.frame is None:
        return None
    if not spec.frame:
        return ParallelFrame.along(curve)
    return ParallelFrame.along(curve, spec.frame)


def build_tube(spec: JobSpec) -> TubeSurface:
    curve = load_curve(spec)
    return make_tube(curve, spec.r, build_frame(spec, curve))


def _require_out(spec: JobSpec, command: str) -> Path:
    if spec.out is None:
        raise JobSpecError(f'{command} needs --out')
    return spec.out


def _emit(report: VerificationReport, spec: JobSpec, console: Console) -> int:
    report.render(console)
    if spec.out is not None:
        report.save(spec.out)
    if spec.json_out is not None:
        report.save(spec.json_out, as_json=True)
    return ExitCode.OK if report.ok else ExitCode.FAIL


def cmd_mesh(spec: JobSpec, console: Console) -> int:
    out = _require_out(spec, 'mesh')
    tube = build_tube(spec)
    vertices, faces = write_obj(tube, tube.grid(*spec.grid), out, normals=spec.normals)
    console.print(Text(f'{tube.name}: {vertices} vertices, {faces} faces -> {out}'))
    return ExitCode.OK


def cmd_curvature(spec: JobSpec, console: Console) -> int:
    out = _require_out(spec, 'curvature')
    tube = build_tube(spec)
    rows = write_curvature_csv(tube, tube.grid(*spec.grid), out, spec.tolerances)
    console.print(Text(f'{tube.name}: {rows} rows -> {out}'))
    return ExitCode.OK


def cmd_classify(spec: JobSpec, console: Console) -> int:
    if spec.curve is None:
        fixtures = default_fixtures()
        radii = DEFAULT_RADII if spec.radius is None else (spec.radius,)
    else:
        curve = load_curve(spec)
        fixtures = [Fixture(curve.name, curve, build_frame(spec, curve), radii=(spec.r,))]
        radii = (spec.r,)
    report = theorem_suite(fixtures, radii, spec.grid, spec.tolerances, spec.workers)
    return _emit(report, spec, console)


def cmd_verify(spec: JobSpec, console: Console) -> int:
    tube = build_tube(spec)
    report = verify_tube(tube, spec.grid, spec.tolerances)
    return _emit(report, spec, console)


def cmd_explore(args: argparse.Namespace) -> int:
    from TimelikeTubes.app import ReportExplorerApp

    app = ReportExplorerApp({'file': args.report, 'outfile': args.outfile})
    app.run()
    return ExitCode.OK


def _job_arguments(parser: ArgumentParser, curve_required: bool = True) -> None:
    parser.add_argument(
        '--curve',
        required=curve_required,
        help='preset (line, hyperbola, helix, polynomial) or a CSV with columns s,y1,y2,y3',
    )
    parser.add_argument('--params', help='comma-separated preset parameters, e.g. helix a,b,omega')
    parser.add_argument('--radius', type=float, help='tube radius (default 0.3)')
    parser.add_argument('--grid', default='x'.join(map(str, DEFAULT_GRID)), help='NTxNTH (default %(default)s)')
    parser.add_argument('--out', type=Path, help='output file')
    parser.add_argument('--json', type=Path, help='also write the report as JSON')
    parser.add_argument(
        '--frame',
        nargs='?',
        const='',
        metavar='N0',
        help='constant normal frame for a straight line; optional n0 as y1,y2,y3 (default 0,1,0)',
    )
    parser.add_argument('--normals', action='store_true', help='write vn records (mesh only)')
    parser.add_argument('--workers', type=int, default=1, help='threads for the theorem suite')

    group = parser.add_argument_group('tolerances')
    for name, default in Tolerances.DEFAULTS.items():
        group.add_argument(
            Tolerances.flag(name), dest=f'tol_{name}', type=float, metavar='X', help=f'{name} (default {default:g})'
        )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='timelike-tubes', description='Timelike tubular surfaces in Minkowski 3-space')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='log to stderr (-vv for debug)')
    parser.add_argument('--log-file', type=Path, help='write the log to a file instead')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, handler, help_ in (
        ('mesh', cmd_mesh, 'write a triangulated OBJ of the tube'),
        ('curvature', cmd_curvature, 'write K, H and K_II over the grid as CSV'),
        ('classify', cmd_classify, 'run the Weingarten theorem checks'),
        ('verify', cmd_verify, 'compare closed forms with definitional oracles'),
    ):
        command = sub.add_parser(name, help=help_)
        _job_arguments(command, curve_required=name != 'classify')
        command.set_defaults(handler=handler)

    explore = sub.add_parser('explore', help='browse a JSON report in a terminal UI')
    explore.add_argument('-f', '--report', help='JSON report to open')
    explore.add_argument('-o', '--outfile', help='file to save to; leave blank to pick one')
    explore.set_defaults(handler=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else ExitCode.PARSE_ERROR

    configure_logging(args.verbose, args.log_file)
    console = Console(soft_wrap=True, highlight=False)
    errors = Console(stderr=True, soft_wrap=True, highlight=False)

    try:
        if args.command == 'explore':
            return cmd_explore(args)
        spec = JobSpec.from_args(args)
        logger.info('%s %r', args.command, spec)
        return int(args.handler(spec, console))
    except TubeError as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        errors.print(Text.assemble(('error: ', 'red'), f'{type(exc).__name__}: {exc}'))
        return int(exc.exit_code)
    except OSError as exc:
        logger.error('I/O failure: %s', exc)
        errors.print(Text.assemble(('error: ', 'red'), str(exc)))
        return ExitCode.IO_FAILURE
