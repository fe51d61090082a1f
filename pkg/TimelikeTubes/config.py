#!/usr/bin/env python

import argparse
import logging
import math
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Any, Optional

from TimelikeTubes.enums import CurvePreset
from TimelikeTubes.errors import JobSpecError

logger = logging.getLogger('config')

MIN_NT = 8
MIN_NTHETA = 16
DEFAULT_GRID = (64, 128)
DEFAULT_RADIUS = 0.3


class Tolerances:
    DEFAULTS = {
        'causal_tol': 1e-10,
        'unit_speed_tol': 1e-7,
        'kappa_floor': 1e-8,
        'jacobi_tol': 1e-7,
        'jacobi_fd_tol': 1e-4,
        'weingarten_tol': 1e-8,
        'lw_tol': 1e-7,
        'scale_floor': 1e-12,
        'kappa_prime_tol': 1e-6,
        'degeneracy_tol': 1e-10,
        'forms_tol': 1e-7,
        'identity_tol': 1e-9,
        'curvature_tol': 1e-6,
        'kii_tol': 1e-3,
        'partial_tol': 1e-5,
        'frenet_tol': 1e-5,
        'fd_jet_tol': 1e-5,
        'contrapositive_factor': 100.0,
        'min_valid_fraction': 0.5,
    }

    def __init__(self, **overrides: float) -> None:
        unknown = set(overrides) - set(self.DEFAULTS)
        if unknown:
            raise JobSpecError(f'unknown tolerance(s): {", ".join(sorted(unknown))}')
        for name, default in self.DEFAULTS.items():
            value = float(overrides.get(name, default))
            if not (math.isfinite(value) and value > 0):
                raise JobSpecError(f'{name} must be a positive real, got {value!r}')
            setattr(self, name, value)

    @classmethod
    def from_dict(cls, data: dict) -> 'Tolerances':
        return cls(**{k: v for k, v in data.items() if v is not None})

    @staticmethod
    def flag(name: str) -> str:
        """`jacobi_tol` -> `--tol-jacobi`, `kappa_floor` -> `--tol-kappa-floor`."""
        return '--tol-' + name.removesuffix('_tol').replace('_', '-')

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from ((name, getattr(self, name)) for name in self.DEFAULTS)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Tolerances):
            return dict(self) == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        changed = ', '.join(f'{k}={v!r}' for k, v in self if v != self.DEFAULTS[k])
        return f'Tolerances({changed})'


def parse_grid(text: str) -> tuple[int, int]:
    try:
        nt, ntheta = (int(x) for x in text.lower().split('x'))
    except ValueError as exc:
        raise JobSpecError(f'grid must look like NTxNTH, got {text!r}') from exc
    return nt, ntheta


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError as exc:
        raise JobSpecError(f'expected comma-separated numbers, got {text!r}') from exc


class JobSpec:
    """Everything one CLI invocation needs to build a tube and write its outputs."""

    def __init__(  # noqa: PLR0913
        self,
        curve: Optional[str] = None,
        params: Sequence[float] = (),
        radius: Optional[float] = None,
        grid: tuple[int, int] = DEFAULT_GRID,
        out: Optional[Path] = None,
        json_out: Optional[Path] = None,
        frame: Optional[Sequence[float]] = None,
        normals: bool = False,
        workers: int = 1,
        tolerances: Optional[Tolerances] = None,
    ) -> None:
        self.curve = curve
        self.params = [float(x) for x in params]
        self.radius = float(radius) if radius is not None else None
        self.grid = (int(grid[0]), int(grid[1]))
        self.out = Path(out) if out is not None else None
        self.json_out = Path(json_out) if json_out is not None else None
        self.frame = list(frame) if frame is not None else None
        self.normals = normals
        self.workers = int(workers)
        self.tolerances = tolerances if tolerances is not None else Tolerances()
        self.validate()

    def validate(self) -> None:
        nt, ntheta = self.grid
        if nt < MIN_NT or ntheta < MIN_NTHETA:
            raise JobSpecError(f'grid {nt}x{ntheta} too small: need nt >= {MIN_NT} and ntheta >= {MIN_NTHETA}')
        if self.radius is not None and not (math.isfinite(self.radius) and self.radius > 0):
            raise JobSpecError(f'radius must be a positive real, got {self.radius!r}')
        if self.frame is not None and len(self.frame) not in (0, 3):
            raise JobSpecError('--frame takes three comma-separated components of n0')
        if self.workers < 1:
            raise JobSpecError('--workers must be at least 1')

    @property
    def r(self) -> float:
        return self.radius if self.radius is not None else DEFAULT_RADIUS

    @property
    def is_preset(self) -> bool:
        return self.curve in {p.value for p in CurvePreset}

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'JobSpec':
        tolerances = Tolerances.from_dict({name: getattr(args, f'tol_{name}', None) for name in Tolerances.DEFAULTS})
        frame = getattr(args, 'frame', None)
        return cls(
            curve=getattr(args, 'curve', None),
            params=parse_floats(args.params) if getattr(args, 'params', None) else (),
            radius=getattr(args, 'radius', None),
            grid=parse_grid(args.grid) if getattr(args, 'grid', None) else DEFAULT_GRID,
            out=getattr(args, 'out', None),
            json_out=getattr(args, 'json', None),
            frame=parse_floats(frame) if frame else ([] if frame == '' else None),
            normals=getattr(args, 'normals', False),
            workers=getattr(args, 'workers', 1),
            tolerances=tolerances,
        )

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'curve': self.curve,
            'params': self.params,
            'radius': self.radius,
            'grid': self.grid,
            'out': str(self.out) if self.out else None,
            'frame': self.frame,
            'tolerances': dict(self.tolerances),
        }.items()

    def __repr__(self) -> str:
        return (
            f'JobSpec(curve={self.curve!r}, params={self.params!r}, radius={self.radius!r}, '
            f'grid={self.grid!r}, out={self.out!r}, frame={self.frame!r})'
        )
