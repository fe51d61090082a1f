#!/usr/bin/env python
"""OBJ meshes and curvature CSVs for external viewers and plotters."""

import csv
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from TimelikeTubes.config import Tolerances
from TimelikeTubes.surface import fundamental_forms, mean_curvature
from TimelikeTubes.tube import TubeGrid, TubeSurface, closed_form_H, closed_form_K, closed_form_KII

logger = logging.getLogger('export')

CSV_HEADER = ['t', 'theta', 'K', 'H_paper', 'H_oracle', 'KII', 'KII_valid']


def _g17(x: float) -> str:
    return '%.17g' % x


def _g9(x: float) -> str:
    return '%.9g' % x


def outward_sign(tube: TubeSurface, grid: TubeGrid) -> float:
    """+1 if the Euclidean normal x_t x x_theta points away from the core curve."""
    x_t, x_theta = tube.natural_frame(grid.T, grid.THETA)
    radial = -tube.unit_normal(grid.T, grid.THETA)
    return 1.0 if float(np.sum(np.cross(x_t, x_theta) * radial)) >= 0 else -1.0


def mesh_faces(nt: int, ntheta: int, flip: bool = False) -> list[tuple[int, int, int]]:
    """1-based triangles over a row-major (t, theta) grid, closing the theta seam by wrap-around."""
    faces = []
    for i in range(nt - 1):
        for j in range(ntheta):
            j2 = (j + 1) % ntheta
            a, b = i * ntheta + j + 1, (i + 1) * ntheta + j + 1
            c, d = (i + 1) * ntheta + j2 + 1, i * ntheta + j2 + 1
            if flip:
                faces.extend(((a, c, b), (a, d, c)))
            else:
                faces.extend(((a, b, c), (a, c, d)))
    return faces


def write_obj(
    tube: TubeSurface, grid: TubeGrid, path: Union[str, Path], normals: bool = False
) -> tuple[int, int]:
    vertices = tube.position(grid.T, grid.THETA).reshape(-1, 3)
    faces = mesh_faces(grid.nt, grid.ntheta, flip=outward_sign(tube, grid) < 0)

    lines = [
        f'# timelike tube {tube.name}',
        f'# grid {grid.nt}x{grid.ntheta}, rows over t, theta seam closed by index wrap-around',
    ]
    lines.extend('v ' + ' '.join(_g9(x) for x in v) for v in vertices)
    if normals:
        outward = -tube.unit_normal(grid.T, grid.THETA).reshape(-1, 3)
        lines.extend('vn ' + ' '.join(_g9(x) for x in n) for n in outward)
        lines.extend(f'f {a}//{a} {b}//{b} {c}//{c}' for a, b, c in faces)
    else:
        lines.extend(f'f {a} {b} {c}' for a, b, c in faces)

    with Path(path).open('w', newline='\n') as fp:
        fp.write('\n'.join(lines) + '\n')
    logger.info('Wrote %d vertices and %d faces to %s', len(vertices), len(faces), path)
    return len(vertices), len(faces)


def write_curvature_csv(
    tube: TubeSurface, grid: TubeGrid, path: Union[str, Path], tolerances: Optional[Tolerances] = None
) -> int:
    tol = tolerances or Tolerances()
    T, TH = grid.T, grid.THETA
    K = closed_form_K(tube, T, TH)
    H_closed = closed_form_H(tube, T, TH).value
    forms = fundamental_forms(tube.as_patch(), T, TH)
    H_oracle = mean_curvature(forms, forms.epsU)
    KII = closed_form_KII(tube, T, TH, masked=True, tol=tol.degeneracy_tol)

    rows = 0
    with Path(path).open('w', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for i, t in enumerate(grid.t):
            for j, theta in enumerate(grid.theta):
                valid = bool(np.isfinite(KII[i, j]))
                writer.writerow(
                    [
                        _g17(t),
                        _g17(theta),
                        _g17(K[i, j]),
                        _g17(H_closed[i, j]),
                        _g17(H_oracle[i, j]),
                        _g17(KII[i, j]) if valid else '',
                        int(valid),
                    ]
                )
                rows += 1
    logger.info('Wrote %d curvature rows to %s', rows, path)
    return rows
