# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
CSV and JSON result files.

Floats are written with repr so that identical results give identical files. Sites are written
as their coordinates joined with ':'.
'''
from __future__ import annotations  # noqa: F407

# System imports
import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Sequence, Tuple, Union

# Third-party imports
import numpy as np

# Local imports
from .ct import CTVerification
from .dissipative import PseudospectrumGrid, SpectralEnvelope
from .dynamics import DensityMatrix, Superoperator
from .errors import PreconditionError
from .kernel import CoherenceBoundReport, CoherenceKernel
from .lattice import Lattice


_logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DENSITY_HEADER = ('row_site', 'col_site', 're', 'im')
TRIPLET_HEADER = ('row', 'col', 're', 'im')
KERNEL_HEADER = ('u', 'v', 'd_xu', 'd_yv', 're_k', 'im_k', 'abs_k')
PSEUDOSPECTRUM_HEADER = ('re_z', 'im_z', 'sigma_min')
EIGENVALUE_HEADER = ('re', 'im')
VIOLATION_HEADER = ('re_z', 'im_z', 'x', 'y', 'measured', 'bound', 'ok')
SWEEP_HEADER = ('lambda', 's', 'd_xy', 'mean', 'std_error', 'n',
                'x', 'y', 're_z', 'im_z', 'median_of_means')
PLOT_HEADER = ('distance', 'log10_magnitude')


def site_label(site: Sequence[int]) -> str:
    return ':'.join(str(int(c)) for c in site)


def parse_site(label: str) -> Tuple[int, ...]:
    return tuple(int(c) for c in label.split(':'))


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, tuple):
        return site_label(value)
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    _logger.debug('Wrote %s', path)
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def dumps(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True, default=_json_default) + '\n'


def write_json(path: PathLike, document: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding='utf-8')
    _logger.debug('Wrote %s', path)
    return path


# Per-result writers

def density_matrix_rows(rho: DensityMatrix, lat: Lattice) -> List[Tuple[Any, ...]]:
    matrix = rho.matrix
    return [(lat.sites[i], lat.sites[j], float(matrix[i, j].real), float(matrix[i, j].imag))
            for i in range(len(lat)) for j in range(len(lat))]


def write_density_matrix(path: PathLike, rho: DensityMatrix, lat: Lattice) -> Path:
    return write_csv(path, DENSITY_HEADER, density_matrix_rows(rho, lat))


def write_triplets(path: PathLike, superoperator: Superoperator) -> Path:
    return write_csv(path, TRIPLET_HEADER, superoperator.triplets())


def write_kernel(path: PathLike, kernel: CoherenceKernel) -> Path:
    return write_csv(path, KERNEL_HEADER, kernel.rows())


def write_coherence_reports(path: PathLike, reports: Sequence[CoherenceBoundReport]) -> Path:
    return write_json(path, [report.to_json() for report in reports])


def write_pseudospectrum(path: PathLike, grid: PseudospectrumGrid) -> Path:
    return write_csv(path, PSEUDOSPECTRUM_HEADER, grid.rows())


def envelope_summary(envelope: SpectralEnvelope) -> Mapping[str, Any]:
    return {
        're_norm': envelope.re_norm,
        'im_norm': envelope.im_norm,
        'half_width': envelope.half_width,
        'gap': envelope.gap,
        're_bound': envelope.re_bound,
        'im_bound': envelope.im_bound,
        'dissipative': envelope.dissipative,
        'inside_box': envelope.inside_box(),
        'within_norm_bounds': envelope.within_norm_bounds,
    }


def write_envelope(directory: PathLike, envelope: SpectralEnvelope) -> Tuple[Path, Path]:
    directory = Path(directory)
    rows = [(float(ev.real), float(ev.imag)) for ev in envelope.eigenvalues]
    return (write_csv(directory / 'eigenvalues.csv', EIGENVALUE_HEADER, rows),
            write_json(directory / 'envelope.json', envelope_summary(envelope)))


def write_violations(path: PathLike, verification: CTVerification) -> Path:
    return write_csv(path, VIOLATION_HEADER, verification.rows)


def sweep_rows(lam: float, estimates: Iterable[Any]) -> List[Tuple[Any, ...]]:
    rows = []
    for estimate in estimates:
        x, y = estimate.pair
        rows.append((float(lam), estimate.s, estimate.distance, estimate.mean,
                     estimate.std_error, estimate.n_samples, tuple(x), tuple(y),
                     estimate.z.real, estimate.z.imag, estimate.median_of_means))
    return rows


def write_sweep(path: PathLike, rows: Iterable[Sequence[Any]]) -> Path:
    return write_csv(path, SWEEP_HEADER, rows)


def plot_rows(samples: Iterable[Tuple[float, float]]) -> List[Tuple[float, float]]:
    '''(distance, log10 magnitude) rows, dropping zero magnitudes.'''
    return [(float(d), math.log10(m)) for d, m in samples if m > 0]


def write_plot_data(path: PathLike, samples: Iterable[Tuple[float, float]]) -> Path:
    return write_csv(path, PLOT_HEADER, plot_rows(samples))


def read_decay_samples(path: PathLike) -> List[Tuple[float, float]]:
    '''
    Reads (distance, magnitude) rows, with or without a header line.

    :raises PreconditionError: On rows that do not hold two numbers.
    '''
    samples = []
    with Path(path).open(newline='', encoding='utf-8') as stream:
        for index, row in enumerate(csv.reader(stream)):
            if not row:
                continue
            try:
                samples.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if index == 0:
                    continue
                raise PreconditionError(f'{path}: bad row {index + 1}: {row!r}') from None
    return samples
