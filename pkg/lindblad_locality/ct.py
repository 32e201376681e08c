# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Combes-Thomas estimates for non-normal matrices: exponential decay of resolvent entries away
from the pseudospectrum, and checks of the estimates against dense resolvents.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Tuple, Union

# Third-party imports
import numpy as np
import scipy.linalg as la

# Local imports
from .errors import PreconditionError
from .lattice import Lattice, Region, Site
from .progress import ProgressObservable, notify


_logger = logging.getLogger(__name__)

REGIMES = ('small_mu', 'small_eps')

#: Deflation of the measured smallest singular value used as epsilon by default.
EPSILON_DEFLATION = 1e-6

_SLACK = 1e-9


def _distances(lat: Lattice, size: int, region: Optional[Region]) -> np.ndarray:
    ordinals = list(region.ordinals) if region is not None else list(range(len(lat)))
    if len(ordinals) != size:
        raise PreconditionError(
            f'Matrix of size {size} does not match {len(ordinals)} indexed sites')
    return lat.distance_matrix()[np.ix_(ordinals, ordinals)]


@dataclass(frozen=True)
class SAlphaProfile:
    '''
    row_sum = sup_x sum_y |A(x, y)| exp(alpha d(x, y)), col_sum the same over columns, and their
    geometric mean s_alpha.
    '''
    alpha: float
    row_sum: float
    col_sum: float

    @property
    def s_alpha(self) -> float:
        return math.sqrt(self.row_sum * self.col_sum)


def _weighted(matrix: np.ndarray, distances: np.ndarray, alpha: float) -> np.ndarray:
    magnitudes = np.abs(matrix)
    infinite = np.isinf(distances)
    if np.any(magnitudes[infinite] > 0):
        raise PreconditionError('Nonzero entry between disconnected sites')
    finite = np.where(infinite, 0.0, distances)
    return np.where(infinite, 0.0, magnitudes * np.exp(alpha * finite))


def s_alpha(
        A: np.ndarray, lat: Lattice, alpha: float,
        region: Optional[Region] = None) -> SAlphaProfile:
    '''
    :param A: Matrix indexed by the lattice ordinals, or by region.ordinals when given.
    :raises PreconditionError: If a nonzero entry pairs sites at infinite distance.
    '''
    if alpha < 0:
        raise PreconditionError(f'alpha must be non-negative, got {alpha}')
    A = np.asarray(A)
    weighted = _weighted(A, _distances(lat, A.shape[0], region), alpha)
    return SAlphaProfile(
        alpha=float(alpha),
        row_sum=float(weighted.sum(axis=1).max(initial=0.0)),
        col_sum=float(weighted.sum(axis=0).max(initial=0.0)))


@dataclass(frozen=True)
class CTBound:
    regime: str
    value: float
    rate: float
    s: float
    epsilon: float
    distance: float


def _bound(regime: str, epsilon: float, distance: float, s: float, rate: float) -> CTBound:
    if regime == 'small_mu':
        value = math.exp(-rate * distance) / (epsilon - s)
    else:
        value = 2.0 / epsilon * math.exp(-rate * distance)
    return CTBound(regime, value, rate, s, epsilon, distance)


def ct_bound(
        A: np.ndarray, lat: Lattice, z: complex, eps: float, x: Any, y: Any,
        mode: Union[int, str] = 'small_eps',
        alpha: Optional[float] = None,
        mu: Optional[float] = None,
        region: Optional[Region] = None) -> CTBound:
    '''
    Bound on |<x, (A - z)^-1 y>| for z outside the eps-pseudospectrum of A.

    - mode 1 ('small_mu'): exp(-mu d(x, y)) / (eps - S_mu), needs S_mu < eps (and mu < alpha when
      alpha is given).
    - mode 2 ('small_eps'): (2 / eps) exp(-alpha eps d(x, y) / (2 S_alpha)), needs eps < 2 S_alpha.

    :raises PreconditionError: If z is in the eps-pseudospectrum or the mode precondition fails.
    '''
    regime = {1: 'small_mu', 2: 'small_eps'}.get(mode, mode)  # type: ignore
    if regime not in REGIMES:
        raise PreconditionError(f'Unknown mode {mode!r}')
    if not eps > 0:
        raise PreconditionError(f'eps must be positive, got {eps}')
    A = np.asarray(A, dtype=complex)
    sigma = float(la.svdvals(z * np.eye(A.shape[0]) - A)[-1])
    if sigma < eps * (1 - _SLACK):
        raise PreconditionError(f'{z} lies in the {eps}-pseudospectrum (sigma_min={sigma})')

    ordinals = region.ordinals if region is not None else range(len(lat))
    ox, oy = lat.ordinal(x), lat.ordinal(y)
    if ox not in ordinals or oy not in ordinals:
        raise PreconditionError(f'{x} or {y} is not indexed by the matrix')
    distance = lat.distance(ox, oy)

    if regime == 'small_mu':
        if mu is None or mu < 0:
            raise PreconditionError('Mode 1 needs a non-negative mu')
        if alpha is not None and not mu < alpha:
            raise PreconditionError(f'Mode 1 needs mu < alpha, got {mu} >= {alpha}')
        s = s_alpha(A, lat, mu, region).s_alpha
        if not s < eps:
            raise PreconditionError(f'Mode 1 needs S_mu < eps, got {s} >= {eps}')
        return _bound(regime, eps, distance, s, mu)

    if alpha is None or not alpha > 0:
        raise PreconditionError('Mode 2 needs a positive alpha')
    s = s_alpha(A, lat, alpha, region).s_alpha
    if not eps < 2 * s:
        raise PreconditionError(f'Mode 2 needs eps < 2 S_alpha, got {eps} >= {2 * s}')
    return _bound(regime, eps, distance, s, alpha * eps / (2 * s))


ViolationRow = Tuple[float, float, Site, Site, float, float, bool]


@dataclass(frozen=True, eq=False)
class CTVerification:
    '''
    Per grid point and site pair: (re_z, im_z, x, y, measured, bound, ok). skipped counts grid
    points where the chosen epsilon is not admissible.
    '''
    rows: Tuple[ViolationRow, ...]
    skipped: int

    @property
    def violations(self) -> Tuple[ViolationRow, ...]:
        return tuple(row for row in self.rows if not row[6])

    @property
    def passed(self) -> bool:
        return not self.violations


def _deflated(sigma: float) -> float:
    return sigma * (1 - EPSILON_DEFLATION)


def ct_verify_region(
        A: np.ndarray, lat: Lattice, z_grid: Iterable[complex],
        eps_rule: Union[float, Callable[[float], float]] = _deflated,
        alpha: float = 1.0,
        region: Optional[Region] = None,
        executor: Optional[Executor] = None,
        observers: Optional[ProgressObservable] = None) -> CTVerification:
    '''
    Compares every resolvent entry |(A - z)^-1 (x, y)| with the Combes-Thomas bound.

    Mode 2 is used when eps < 2 S_alpha, mode 1 with mu = alpha otherwise.

    :param eps_rule: Fixed epsilon, or a function of sigma_min(z - A) giving epsilon. Points where
        epsilon exceeds sigma_min or is not positive are skipped.
    '''
    A = np.asarray(A, dtype=complex)
    size = A.shape[0]
    distances = _distances(lat, size, region)
    ordinals = list(region.ordinals) if region is not None else list(range(len(lat)))
    profile = s_alpha(A, lat, alpha, region)
    s = profile.s_alpha

    def evaluate(z: complex) -> Tuple[List[ViolationRow], bool]:
        shifted = A - z * np.eye(size)
        sigma = float(la.svdvals(shifted)[-1])
        eps = eps_rule(sigma) if callable(eps_rule) else float(eps_rule)
        if not 0 < eps <= sigma:
            return [], False
        measured = np.abs(la.inv(shifted))
        if eps < 2 * s:
            rate = alpha * eps / (2 * s)
            bounds = 2.0 / eps * np.exp(-rate * distances)
        else:
            # S_alpha <= eps / 2 < eps
            bounds = np.exp(-alpha * distances) / (eps - s)
        ok = measured <= bounds * (1 + _SLACK) + 1e-14
        rows = [
            (float(z.real), float(z.imag), lat.sites[ordinals[i]], lat.sites[ordinals[j]],
             float(measured[i, j]), float(bounds[i, j]), bool(ok[i, j]))
            for i in range(size) for j in range(size)]
        return rows, True

    points = [complex(z) for z in z_grid]
    results = executor.map(evaluate, points) if executor else map(evaluate, points)
    rows: List[ViolationRow] = []
    skipped = 0
    for index, (z, (found, used)) in enumerate(zip(points, results)):
        rows.extend(found)
        skipped += not used
        notify(observers, 'grid_point', index, z)

    report = CTVerification(tuple(rows), skipped)
    if report.violations:
        _logger.warning('%d Combes-Thomas violations', len(report.violations))
    return report
