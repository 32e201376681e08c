# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Pseudospectra of finite matrices and the resolvent estimates for maximally dissipative
operators.

z belongs to the epsilon-pseudospectrum of A when the smallest singular value of z - A is below
epsilon, which is the same as a resolvent norm above 1/epsilon.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

# Third-party imports
import numpy as np
import scipy.linalg as la

# Local imports
from .errors import PreconditionError
from .progress import ProgressObservable, notify


_logger = logging.getLogger(__name__)

_RELATIVE_SLACK = 1e-9


def smallest_singular_value(matrix: np.ndarray, z: complex) -> float:
    shifted = z * np.eye(matrix.shape[0], dtype=complex) - matrix
    return float(la.svdvals(shifted)[-1])


def resolvent_norm(matrix: np.ndarray, z: complex) -> float:
    sigma = smallest_singular_value(matrix, z)
    return np.inf if sigma == 0 else 1.0 / sigma


@dataclass(frozen=True)
class ComplexGrid:
    '''Rectangle [re_min, re_max] x i[im_min, im_max] sampled at re_points x im_points.'''
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    re_points: int
    im_points: int

    def __post_init__(self) -> None:
        if self.re_points < 1 or self.im_points < 1:
            raise PreconditionError('A grid needs at least one point per axis')

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.re_min, self.re_max, self.re_points),
                np.linspace(self.im_min, self.im_max, self.im_points))

    def points(self) -> np.ndarray:
        '''Flat array of grid points, real part varying slowest.'''
        re, im = self.axes()
        return (re[:, None] + 1j * im[None, :]).ravel()


@dataclass(frozen=True, eq=False)
class PseudospectrumGrid:
    grid: ComplexGrid
    epsilon: float
    points: np.ndarray
    sigma_min: np.ndarray

    @property
    def member(self) -> np.ndarray:
        return self.sigma_min < self.epsilon

    @property
    def resolvent_norms(self) -> np.ndarray:
        with np.errstate(divide='ignore'):
            return 1.0 / self.sigma_min

    def rows(self) -> List[Tuple[float, float, float]]:
        '''(re_z, im_z, sigma_min) rows in grid order.'''
        return [(float(z.real), float(z.imag), float(s))
                for z, s in zip(self.points, self.sigma_min)]


def _sigma_sweep(
        matrix: np.ndarray, points: Iterable[complex],
        executor: Optional[Executor], observers: Optional[ProgressObservable]) -> np.ndarray:
    points = list(points)
    evaluate = lambda z: smallest_singular_value(matrix, z)  # noqa: E731
    results = executor.map(evaluate, points) if executor else map(evaluate, points)
    values = []
    for index, (z, value) in enumerate(zip(points, results)):
        values.append(value)
        notify(observers, 'grid_point', index, z)
    return np.array(values, dtype=float)


def pseudospectrum_grid(
        matrix: np.ndarray, grid: ComplexGrid, epsilon: float,
        executor: Optional[Executor] = None,
        observers: Optional[ProgressObservable] = None) -> PseudospectrumGrid:
    '''
    Smallest singular values of z - A over a grid, and epsilon-pseudospectrum membership.

    :param executor: Evaluates grid points concurrently when given; results keep grid order.
    '''
    if not epsilon > 0:
        raise PreconditionError(f'epsilon must be positive, got {epsilon}')
    matrix = np.asarray(matrix, dtype=complex)
    points = grid.points()
    return PseudospectrumGrid(
        grid, float(epsilon), points, _sigma_sweep(matrix, points, executor, observers))


@dataclass(frozen=True, eq=False)
class ResolventCheck:
    '''
    Pointwise comparison of measured resolvent norms against an upper bound.

    skipped counts the points where the bound does not apply.
    '''
    points: np.ndarray
    measured: np.ndarray
    bound: np.ndarray
    skipped: int

    @property
    def violations(self) -> np.ndarray:
        return np.flatnonzero(self.measured > self.bound * (1 + _RELATIVE_SLACK))

    @property
    def passed(self) -> bool:
        return self.violations.size == 0


def _check(points: List[complex], measured: List[float], bound: List[float],
           skipped: int) -> ResolventCheck:
    return ResolventCheck(
        np.array(points, dtype=complex), np.array(measured, dtype=float),
        np.array(bound, dtype=float), skipped)


def perturbation_bound_check(
        a: np.ndarray, b: np.ndarray, epsilon: float,
        points: Iterable[complex]) -> ResolventCheck:
    '''
    Checks ||(A + B - z)^-1|| <= 1 / (epsilon - ||B||) at every point outside the
    epsilon-pseudospectrum of A. Points inside it are skipped.

    :raises PreconditionError: If ||B|| >= epsilon.
    '''
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    size = float(np.linalg.norm(b, 2)) if b.size else 0.0
    if size >= epsilon:
        raise PreconditionError(f'Perturbation norm {size} is not below epsilon {epsilon}')

    kept, measured, bound = [], [], []
    skipped = 0
    for z in points:
        if smallest_singular_value(a, z) < epsilon:
            skipped += 1
            continue
        kept.append(z)
        measured.append(resolvent_norm(a + b, z))
        bound.append(1.0 / (epsilon - size))
    return _check(kept, measured, bound, skipped)


def dissipation_margin(a: np.ndarray) -> float:
    '''The largest lambda with Re<v, A v> <= -lambda |v|^2, i.e. lambda_min(-Re A).'''
    a = np.asarray(a, dtype=complex)
    return float(-la.eigvalsh((a + a.conj().T) / 2).max())


def dissipative_resolvent_check(
        a: np.ndarray, points: Iterable[complex]) -> ResolventCheck:
    '''
    For A with Re<v, A v> <= -lambda |v|^2 checks ||(z - A)^-1|| <= 1 / (Re z + lambda) at every
    point with Re z > -lambda. Positive reals z = epsilon thereby give epsilon outside the
    epsilon-pseudospectrum when lambda >= 0.
    '''
    a = np.asarray(a, dtype=complex)
    margin = dissipation_margin(a)
    kept, measured, bound = [], [], []
    skipped = 0
    for z in points:
        distance = z.real + margin
        if distance <= 0:
            skipped += 1
            continue
        kept.append(z)
        measured.append(resolvent_norm(a, z))
        bound.append(1.0 / distance)
    return _check(kept, measured, bound, skipped)


def box_half_width(a: np.ndarray) -> float:
    '''||Re A|| + ||Im A||, the half width of the box containing the numerical range.'''
    a = np.asarray(a, dtype=complex)
    re = (a + a.conj().T) / 2
    im = (a - a.conj().T) / 2j
    return float(np.linalg.norm(re, 2) + np.linalg.norm(im, 2))


def distance_to_box(z: complex, half_width: float) -> float:
    '''Distance from z to [-F, 0] x i[-F, F].'''
    dx = max(z.real - 0.0, -half_width - z.real, 0.0)
    dy = max(abs(z.imag) - half_width, 0.0)
    return float(np.hypot(dx, dy))


def box_exclusion_check(
        a: np.ndarray, points: Iterable[complex], epsilon: float) -> ResolventCheck:
    '''
    For maximally dissipative A checks that points at distance >= epsilon from the box
    (||Re A|| + ||Im A||)([-1, 0] + i[-1, 1]) lie outside the epsilon-pseudospectrum, i.e.
    ||(z - A)^-1|| <= 1 / epsilon there. Closer points are skipped.
    '''
    a = np.asarray(a, dtype=complex)
    width = box_half_width(a)
    kept, measured, bound = [], [], []
    skipped = 0
    for z in points:
        if distance_to_box(z, width) < epsilon:
            skipped += 1
            continue
        kept.append(z)
        measured.append(resolvent_norm(a, z))
        bound.append(1.0 / epsilon)
    return _check(kept, measured, bound, skipped)
