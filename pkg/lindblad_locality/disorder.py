# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Dissipative Anderson models A_lambda = A0 + i lambda diag(omega) with iid random potentials:
Monte-Carlo fractional moments of their resolvents, the strong disorder threshold, and
disorder-averaged coherences of Abel averages.

Potentials are drawn from a counter-based generator keyed by (master_seed, realization), so
realizations can be evaluated in any order and on any number of workers.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
import scipy.linalg as la

# Local imports
from .decay import DecayFit, fit_exponential_decay  # noqa: F401
from .dynamics import DensityMatrix, abel_average
from .errors import NumericalFailure, PreconditionError
from .kernel import kernel_geometry
from .lattice import Lattice, Region
from .model import LindbladModel, anderson_hamiltonian, compose_models
from .progress import ProgressObservable, notify
from .pseudospectra import box_half_width


_logger = logging.getLogger(__name__)

DISTRIBUTIONS = ('uniform', 'triangular')
DEFAULT_S = 0.5
MEDIAN_BLOCKS = 10
MAX_ATTEMPTS = 8
ENERGY_POINTS = 11

#: Condition number above which a realization is treated as singular.
SINGULAR_CONDITION = 1e14

Pair = Tuple[Any, Any]


@dataclass(frozen=True)
class DisorderSpec:
    '''
    iid single-site distribution of the potential, disorder strength and master seed.

    - 'uniform': on [low, high].
    - 'triangular': on [low, high] with its peak at mode (the midpoint by default).
    '''
    distribution: str = 'uniform'
    lam: float = 1.0
    master_seed: int = 0
    low: float = 0.0
    high: float = 1.0
    mode: Optional[float] = None

    def __post_init__(self) -> None:
        if self.distribution not in DISTRIBUTIONS:
            raise PreconditionError(
                f'Unknown distribution {self.distribution!r}, expected one of {DISTRIBUTIONS}')
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.low < self.high):
            raise PreconditionError(f'Bad support [{self.low}, {self.high}]')
        if self.distribution == 'triangular':
            peak = (self.low + self.high) / 2 if self.mode is None else self.mode
            if not self.low <= peak <= self.high:
                raise PreconditionError(f'Triangular mode {peak} outside the support')
            object.__setattr__(self, 'mode', float(peak))
        if self.master_seed < 0:
            raise PreconditionError('master_seed must be non-negative')

    @property
    def density_sup(self) -> float:
        '''||p||_inf.'''
        width = self.high - self.low
        return 1.0 / width if self.distribution == 'uniform' else 2.0 / width

    def with_lambda(self, lam: float) -> DisorderSpec:
        return DisorderSpec(self.distribution, lam, self.master_seed, self.low, self.high,
                            self.mode)


def _generator(spec: DisorderSpec, realization: int, attempt: int) -> np.random.Generator:
    key = (realization,) if attempt == 0 else (realization, attempt)
    sequence = np.random.SeedSequence(entropy=spec.master_seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(sequence))


def sample_potential(
        spec: DisorderSpec, lat: Lattice, realization_index: int,
        attempt: int = 0) -> np.ndarray:
    '''
    One value per site, drawn in ordinal order.

    :param attempt: Re-draw counter, 0 for the first draw of a realization.
    '''
    rng = _generator(spec, realization_index, attempt)
    size = len(lat)
    if spec.distribution == 'uniform':
        return rng.uniform(spec.low, spec.high, size=size)
    return rng.triangular(spec.low, spec.mode, spec.high, size=size)


@dataclass(frozen=True, eq=False)
class MomentEstimate:
    '''Monte-Carlo estimate of E|G(x, y)|^s over n_samples realizations.'''
    s: float
    z: complex
    pair: Pair
    mean: float
    std_error: float
    median_of_means: float
    n_samples: int
    samples: np.ndarray
    distance: float = math.nan


def median_of_means(samples: np.ndarray, blocks: int = MEDIAN_BLOCKS) -> float:
    '''Median of the means of consecutive blocks.'''
    samples = np.asarray(samples, dtype=float)
    blocks = max(1, min(blocks, samples.size))
    return float(np.median([chunk.mean() for chunk in np.array_split(samples, blocks)]))


def _estimates(
        samples: np.ndarray, s: float, z: complex, pairs: Sequence[Pair],
        distances: Sequence[float]) -> List[MomentEstimate]:
    count = samples.shape[0]
    estimates = []
    for index, pair in enumerate(pairs):
        column = samples[:, index]
        error = float(column.std(ddof=1) / math.sqrt(count)) if count > 1 else math.inf
        estimates.append(MomentEstimate(
            s=float(s), z=complex(z), pair=pair, mean=float(column.mean()), std_error=error,
            median_of_means=median_of_means(column), n_samples=count, samples=column,
            distance=float(distances[index])))
    return estimates


def _pair_ordinals(lat: Lattice, pairs: Sequence[Pair]) -> Tuple[np.ndarray, np.ndarray]:
    return (np.array([lat.ordinal(x) for x, _ in pairs], dtype=int),
            np.array([lat.ordinal(y) for _, y in pairs], dtype=int))


def fractional_moment_mc(
        A0: np.ndarray, lat: Lattice, spec: DisorderSpec, s: float, z: complex,
        pairs: Sequence[Pair], n_samples: int,
        executor: Optional[Executor] = None,
        observers: Optional[ProgressObservable] = None) -> List[MomentEstimate]:
    '''
    Estimates E|<x, (z - A0 - i lambda V) y>|^s for every pair.

    Singular realizations are drawn again and reported through the 'resampled' event.

    :param A0: Matrix indexed by the lattice ordinals.
    :raises PreconditionError: If s is not in (0, 1) or n_samples is not positive.
    :raises NumericalFailure: If a realization stays singular after repeated draws.
    '''
    if not 0 < s < 1:
        raise PreconditionError(f's must lie in (0, 1), got {s}')
    if n_samples < 1:
        raise PreconditionError(f'n_samples must be positive, got {n_samples}')
    A0 = np.asarray(A0, dtype=complex)
    size = len(lat)
    if A0.shape != (size, size):
        raise PreconditionError(f'A0 of shape {A0.shape} does not match {size} sites')
    rows, columns = _pair_ordinals(lat, pairs)
    targets, inverse = np.unique(columns, return_inverse=True)
    shifted = z * np.eye(size) - A0
    units = np.eye(size, dtype=complex)[:, targets]

    def realization(index: int) -> np.ndarray:
        for attempt in range(MAX_ATTEMPTS):
            potential = sample_potential(spec, lat, index, attempt)
            matrix = shifted - 1j * spec.lam * np.diag(potential)
            try:
                lu, pivots = la.lu_factor(matrix)
                if np.abs(np.diag(lu)).min() * SINGULAR_CONDITION <= la.norm(matrix, 1):
                    raise la.LinAlgError('near singular pivot')
                solved = la.lu_solve((lu, pivots), units)
            except (la.LinAlgError, ValueError) as error:
                _logger.warning('Realization %d attempt %d singular: %s', index, attempt, error)
                notify(observers, 'resampled', index, attempt + 1)
                continue
            return np.abs(solved[rows, inverse]) ** s
        raise NumericalFailure(f'Realization {index} singular after {MAX_ATTEMPTS} draws')

    indices = range(n_samples)
    results = executor.map(realization, indices) if executor else map(realization, indices)
    samples = np.empty((n_samples, len(pairs)))
    for index, values in zip(indices, results):
        samples[index] = values
        notify(observers, 'realization', index, values)

    distances = [lat.distance(x, y) for x, y in zip(rows, columns)]
    return _estimates(samples, s, z, pairs, distances)


def apriori_bound(spec: DisorderSpec, s: float = DEFAULT_S, diagonal: bool = True) -> float:
    '''
    2^s ||p||^s / ((1 - s) |lambda|^s) on the diagonal, 4^s ||p||^s / ((1 - s) |lambda|^s) off it.
    '''
    if not 0 < s < 1:
        raise PreconditionError(f's must lie in (0, 1), got {s}')
    if spec.lam == 0:
        return math.inf
    base = 2.0 if diagonal else 4.0
    return (base * spec.density_sup) ** s / ((1 - s) * abs(spec.lam) ** s)


@dataclass(frozen=True)
class LocalizationThreshold:
    s: float
    mu: float
    C_s: float
    lambda_s_mu: float

    @property
    def lambda_min(self) -> float:
        '''Smallest |lambda| above which the strong disorder estimate applies.'''
        return self.lambda_s_mu ** (1 / self.s)

    def applies(self, lam: float) -> bool:
        return abs(lam) ** self.s > self.lambda_s_mu

    def prefactor(self, lam: float) -> Optional[float]:
        '''C_s / (|lambda|^s - lambda_s(mu)), None below the threshold.'''
        if not self.applies(lam):
            return None
        return self.C_s / (abs(lam) ** self.s - self.lambda_s_mu)

    def to_json(self) -> dict:
        return {'s': self.s, 'mu': self.mu, 'C_s': self.C_s,
                'lambda_s_mu': self.lambda_s_mu, 'lambda_min': self.lambda_min}


def localization_threshold(
        A0: np.ndarray, lat: Lattice, spec: DisorderSpec, s: float = DEFAULT_S,
        mu: float = 1.0) -> LocalizationThreshold:
    '''
    lambda_s(mu) = C_s sup_x sum_{y != x} exp(mu d(x, y)) |A0(x, y)|^s with
    C_s = 2^s ||p||^s / (1 - s).

    :raises PreconditionError: If s is not in (0, 1), mu is negative, or a nonzero entry pairs
        disconnected sites.
    '''
    if not 0 < s < 1:
        raise PreconditionError(f's must lie in (0, 1), got {s}')
    if mu < 0:
        raise PreconditionError(f'mu must be non-negative, got {mu}')
    A0 = np.asarray(A0)
    distances = lat.distance_matrix()
    magnitudes = np.abs(A0) ** s
    np.fill_diagonal(magnitudes, 0.0)
    infinite = np.isinf(distances)
    if np.any(magnitudes[infinite] > 0):
        raise PreconditionError('Nonzero entry between disconnected sites')
    weights = np.where(infinite, 0.0, magnitudes * np.exp(mu * np.where(infinite, 0, distances)))
    C_s = (2 * spec.density_sup) ** s / (1 - s)
    return LocalizationThreshold(
        s=float(s), mu=float(mu), C_s=C_s,
        lambda_s_mu=float(C_s * weights.sum(axis=1).max(initial=0.0)))


def energy_sweep(A0: np.ndarray, count: int = ENERGY_POINTS) -> np.ndarray:
    '''count evenly spaced energies across the box containing the numerical range of A0.'''
    width = box_half_width(A0)
    return np.linspace(-width, width, count)


# Disorder-averaged coherences

@dataclass(frozen=True)
class ModelFamily:
    '''
    Random Lindbladians: base plus the Anderson Hamiltonian of strength spec.lam for each
    potential.

    :param h0: Deterministic part of the Anderson Hamiltonian, see anderson_hamiltonian.
    '''
    base: LindbladModel
    h0: str = 'none'

    @property
    def lattice(self) -> Lattice:
        return self.base.lattice

    def realize(self, lam: float, potential: Sequence[float]) -> LindbladModel:
        if lam == 0 and self.h0 == 'none':
            return self.base
        return compose_models(
            self.base, anderson_hamiltonian(self.lattice, lam, list(potential), h0=self.h0))


def disordered_coherence_pairs_mc(
        family: ModelFamily, spec: DisorderSpec, x0: Any, pairs: Sequence[Pair],
        epsilon: float, n_samples: int,
        executor: Optional[Executor] = None,
        observers: Optional[ProgressObservable] = None) -> List[MomentEstimate]:
    '''
    Estimates E|<x, A_eps(|x0><x0|) y>| for every pair (x, y), one Abel average per realization.
    The estimates carry s = 1 and z = epsilon.
    Every pair shares the realizations, so the estimates are correlated across pairs.
    '''
    if n_samples < 1:
        raise PreconditionError(f'n_samples must be positive, got {n_samples}')
    lat = family.lattice
    start = DensityMatrix.site(len(lat), lat.ordinal(x0))
    rows, columns = _pair_ordinals(lat, pairs)

    def realization(index: int) -> np.ndarray:
        model = family.realize(spec.lam, sample_potential(spec, lat, index))
        averaged = abel_average(model, start, epsilon)
        return np.abs(averaged.matrix[rows, columns])

    indices = range(n_samples)
    results = executor.map(realization, indices) if executor else map(realization, indices)
    samples = np.empty((n_samples, len(pairs)))
    for index, values in zip(indices, results):
        samples[index] = values
        notify(observers, 'realization', index, values)

    distances = [lat.distance(x, y) for x, y in zip(rows, columns)]
    return _estimates(samples, 1.0, epsilon, pairs, distances)


def disordered_coherence_mc(
        family: ModelFamily, spec: DisorderSpec, x0: Any, x: Any, y: Any,
        epsilon: float, n_samples: int,
        executor: Optional[Executor] = None,
        observers: Optional[ProgressObservable] = None) -> MomentEstimate:
    '''Estimates E|<x, A_eps(|x0><x0|) y>| for the single pair (x, y).'''
    return disordered_coherence_pairs_mc(
        family, spec, x0, [(x, y)], epsilon, n_samples, executor, observers)[0]


@dataclass(frozen=True)
class SupportSplit:
    '''Sites whose potential enters D on Lambda_x and on Lambda_y.'''
    sites_x: Tuple[Any, ...]
    sites_y: Tuple[Any, ...]

    @property
    def disjoint(self) -> bool:
        return not set(self.sites_x) & set(self.sites_y)


def independent_supports(
        family: ModelFamily, x: Any, y: Any, geometry: str = 'three_block') -> SupportSplit:
    '''
    Collects the on-site potential terms inside each kernel block. A realization only enters
    D on a block through these sites.
    '''
    lat = family.lattice
    probe = family.realize(1.0, np.ones(len(lat)))
    R = max(probe.declared_locality.R, family.base.declared_locality.R)
    region_x, region_y = kernel_geometry(lat, x, y, R, geometry)

    def potential_sites(region: Region) -> Tuple[Any, ...]:
        return tuple(
            lat.sites[term.support.ordinals[0]] for term in probe.terms_within(region)[0]
            if len(term.support) == 1)

    split = SupportSplit(potential_sites(region_x), potential_sites(region_y))
    if not split.disjoint:
        _logger.warning('Blocks around %s and %s share potential sites', x, y)
    return split
