# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Least-squares fits of decay laws to (distance, magnitude) samples.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

# Third-party imports
import numpy as np

# Local imports
from .errors import PreconditionError


_logger = logging.getLogger(__name__)

#: Magnitudes at or below this value are numerical noise and are not fitted.
MAGNITUDE_FLOOR = 1e-13

MINIMUM_POINTS = 3


@dataclass(frozen=True)
class DecayFit:
    '''magnitude ~ C exp(-mu distance).'''
    C: float
    mu: float
    r_squared: float
    points: int

    def __call__(self, distance: float) -> float:
        return self.C * math.exp(-self.mu * distance)


@dataclass(frozen=True)
class PowerLawFit:
    '''value ~ C length^-beta.'''
    C: float
    beta: float
    r_squared: float
    points: int


def _linear_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if total == 0 else 1.0 - float(np.sum(residual ** 2)) / total
    return float(slope), float(intercept), r_squared


def _envelope(values: Iterable[Tuple[float, float]], floor: float) -> Dict[int, float]:
    envelope: Dict[int, float] = OrderedDict()
    for distance, magnitude in values:
        if not (math.isfinite(distance) and distance >= 0 and float(distance).is_integer()):
            raise PreconditionError(
                f'Decay fits need graph distances, got {distance!r}')
        magnitude = abs(magnitude)
        if magnitude <= floor:
            continue
        key = int(distance)
        envelope[key] = max(envelope.get(key, 0.0), magnitude)
    return envelope


def fit_exponential_decay(
        values: Iterable[Tuple[float, float]], floor: float = MAGNITUDE_FLOOR) -> DecayFit:
    '''
    Fits log magnitude against distance on the per-distance maximum of the magnitudes above
    floor.

    :param values: (distance, magnitude) pairs; distances are non-negative integers.
    :raises PreconditionError: With fewer than three distinct distances above the floor, or
        non-integer distances.
    '''
    envelope = _envelope(values, floor)
    if len(envelope) < MINIMUM_POINTS:
        raise PreconditionError(
            f'Need at least {MINIMUM_POINTS} distinct distances above {floor}, '
            f'got {len(envelope)}')
    distances = np.array(sorted(envelope), dtype=float)
    logs = np.log([envelope[int(d)] for d in distances])
    slope, intercept, r_squared = _linear_fit(distances, logs)
    _logger.debug('Exponential fit over %d distances: mu=%r r2=%r',
                  len(distances), -slope, r_squared)
    return DecayFit(C=math.exp(intercept), mu=-slope + 0.0, r_squared=r_squared,
                    points=len(distances))


def fit_power_law(lengths: Sequence[float], values: Sequence[float]) -> PowerLawFit:
    '''
    Fits log value against log length.

    :raises PreconditionError: With fewer than three points or non-positive entries.
    '''
    x = np.asarray(lengths, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.shape != y.shape or x.size < MINIMUM_POINTS:
        raise PreconditionError(f'Need at least {MINIMUM_POINTS} (length, value) pairs')
    if np.any(x <= 0) or np.any(y <= 0):
        raise PreconditionError('Power-law fits need positive lengths and values')
    slope, intercept, r_squared = _linear_fit(np.log(x), np.log(y))
    return PowerLawFit(C=math.exp(intercept), beta=-slope + 0.0, r_squared=r_squared,
                       points=int(x.size))
