# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Exceptions raised by lindblad_locality.

Every exception derives from LindbladLocalityError, and from the built-in exception that matches
its nature, so callers can catch either.
'''

# System imports

# Third-party imports

# Local imports


class LindbladLocalityError(Exception):
    '''Base class of all errors raised by this package.'''


class LatticeError(LindbladLocalityError, ValueError):
    '''Invalid lattice geometry: duplicate sites, zero extent, unknown site.'''


class ModelError(LindbladLocalityError, ValueError):
    '''Invalid model or closure: non-Hermitian terms, bad orientation, inadmissible supports.'''


class PreconditionError(LindbladLocalityError, ValueError):
    '''An operation was called outside of the domain where it is defined.'''


class DimensionCapError(LindbladLocalityError, ValueError):
    '''A dense or vectorized representation would exceed the configured dimension cap.'''


class ConfigError(LindbladLocalityError, ValueError):
    '''Experiment configuration does not validate.'''


class ContourError(LindbladLocalityError, RuntimeError):
    '''No admissible integration contour exists for the requested operator.'''


class NumericalFailure(LindbladLocalityError, RuntimeError):
    '''A numerical result left its tolerance window (solver failure, lost positivity, ...).'''


class VerificationFailure(LindbladLocalityError, RuntimeError):
    '''A checked inequality that must hold did not.'''
