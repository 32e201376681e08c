# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import json

# Third-party imports
import numpy as np

# Local imports
from lindblad_locality.lattice import build_lattice
from lindblad_locality.model import (
    LindbladModel, anderson_hamiltonian, compose_models, dephasing)


# Model kinds exposed through the test entry-point group


def uniform_dephasing(lattice, rate=1.0):
    model = dephasing(lattice, rate)
    return LindbladModel(lattice, (), model.jump_operators, kind='uniform_dephasing',
                         parameters={'rate': rate})


def chain_hopping(lattice):
    return anderson_hamiltonian(lattice, 0.0)


# Builders


def chain(n):
    return build_lattice('chain', n=n)


def gapped_chain(n, rate=1.0):
    '''Nearest-neighbour hopping plus uniform dephasing on a chain.'''
    lat = chain(n)
    return compose_models(anderson_hamiltonian(lat, 0.0), dephasing(lat, rate))


def random_dissipative(size, seed=0):
    '''A random matrix with negative semi-definite Hermitian part.'''
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    h = (h + h.conj().T) / 2
    b = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return -1j * h - 0.5 * b.conj().T @ b


def write_config(path, document):
    path.write_text(json.dumps(document), encoding='utf-8')
    return path
