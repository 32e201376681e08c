# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import logging

# Third-party imports
import numpy as np
import pytest
from numpy.testing import assert_allclose

# Local imports
from lindblad_locality.errors import ModelError
from lindblad_locality.lattice import Lattice, build_lattice
from lindblad_locality.model import (
    JumpOperator, LocalHamiltonianTerm, Locality, LindbladModel, anderson_hamiltonian,
    build_model, coherence_creation, compose_models, dephasing, embed, explicit,
    incoherent_hopping, model_to_json, validate_locality)
from .tools import chain


LOCALITY_FIXTURES = [
    # kind, params, (R, I, N, cover_count)
    ('dephasing', {}, (0, 1, 1.0, 1)),
    ('dephasing', {'rate': 4.0}, (0, 1, 2.0, 1)),
    ('coherence_creation', {}, (1, 1, 2.0, 2)),
    ('incoherent_hopping', {}, (1, 1, 1.0, 2)),
    ('incoherent_hopping', {'orientation': 'both'}, (1, 2, 1.0, 2)),
    ('anderson_hamiltonian', {'lam': 0.0}, (1, 0, 1.0, 2)),
]


@pytest.mark.parametrize('kind, params, expected', LOCALITY_FIXTURES)
def test_measured_locality(kind, params, expected):
    model = build_model(chain(6), kind, **params)
    report = validate_locality(model)

    assert (report.R_actual, report.I_actual, report.cover_count) == \
        (expected[0], expected[1], expected[3])
    assert report.N_actual == pytest.approx(expected[2])
    assert report.passed
    assert model.declared_locality == report.measured


def test_declared_locality_violation(caplog):
    with caplog.at_level(logging.WARNING):
        model = build_model(chain(3), 'dephasing', rate=4.0, declared=(0, 1, 1.0))

    assert not model.locality.passed
    assert model.declared_locality == Locality(0, 1, 1.0)
    assert 'declared locality' in caplog.text


def test_default_hopping_orientation():
    model = incoherent_hopping(chain(3))
    first = model.jump_operators[0]

    assert first.support.sites == ((0,), (1,))
    assert_allclose(first.matrix, [[0, 1], [0, 0]])


def test_ring_hopping_is_cyclic():
    lat = build_lattice('ring', n=4)
    model = incoherent_hopping(lat)
    targets = []
    for jump in model.jump_operators:
        row, col = np.argwhere(jump.matrix != 0)[0]
        targets.append((jump.support.ordinals[col], jump.support.ordinals[row]))

    assert sorted(targets) == [(0, 3), (1, 0), (2, 1), (3, 2)]


def test_explicit_orientation():
    lat = chain(3)
    model = incoherent_hopping(lat, orientation=[[0, 1]])

    assert_allclose(model.jump_operators[0].matrix, [[0, 0], [1, 0]])
    with pytest.raises(ModelError):
        incoherent_hopping(lat, orientation=[[0, 2]])
    with pytest.raises(ModelError):
        incoherent_hopping(lat, orientation='sideways')


def test_anderson_terms():
    lat = chain(4)
    model = anderson_hamiltonian(lat, 2.0, [0.5, 0.0, -1.5, 1.0])
    on_site = [t for t in model.hamiltonian_terms if len(t.support) == 1]

    assert len(on_site) == 3
    assert model.locality.N_actual == pytest.approx(3.0)
    assert_allclose(np.diag(model.hamiltonian()).real, [1.0, 0.0, -3.0, 2.0])
    assert model.hamiltonian()[0, 1] == -1


def test_anderson_laplacian():
    lat = chain(3)
    model = anderson_hamiltonian(lat, 0.0, h0='laplacian')
    laplacian = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    assert_allclose(model.hamiltonian(), laplacian)


@pytest.mark.parametrize('params', [
    {'potential': [1.0, 2.0]},
    {'lam': float('inf')},
    {'h0': 'graphene'},
])
def test_anderson_errors(params):
    with pytest.raises(ModelError):
        anderson_hamiltonian(chain(3), **params)


def test_negative_rate():
    with pytest.raises(ModelError):
        dephasing(chain(3), -1.0)


def test_terms_are_merged():
    lat = chain(2)
    support = lat.full_region()
    block = np.array([[0, 1], [1, 0]])
    model = LindbladModel(lat, [LocalHamiltonianTerm(support, block),
                                LocalHamiltonianTerm(support, block)])

    assert len(model.hamiltonian_terms) == 1
    assert_allclose(model.hamiltonian_terms[0].matrix, 2 * block)


@pytest.mark.parametrize('matrix', [
    [[0, 1], [0, 0]],
    [[1, 0], [0, 0]],
    [[1]],
])
def test_invalid_hamiltonian_term(matrix):
    with pytest.raises(ModelError):
        LocalHamiltonianTerm(chain(2).full_region(), matrix)


def test_disconnected_support():
    lat = Lattice([(0,), (1,), (5,)])
    jump = JumpOperator(lat.region([(0,), (5,)]), np.eye(2))
    with pytest.raises(ModelError):
        LindbladModel(lat, (), [jump])


def test_compose_models():
    lat = chain(4)
    composite = compose_models(coherence_creation(lat), dephasing(lat))

    assert composite.kind == 'composite'
    assert composite.declared_locality == Locality(1, 2, 2.0)
    assert len(composite.jump_operators) == 7
    with pytest.raises(ModelError):
        compose_models(dephasing(lat), dephasing(chain(5)))


def test_dissipation_matrix():
    model = dephasing(chain(3), 2.0)

    assert_allclose(model.dissipation(), 2 * np.eye(3))


def test_crossing_terms():
    lat = chain(4)
    model = compose_models(anderson_hamiltonian(lat, 0.0), dephasing(lat))
    hamiltonian, jumps = model.crossing_terms(lat.region([(0,), (1,)]))

    assert [t.support.sites for t in hamiltonian] == [((1,), (2,))]
    assert jumps == ()


def test_explicit_model():
    lat = chain(2)
    model = explicit(
        lat,
        hamiltonian=[{'support': [[0], [1]], 'matrix': [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]}],
        jumps=[{'support': [[1]], 'matrix': [[2]], 'label': 'decay'}])

    assert_allclose(model.hamiltonian(), [[0, -1j], [1j, 0]])
    assert model.jump_operators[0].label == 'decay'


def test_embed():
    lat = chain(4)
    region = lat.region([(1,), (2,), (3,)])
    placed = embed(np.array([[1, 2], [3, 4]]), lat.region([(2,), (3,)]), region)

    assert_allclose(placed, [[0, 0, 0], [0, 1, 2], [0, 3, 4]])
    with pytest.raises(ModelError):
        embed(np.eye(1), lat.region([(0,)]), region)


def test_unknown_kind():
    with pytest.raises(ModelError):
        build_model(chain(3), 'teleportation')


def test_json_document():
    document = model_to_json(dephasing(chain(2), 1.0))

    assert document['kind'] == 'dephasing'
    assert document['declared_locality'] == {'R': 0, 'I': 1, 'N': 1.0}
    assert document['jump_operators'][0] == {
        'support': [[0]], 'label': 'dephasing:(0,)', 'entries': [[1.0, 0.0]]}
