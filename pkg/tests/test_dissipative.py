# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import math

# Third-party imports
import numpy as np
import pytest
from numpy.testing import assert_allclose

# Local imports
from lindblad_locality.dissipative import (
    BoundaryClosure, build_dissipative, dark_states, dirichlet_gap, inradius_gap_check,
    random_box_half_width, rank_one_denominator_infimum, rank_one_resolvent_check,
    spectral_envelope)
from lindblad_locality.errors import ModelError
from lindblad_locality.lattice import Region, build_lattice
from lindblad_locality.model import (
    LindbladModel, LocalHamiltonianTerm, anderson_hamiltonian, coherence_creation, dephasing,
    incoherent_hopping)
from .tools import chain, gapped_chain, random_dissipative


def test_full_region_operator():
    model = gapped_chain(3, 0.5)
    D = build_dissipative(model, model.lattice.full_region())

    assert D.size == 3
    assert D.matrix[0, 1] == pytest.approx(1j)
    assert_allclose(D.hermitian_part(), -0.25 * np.eye(3))
    assert_allclose(D.anti_hermitian_part(), -model.hamiltonian())
    assert D.position((2,)) == 2


def test_restriction_drops_crossing_terms():
    model = coherence_creation(chain(4))
    region = model.lattice.region([(0,), (1,)])
    D = build_dissipative(model, region)

    assert_allclose(D.matrix, [[-1, 1], [1, -1]])


def test_dirichlet_closure():
    model = coherence_creation(chain(6))
    region = model.lattice.region([(0,), (1,), (2,)])
    terms = BoundaryClosure.dirichlet().realize(model, region)

    assert [j.support.sites for j in terms.jumps] == [((2,),)]
    assert terms.jumps[0].matrix[0, 0] == pytest.approx(math.sqrt(2))


def test_dephasing_site_closure_outside_region():
    model = coherence_creation(chain(6))
    region = model.lattice.region([(0,), (1,), (2,)])
    closure = BoundaryClosure.dephasing_site([2, 3], rate=4.0)
    terms = closure.realize(model, region)

    assert len(terms.jumps) == 1
    assert terms.jumps[0].matrix[0, 0] == pytest.approx(2.0)
    assert closure.to_json() == {'kind': 'dephasing_site', 'sites': [[2], [3]], 'rate': 4.0}


def test_inadmissible_closure():
    model = coherence_creation(chain(10))
    region = model.lattice.region([(i,) for i in range(5)])
    closure = BoundaryClosure.explicit(jumps=[{'support': [[0]], 'matrix': [[1]]}])

    with pytest.raises(ModelError):
        closure.realize(model, region)


@pytest.mark.parametrize('params', [
    {'kind': 'absorbing'},
    {'kind': 'dirichlet', 'rate': -1.0},
    {'kind': 'dirichlet', 'rate': float('nan')},
])
def test_invalid_closure(params):
    with pytest.raises(ModelError):
        BoundaryClosure(**params)


def test_region_from_other_lattice():
    with pytest.raises(ModelError):
        build_dissipative(dephasing(chain(3)), chain(4).full_region())


@pytest.mark.parametrize('model', [
    gapped_chain(5, 0.7),
    coherence_creation(chain(5)),
    incoherent_hopping(build_lattice('ring', n=5)),
    anderson_hamiltonian(build_lattice('box', extents=[2, 3]), 1.5, [1, -1, 0.5, 0, 2, -2]),
])
def test_spectral_envelope(model):
    envelope = spectral_envelope(build_dissipative(model, model.lattice.full_region()))

    assert envelope.consistent
    assert envelope.gap >= -1e-12
    assert envelope.half_width <= random_box_half_width(model) * (1 + 1e-10)


@pytest.mark.parametrize('n', [3, 5, 8])
def test_dirichlet_gap_of_interval(n):
    model = coherence_creation(chain(n + 2))
    region = model.lattice.region([(i,) for i in range(1, n + 1)])

    assert dirichlet_gap(model, region) == pytest.approx(
        4 * math.sin(math.pi / (2 * (n + 1))) ** 2, abs=1e-10)


def test_inradius_gap():
    model = coherence_creation(chain(5))
    region = model.lattice.region([(1,), (2,), (3,)])
    report = inradius_gap_check(model, region)

    assert report.inradius == 2
    assert report.bound == pytest.approx(1 / 6)
    assert report.gap == pytest.approx(2 - math.sqrt(2))
    assert report.passed


@pytest.mark.parametrize('seed', range(3))
def test_rank_one_resolvent(seed):
    report = rank_one_resolvent_check(random_dissipative(4, seed), 1, 1.0 + 0.5j)

    assert report.matching == 'plus'
    assert report.deviation_plus < 1e-10


def test_rank_one_denominator_infimum():
    value = rank_one_denominator_infimum(-np.eye(2), 0, 0.0, [0.5, 1.0])

    assert value == pytest.approx(2 - 1 / 1.5)


def test_dark_states():
    states = dark_states(incoherent_hopping(chain(3)))

    assert len(states) == 1
    assert_allclose(np.abs(states[0]), [1, 0, 0], atol=1e-12)
    assert dark_states(gapped_chain(3)) == ()


@pytest.mark.parametrize('tolerance, count', [
    (1e-10, 0),
    (1e-6, 1),
])
def test_dark_state_tolerance(tolerance, count):
    hopping = incoherent_hopping(chain(3))
    coupling = LocalHamiltonianTerm(Region(hopping.lattice, (0, 1)), [[0, 1e-7], [1e-7, 0]])
    model = LindbladModel(hopping.lattice, [coupling], hopping.jump_operators)

    assert len(dark_states(model, tolerance)) == count
