# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import math
from fractions import Fraction

# Third-party imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Local imports
from lindblad_locality.errors import LatticeError
from lindblad_locality.lattice import (
    EAGER_DISTANCE_LIMIT, Lattice, Region, ball, bipartition_boundaries, build_lattice,
    complement, graph_distance, inradius, lattice_from_json, lattice_to_json, r_boundary,
    two_block_regions)
from .tools import chain


DISTANCE_FIXTURES = [
    # kind, params, x, y, distance
    ('chain', {'n': 7}, (0,), (6,), 6),
    ('ring', {'n': 7}, (0,), (6,), 1),
    ('ring', {'n': 8}, (0,), (4,), 4),
    ('box', {'extents': [3, 4]}, (0, 0), (2, 3), 5),
    ('box', {'extents': [2, 2, 2]}, (0, 0, 0), (1, 1, 1), 3),
]


@pytest.mark.parametrize('kind, params, x, y, expected', DISTANCE_FIXTURES)
def test_distances(kind, params, x, y, expected):
    lat = build_lattice(kind, **params)

    assert graph_distance(lat, x, y) == expected
    assert graph_distance(lat, y, x) == expected
    assert graph_distance(lat, x, x) == 0


def test_chain_structure():
    lat = chain(5)

    assert len(lat) == 5
    assert lat.dimension == 1
    assert lat.edges == ((0, 1), (1, 2), (2, 3), (3, 4))
    assert lat.neighbours(0) == (1,)
    assert lat.degree(2) == 2
    assert (3,) in lat
    assert (5,) not in lat


def test_box_degrees():
    lat = build_lattice('box', extents=[3, 3])

    assert lat.degree(lat.ordinal((1, 1))) == 4
    assert lat.degree(lat.ordinal((0, 0))) == 2
    assert lat.degree(lat.ordinal((0, 1))) == 3


def test_disconnected_sites():
    lat = Lattice([(0,), (1,), (5,)])

    assert math.isinf(graph_distance(lat, (0,), (5,)))
    assert lat.distances_from(0).tolist() == [0, 1, -1]
    assert np.isinf(lat.distance_matrix()[0, 2])
    assert math.isinf(lat.full_region().diameter())


@pytest.mark.parametrize('sites', [
    [],
    [(0,), (0,)],
    [(0,), (0, 1)],
])
def test_invalid_sites(sites):
    with pytest.raises(LatticeError):
        Lattice(sites)


def test_unknown_site():
    with pytest.raises(LatticeError):
        chain(3).ordinal((7,))


def test_unknown_kind():
    with pytest.raises(LatticeError):
        build_lattice('hexagonal', n=3)


def test_self_loop():
    with pytest.raises(LatticeError):
        Lattice([(0,), (1,)], extra_edges=[((0,), (0,))])


@pytest.mark.parametrize('radius, expected', [
    (0, [(3,)]),
    (1, [(2,), (3,), (4,)]),
    (Fraction(5, 3), [(2,), (3,), (4,)]),
    (2.5, [(1,), (2,), (3,), (4,), (5,)]),
])
def test_ball(radius, expected):
    assert list(ball(chain(7), (3,), radius).sites) == expected


def test_negative_ball():
    with pytest.raises(LatticeError):
        ball(chain(3), (0,), -1)


def test_complement_and_inradius():
    lat = chain(7)
    region = lat.region([(0,), (1,), (2,)])

    assert complement(region).sites == ((3,), (4,), (5,), (6,))
    assert inradius(region) == 3
    assert math.isinf(inradius(lat.full_region()))


def test_r_boundary():
    lat = chain(6)
    region = lat.region([(0,), (1,), (2,)])

    assert r_boundary(region, 1).sites == ((2,), (3,))
    assert r_boundary(region, 2).sites == ((1,), (2,), (3,), (4,))


def test_two_block_regions():
    lat = chain(10)
    near, far = two_block_regions(lat, (0,), (6,))

    assert near.sites == ((0,), (1,), (2,))
    assert len(far) == 7
    assert (6,) in far.sites


def test_region_operations():
    lat = chain(6)
    a = lat.region([(0,), (1,)])
    b = lat.region([(4,)])

    assert a <= lat.full_region()
    assert a.union(b).ordinals == (0, 1, 4)
    assert a.distance_to(b.ordinals) == 3
    assert a.diameter() == 1
    assert a.position(1) == 1
    assert a.to_json() == [[0], [1]]
    with pytest.raises(LatticeError):
        a.position(4)
    with pytest.raises(LatticeError):
        Region(lat, [6])


def test_bipartition_boundaries():
    lat = chain(6)
    half = lat.region([(0,), (1,), (2,)])
    family = bipartition_boundaries(lat, half, 1)

    assert [region.sites for region in family.crossing_sets] == [((2,), (3,))]
    assert family.r_boundary[half].sites == ((2,), (3,))
    assert all(region <= half for region in family.inner_boundary[half])
    assert lat.region([(2,)]) in family.inner_boundary[half]


def test_json_document():
    lat = build_lattice('ring', n=5)
    document = lattice_to_json(lat)

    assert document['dimension'] == 1
    assert document['extra_edges'] == [[[0], [4]]]
    assert lattice_from_json(document) == lat


def test_lazy_distances():
    n = EAGER_DISTANCE_LIMIT + 10
    lat = chain(n)

    assert graph_distance(lat, (0,), (n - 1,)) == n - 1
    assert lat.distance(5, 2) == 3


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3), st.data())
def test_box_distance_is_l1(extents, data):
    lat = build_lattice('box', extents=extents)
    x = data.draw(st.sampled_from(lat.sites))
    y = data.draw(st.sampled_from(lat.sites))

    assert graph_distance(lat, x, y) == sum(abs(a - b) for a, b in zip(x, y))
