# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
from concurrent.futures import ThreadPoolExecutor

# Third-party imports
import numpy as np
import pytest
from numpy.testing import assert_allclose

# Local imports
from lindblad_locality.dissipative import build_dissipative
from lindblad_locality.dynamics import DensityMatrix
from lindblad_locality.errors import ContourError, PreconditionError
from lindblad_locality.kernel import (
    Contour, boundary_norm_bound, build_contour, coherence_bound_report, compute_kernel,
    kernel_geometry, local_abel_block, verify_integral_representation)
from lindblad_locality.model import anderson_hamiltonian
from .tools import chain, gapped_chain


def _full(model):
    return build_dissipative(model, model.lattice.full_region())


def test_contour_nodes():
    contour = Contour(right=0.0, left=-2.0, top=2.0, margin=0.5, half_width=1.5,
                      nodes_per_side=32)
    points, weights = contour.nodes()

    assert len(points) == len(weights) == 128
    assert np.all(points[:32].real == 0.0)
    assert abs(weights.sum()) < 1e-12
    assert contour.winding_number(-1 + 0.5j) == pytest.approx(1.0)
    assert abs(contour.winding_number(1 + 0j)) < 1e-10
    assert contour.encloses(-1 + 0j)
    assert not contour.encloses(0.5 + 0j)
    with pytest.raises(PreconditionError):
        contour.nodes(20)


def test_gapped_contour():
    D = _full(gapped_chain(5, 1.0))
    contour = build_contour(D, 0.2)

    assert contour.right == 0.0
    assert contour.left == pytest.approx(-(contour.half_width + 0.5))
    assert contour.top == -contour.left


def test_ungapped_contour():
    D = _full(anderson_hamiltonian(chain(5), 0.0))

    assert build_contour(D, 0.2).right == pytest.approx(0.1)
    with pytest.raises(ContourError):
        build_contour(D, 0.2, right_offset=0.0)


@pytest.mark.parametrize('params, error', [
    ({'epsilon': 0.0}, PreconditionError),
    ({'epsilon': 0.2, 'margin': 0.0}, PreconditionError),
    ({'epsilon': 0.2, 'scale': 0.5}, PreconditionError),
    ({'epsilon': 0.2, 'right_offset': 0.2}, ContourError),
])
def test_contour_errors(params, error):
    with pytest.raises(error):
        build_contour(_full(gapped_chain(4)), **params)


def test_three_block_geometry():
    region_x, region_y = kernel_geometry(chain(10), (0,), (9,), 1)

    assert region_x.sites == ((0,), (1,), (2,), (3,))
    assert region_y.sites == ((6,), (7,), (8,), (9,))


def test_two_block_geometry():
    region_x, region_y = kernel_geometry(chain(6), (0,), (5,), 1, 'two_block')

    assert region_x.sites == ((0,), (1,), (2,))
    assert len(region_x) + len(region_y) == 6


@pytest.mark.parametrize('x, y, geometry', [
    ((0,), (0,), 'three_block'),
    ((0,), (2,), 'three_block'),
    ((0,), (1,), 'two_block'),
    ((0,), (9,), 'five_block'),
])
def test_geometry_errors(x, y, geometry):
    with pytest.raises(PreconditionError):
        kernel_geometry(chain(10), x, y, 1, geometry)


def test_kernel_matches_decoupled_average():
    model = gapped_chain(10, 0.8)
    rho0 = DensityMatrix.superposition(10, [0, 9])
    kernel = compute_kernel(model, (0,), (9,), 0.5)

    assert kernel.converged
    assert kernel.values.shape == (4, 4)
    expected = local_abel_block(model, (0,), (9,), 0.5, rho0)
    assert 0.5 * kernel[(0,), (9,)] * 0.5 == pytest.approx(expected, abs=1e-8)


def test_concurrent_kernel():
    model = gapped_chain(10)
    serial = compute_kernel(model, (0,), (9,), 0.3)
    with ThreadPoolExecutor(max_workers=2) as executor:
        concurrent = compute_kernel(model, (0,), (9,), 0.3, executor=executor)

    assert_allclose(serial.values, concurrent.values)


@pytest.mark.parametrize('model, epsilon', [
    (gapped_chain(10), 0.3),
    (gapped_chain(10, 0.8), 0.5),
])
def test_kernel_independent_of_contour(model, epsilon):
    default = compute_kernel(model, (0,), (9,), epsilon)
    enlarged = compute_kernel(model, (0,), (9,), epsilon, margin=1.1 * 0.5, scale=1.1)

    assert default.converged and enlarged.converged
    assert_allclose(
        enlarged.values, default.values,
        rtol=1e-8, atol=1e-8 * np.abs(default.values).max())


def test_kernel_rows():
    kernel = compute_kernel(gapped_chain(10), (0,), (9,), 0.5)
    rows = kernel.rows()

    assert len(rows) == 16
    assert rows[0][:4] == ((0,), (6,), 0, 3)
    assert rows[0][6] == pytest.approx(abs(rows[0][4] + 1j * rows[0][5]))
    assert len(kernel.decay_samples()) == 16


def test_integral_representation():
    model = gapped_chain(6, 0.5)
    half = model.lattice.region([(0,), (1,), (2,)])
    rho = np.zeros((6, 6), dtype=complex)
    rho[0, 4] = 1.0
    rho[2, 3] = 0.5j

    assert verify_integral_representation(model, half, rho, 0.4) < 1e-8
    with pytest.raises(PreconditionError):
        verify_integral_representation(model, half, np.eye(6), 0.4)


def test_boundary_norm_bound():
    model = gapped_chain(4)
    half = model.lattice.region([(0,), (1,)])

    assert boundary_norm_bound(model, half) == pytest.approx(2.0)


@pytest.mark.parametrize('epsilon', [0.1, 0.5])
def test_coherence_bound(epsilon):
    model = gapped_chain(10, 0.5)
    rho0 = DensityMatrix.superposition(10, [0, 9])
    report = coherence_bound_report(model, rho0, (0,), (9,), epsilon)
    document = report.to_json()

    assert report.satisfied
    assert report.lhs <= report.rhs + 1e-10
    assert document['x'] == [0]
    assert document['closure'] == {'kind': 'none'}
