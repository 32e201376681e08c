# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import math
from concurrent.futures import ThreadPoolExecutor

# Third-party imports
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

# Local imports
from lindblad_locality.disorder import (
    DisorderSpec, ModelFamily, apriori_bound, disordered_coherence_mc,
    disordered_coherence_pairs_mc, energy_sweep,
    fractional_moment_mc, independent_supports, localization_threshold, median_of_means,
    sample_potential)
from lindblad_locality.dynamics import DensityMatrix, abel_average
from lindblad_locality.errors import PreconditionError
from lindblad_locality.model import anderson_hamiltonian
from lindblad_locality.progress import ProgressObservable
from .tools import chain, gapped_chain


def _a0(n, rate=1.0):
    model = gapped_chain(n, rate)
    return -1j * model.hamiltonian() - 0.5 * model.dissipation(), model


@pytest.mark.parametrize('params', [
    {'distribution': 'cauchy'},
    {'low': 1.0, 'high': 1.0},
    {'low': 0.0, 'high': float('inf')},
    {'distribution': 'triangular', 'mode': 2.0},
    {'master_seed': -1},
])
def test_invalid_spec(params):
    with pytest.raises(PreconditionError):
        DisorderSpec(**params)


def test_density_sup():
    assert DisorderSpec(low=-1.0, high=1.0).density_sup == 0.5
    triangular = DisorderSpec('triangular', low=0.0, high=4.0)
    assert triangular.density_sup == 0.5
    assert triangular.mode == 2.0
    assert triangular.with_lambda(3.0).lam == 3.0


def test_potentials_are_reproducible():
    spec = DisorderSpec(master_seed=42, low=-1.0, high=1.0)
    lat = chain(20)
    first = sample_potential(spec, lat, 3)

    assert_array_equal(first, sample_potential(spec, lat, 3))
    assert not np.array_equal(first, sample_potential(spec, lat, 4))
    assert not np.array_equal(first, sample_potential(spec, lat, 3, attempt=1))
    assert not np.array_equal(first, sample_potential(DisorderSpec(master_seed=43), lat, 3))
    assert np.all((first >= -1.0) & (first <= 1.0))


def test_triangular_potential():
    spec = DisorderSpec('triangular', low=0.0, high=1.0, mode=0.25)
    values = sample_potential(spec, chain(2000), 0)

    assert np.all((values >= 0.0) & (values <= 1.0))
    assert values.mean() == pytest.approx(1.25 / 3, abs=0.02)


def test_median_of_means():
    assert median_of_means(np.arange(1.0, 11.0)) == 5.5
    assert median_of_means(np.array([1.0, 1.0, 1.0, 100.0]), blocks=4) == 1.0
    assert median_of_means(np.array([2.0]), blocks=10) == 2.0


@pytest.mark.parametrize('lam, diagonal, expected', [
    (4.0, True, math.sqrt(2) / 1.0),
    (4.0, False, 2.0),
    (1.0, True, 2 * math.sqrt(2)),
    (0.0, True, math.inf),
])
def test_apriori_bound(lam, diagonal, expected):
    spec = DisorderSpec(lam=lam)

    assert apriori_bound(spec, 0.5, diagonal) == pytest.approx(expected)


def test_moments_within_apriori_bound():
    A0, model = _a0(4)
    lat = model.lattice
    spec = DisorderSpec(lam=2.0, master_seed=7)
    pairs = [((0,), (0,)), ((0,), (3,))]
    estimates = fractional_moment_mc(A0, lat, spec, 0.5, 0.1 + 0.5j, pairs, 200)

    assert [e.pair for e in estimates] == pairs
    assert [e.distance for e in estimates] == [0, 3]
    diagonal = estimates[0]
    assert diagonal.n_samples == 200
    assert diagonal.mean <= apriori_bound(spec, 0.5) + 3 * diagonal.std_error
    assert estimates[1].mean < diagonal.mean


def test_moments_do_not_depend_on_workers():
    A0, model = _a0(5)
    spec = DisorderSpec(lam=1.5, master_seed=11)
    pairs = [((0,), (4,)), ((2,), (2,))]
    serial = fractional_moment_mc(A0, model.lattice, spec, 0.5, 0.2, pairs, 30)
    with ThreadPoolExecutor(max_workers=4) as executor:
        concurrent = fractional_moment_mc(
            A0, model.lattice, spec, 0.5, 0.2, pairs, 30, executor=executor)

    for a, b in zip(serial, concurrent):
        assert_array_equal(a.samples, b.samples)


def test_realization_events():
    A0, model = _a0(3)
    observers = ProgressObservable()
    seen = []

    def call_me_back(index, values):
        seen.append(index)

    observers.on('realization', call_me_back)
    fractional_moment_mc(A0, model.lattice, DisorderSpec(), 0.5, 0.1, [((0,), (1,))], 5,
                         observers=observers)

    assert seen == [0, 1, 2, 3, 4]


@pytest.mark.parametrize('s, n_samples, size', [
    (0.0, 10, 3),
    (1.0, 10, 3),
    (0.5, 0, 3),
    (0.5, 10, 4),
])
def test_moment_preconditions(s, n_samples, size):
    A0, _ = _a0(size)
    with pytest.raises(PreconditionError):
        fractional_moment_mc(A0, chain(3), DisorderSpec(), s, 0.1, [((0,), (1,))], n_samples)


def test_localization_threshold():
    A0 = anderson_hamiltonian(chain(3), 0.0).hamiltonian()
    spec = DisorderSpec()
    threshold = localization_threshold(A0, chain(3), spec, 0.5, 0.0)

    assert threshold.C_s == pytest.approx(2 * math.sqrt(2))
    assert threshold.lambda_s_mu == pytest.approx(4 * math.sqrt(2))
    assert threshold.lambda_min == pytest.approx(32.0)
    assert threshold.applies(40.0)
    assert threshold.prefactor(40.0) == pytest.approx(
        2 * math.sqrt(2) / (math.sqrt(40.0) - 4 * math.sqrt(2)))
    assert threshold.prefactor(10.0) is None
    assert threshold.to_json()['lambda_min'] == pytest.approx(32.0)


def test_threshold_grows_with_mu():
    A0, model = _a0(4)
    spec = DisorderSpec()
    low = localization_threshold(A0, model.lattice, spec, 0.5, 0.0)
    high = localization_threshold(A0, model.lattice, spec, 0.5, 1.0)

    assert high.lambda_s_mu == pytest.approx(low.lambda_s_mu * math.e)
    with pytest.raises(PreconditionError):
        localization_threshold(A0, model.lattice, spec, 0.5, -1.0)


def test_energy_sweep():
    A0, _ = _a0(4)
    energies = energy_sweep(A0, 5)

    assert len(energies) == 5
    assert energies[0] == -energies[-1]
    assert energies[2] == pytest.approx(0.0)


def test_model_family():
    model = gapped_chain(4)
    family = ModelFamily(model)

    assert family.realize(0.0, np.zeros(4)) is model
    realized = family.realize(2.0, [1.0, 0.0, 0.0, -1.0])
    assert_allclose(np.diag(realized.hamiltonian()).real, [2.0, 0.0, 0.0, -2.0])


def test_clean_coherence_average():
    model = gapped_chain(6, 0.5)
    pairs = [((0,), (0,)), ((0,), (3,))]
    estimates = disordered_coherence_pairs_mc(
        ModelFamily(model), DisorderSpec(lam=0.0), (0,), pairs, 0.4, 4)
    averaged = abel_average(model, DensityMatrix.site(6, 0), 0.4)

    assert estimates[0].std_error == 0.0
    assert estimates[0].mean == pytest.approx(abs(averaged[0, 0]))
    assert estimates[1].mean == pytest.approx(abs(averaged[0, 3]))
    assert estimates[1].s == 1.0
    assert estimates[1].z == 0.4


def test_disordered_coherence_decays():
    model = gapped_chain(8, 0.5)
    pairs = [((0,), (y,)) for y in range(8)]
    estimates = disordered_coherence_pairs_mc(
        ModelFamily(model, h0='none'), DisorderSpec(lam=3.0, low=-1.0, high=1.0),
        (0,), pairs, 0.3, 10)

    assert estimates[0].mean > estimates[-1].mean


def test_single_pair_coherence_average():
    family = ModelFamily(gapped_chain(6, 0.5), h0='none')
    spec = DisorderSpec(lam=2.0, low=-1.0, high=1.0, master_seed=3)
    single = disordered_coherence_mc(family, spec, (0,), (0,), (3,), 0.4, 5)
    listed = disordered_coherence_pairs_mc(family, spec, (0,), [((0,), (3,))], 0.4, 5)

    assert single.mean == listed[0].mean
    assert single.std_error == listed[0].std_error


def test_independent_supports():
    split = independent_supports(ModelFamily(gapped_chain(10)), (0,), (9,))

    assert set(split.sites_x) == {(0,), (1,), (2,), (3,)}
    assert set(split.sites_y) == {(6,), (7,), (8,), (9,)}
    assert split.disjoint
