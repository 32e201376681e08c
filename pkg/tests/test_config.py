# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import copy

# Third-party imports
import pytest

# Local imports
from lindblad_locality.config import COMMAND_SECTIONS, ExperimentConfig, load_config
from lindblad_locality.dynamics import DEFAULT_DIMENSION_CAP
from lindblad_locality.errors import ConfigError
from lindblad_locality.model import Locality
from .tools import write_config


DOCUMENT = {
    'lattice': {'kind': 'chain', 'n': 6},
    'models': [
        {'kind': 'anderson_hamiltonian', 'params': {'lam': 0.0}},
        {'kind': 'dephasing', 'params': {'rate': 0.5}, 'declared': [0, 1, 1.0]},
    ],
    'closure': {'kind': 'dephasing_site', 'sites': [2, [3]], 'rate': 0.25},
    'initial_state': {'kind': 'superposition', 'sites': [0, 5]},
    'times': [0, 0.5, 1],
    'epsilons': [0.1, 0.5],
    'pairs': [[0, 5]],
    'grid': {'re_min': -3, 're_max': 1, 'im_min': -2, 'im_max': 2,
             're_points': 5, 'im_points': 5},
    'disorder': {'lambdas': [1, 2], 'n_samples': 10, 'distribution': {'kind': 'triangular'}},
    'master_seed': 42,
}


def _with(**changes):
    document = copy.deepcopy(DOCUMENT)
    for key, value in changes.items():
        if value is None:
            document.pop(key)
        else:
            document[key] = value
    return document


def test_accessors():
    config = ExperimentConfig.from_document(DOCUMENT)
    lat = config.lattice()
    model = config.model(lat)

    assert len(lat) == 6
    assert model.kind == 'composite'
    assert model.declared_locality == Locality(1, 1, 1.0)
    assert config.closure().sites == ((2,), (3,))
    assert config.region(lat) == lat.full_region()
    assert config.initial_state(lat)[0, 5] == pytest.approx(0.5)
    assert config.times() == (0.0, 0.5, 1.0)
    assert config.pairs() == (((0,), (5,)),)
    assert config.geometry() == 'three_block'
    assert config.contour_options() == {}
    assert config.grid().re_points == 5
    assert config.ct_alpha() == 1.0
    assert config.ct_epsilon() is None
    assert config.dimension_cap == DEFAULT_DIMENSION_CAP
    assert config.output is None


def test_disorder_settings():
    settings = ExperimentConfig.from_document(DOCUMENT).disorder()

    assert settings.lambdas == (1.0, 2.0)
    assert settings.spec.distribution == 'triangular'
    assert settings.spec.master_seed == 42
    assert settings.spec.mode == 0.5
    assert settings.mode == 'moments'
    assert settings.x0 is None


def test_empty_model():
    config = ExperimentConfig.from_document(_with(models=None))
    model = config.model(config.lattice())

    assert model.hamiltonian_terms == ()
    assert model.jump_operators == ()


def test_sha256_is_canonical():
    first = ExperimentConfig.from_document(DOCUMENT)
    reordered = ExperimentConfig.from_document(dict(reversed(list(DOCUMENT.items()))))
    changed = ExperimentConfig.from_document(_with(master_seed=43))

    assert first.sha256 == reordered.sha256
    assert first.sha256 != changed.sha256
    assert len(first.sha256) == 64


@pytest.mark.parametrize('changes', [
    {'lattice': {'kind': 'hexagonal', 'n': 3}},
    {'lattice': {'kind': 'chain', 'n': 3, 'colour': 'red'}},
    {'epsilons': [0.1, -0.5]},
    {'epsilons': []},
    {'contour': {'nodes_per_side': 20}},
    {'contour': {'scale': 0.5}},
    {'grid': {'re_min': 0, 're_max': 1}},
    {'disorder': {'lambdas': [1.0], 'n_samples': 10, 's': 1.0}},
    {'master_seed': None},
    {'master_seed': -1},
    {'unknown': 1},
])
def test_schema_errors(changes):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_document(_with(**changes))


def test_check_command():
    config = ExperimentConfig.from_document(_with(grid=None))

    config.check_command('kernel')
    with pytest.raises(ConfigError):
        config.check_command('pseudospec')
    with pytest.raises(ConfigError):
        config.check_command('teleport')
    assert set(COMMAND_SECTIONS) >= {'model-validate', 'fit-decay'}


@pytest.mark.parametrize('initial_state', [
    {'kind': 'site', 'sites': [0, 1]},
    {'kind': 'site'},
    {'kind': 'pure'},
    {'kind': 'pure', 'vector': [1, 0]},
])
def test_initial_state_errors(initial_state):
    config = ExperimentConfig.from_document(_with(initial_state=initial_state))
    with pytest.raises(ConfigError):
        config.initial_state(config.lattice())


def test_pure_initial_state():
    vector = [[0, 1], 0, 0, 0, 0, [0, -1]]
    config = ExperimentConfig.from_document(
        _with(initial_state={'kind': 'pure', 'vector': vector}))

    assert config.initial_state(config.lattice())[0, 5] == pytest.approx(-0.5)


def test_missing_section():
    config = ExperimentConfig.from_document(_with(times=None))

    with pytest.raises(ConfigError):
        config.times()


def test_load_config(tmp_path):
    path = write_config(tmp_path / 'experiment.json', _with(fit={'input': 'samples.csv'}))
    config = load_config(path)

    assert config.source == path
    assert config.fit_input() == tmp_path / 'samples.csv'
    assert config.sha256 == ExperimentConfig.from_document(config.document).sha256


@pytest.mark.parametrize('text', ['{"lattice": ', '[1, 2]'])
def test_load_invalid_config(tmp_path, text):
    path = tmp_path / 'broken.json'
    path.write_text(text, encoding='utf-8')

    with pytest.raises(ConfigError):
        load_config(path)
