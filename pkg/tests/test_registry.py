# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports

# Third-party imports
import pytest

# Local imports
from lindblad_locality.errors import ModelError
from lindblad_locality.model import dephasing
from lindblad_locality.registry import (
    BUILTIN_KINDS, ENTRY_POINT_GROUP, ModelKindRegistry, model_builder, model_kinds)
from .tools import chain


# WARNING: Entry points are only visible once the package is installed (editable mode is
#          enough), as they are declared in setup.cfg.


def test_builtins():
    registry = ModelKindRegistry(group=None)

    assert registry.kinds() == tuple(BUILTIN_KINDS)
    assert 'dephasing' in registry
    assert registry['dephasing'] is dephasing


@pytest.mark.parametrize('group', [
    'lindblad_locality.test_empty_model_kinds',
    'non-existant',
])
def test_empty_or_missing_group(group):
    registry = ModelKindRegistry(group=group)

    assert registry.kinds() == tuple(BUILTIN_KINDS)


def test_entry_point_kinds():
    registry = ModelKindRegistry(group='lindblad_locality.test_model_kinds')

    assert 'uniform_dephasing' in registry
    assert 'chain_hopping' in registry
    model = registry['uniform_dephasing'](chain(3), rate=2.0)
    assert model.kind == 'uniform_dephasing'
    assert len(model.jump_operators) == 3


def test_unknown_kind():
    with pytest.raises(ModelError):
        ModelKindRegistry(group=None)['teleportation']


def test_register():
    registry = ModelKindRegistry(group=None)
    registry.register('weak_dephasing', lambda lattice: dephasing(lattice, 0.1))

    assert registry['weak_dephasing'](chain(2)).locality.N_actual == pytest.approx(0.1 ** 0.5)
    with pytest.raises(ModelError):
        registry.register('dephasing', dephasing)


def test_default_registry():
    assert ENTRY_POINT_GROUP == 'lindblad_locality.model_kinds'
    assert set(BUILTIN_KINDS) <= set(model_kinds())
    assert model_builder('coherence_creation') is BUILTIN_KINDS['coherence_creation']
