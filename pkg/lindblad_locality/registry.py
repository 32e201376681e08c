# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Registry of model kinds, seeded with the built-in builders and extended from package entry
points.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
from collections import OrderedDict
from importlib import metadata
from threading import RLock
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

# Third-party imports

# Local imports
from . import model
from .errors import ModelError


_logger = logging.getLogger(__name__)

ENTRY_POINT_GROUP = 'lindblad_locality.model_kinds'

ModelBuilder = Callable[..., 'model.LindbladModel']

BUILTIN_KINDS: Mapping[str, ModelBuilder] = OrderedDict([
    ('dephasing', model.dephasing),
    ('coherence_creation', model.coherence_creation),
    ('incoherent_hopping', model.incoherent_hopping),
    ('anderson_hamiltonian', model.anderson_hamiltonian),
    ('explicit', model.explicit),
])


def _group_entry_points(group: str) -> Tuple[Any, ...]:
    eps = metadata.entry_points()
    if hasattr(eps, 'select'):
        return tuple(eps.select(group=group))
    return tuple(eps.get(group, ()))  # type: ignore


class ModelKindRegistry:
    '''
    Maps model kind names to builder callables ``builder(lattice, **params) -> LindbladModel``.

    Entry points of the group are loaded once, on first lookup. A missing or empty group is not
    an error: the registry then only holds the built-in kinds. Built-in names take precedence
    over entry points of the same name.
    '''

    def __init__(
            self, group: Optional[str] = ENTRY_POINT_GROUP,
            builtins: Mapping[str, ModelBuilder] = BUILTIN_KINDS) -> None:
        '''
        :param group: Entry-point group to load builders from, None to disable loading.
        :param builtins: Builders available without any entry point.
        '''
        self._group = group
        self._builders: Dict[str, ModelBuilder] = OrderedDict(builtins)
        self._loaded = group is None
        self._lock = RLock()

    def _load(self) -> None:
        with self._lock:
            if self._loaded:
                return
            assert self._group is not None
            for entry_point in _group_entry_points(self._group):
                if entry_point.name in self._builders:
                    _logger.debug('Entry point %s shadowed by a built-in kind', entry_point.name)
                    continue
                _logger.debug('Loading model kind %s from %s', entry_point.name, self._group)
                self._builders[entry_point.name] = entry_point.load()
            self._loaded = True

    def register(self, kind: str, builder: ModelBuilder) -> None:
        with self._lock:
            if kind in self._builders:
                raise ModelError(f'Model kind {kind!r} is already registered')
            self._builders[kind] = builder

    def kinds(self) -> Tuple[str, ...]:
        self._load()
        return tuple(self._builders)

    def __contains__(self, kind: object) -> bool:
        self._load()
        return kind in self._builders

    def __getitem__(self, kind: str) -> ModelBuilder:
        self._load()
        try:
            return self._builders[kind]
        except KeyError:
            raise ModelError(
                f'Unknown model kind {kind!r}, expected one of {sorted(self._builders)}'
            ) from None

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(group={self._group!r})'


_default_registry: Optional[ModelKindRegistry] = None
_default_lock = RLock()


def default_registry() -> ModelKindRegistry:
    global _default_registry
    with _default_lock:
        if _default_registry is None:
            _default_registry = ModelKindRegistry()
        return _default_registry


def model_builder(kind: str) -> ModelBuilder:
    return default_registry()[kind]


def model_kinds() -> Tuple[str, ...]:
    return default_registry().kinds()
