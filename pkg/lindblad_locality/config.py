# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Experiment configuration: a JSON document validated against SCHEMA, with typed accessors.
'''
from __future__ import annotations  # noqa: F407

# System imports
import copy
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

# Third-party imports
import jsonschema
from jsonschema.exceptions import best_match

# Local imports
from .disorder import DEFAULT_S, DisorderSpec
from .dissipative import CLOSURE_KINDS, BoundaryClosure
from .dynamics import DEFAULT_DIMENSION_CAP, DensityMatrix
from .errors import ConfigError
from .kernel import GEOMETRIES
from .lattice import Lattice, Region, Site, build_lattice
from .model import LindbladModel, build_model, compose_models, empty_model
from .pseudospectra import ComplexGrid


_logger = logging.getLogger(__name__)

_SITE: Dict[str, Any] = {
    'oneOf': [
        {'type': 'integer'},
        {'type': 'array', 'items': {'type': 'integer'}, 'minItems': 1},
    ],
}
_SITES = {'type': 'array', 'items': _SITE}
_SITE_PAIR = {'type': 'array', 'items': _SITE, 'minItems': 2, 'maxItems': 2}
_COMPLEX = {
    'oneOf': [
        {'type': 'number'},
        {'type': 'array', 'items': {'type': 'number'}, 'minItems': 2, 'maxItems': 2},
    ],
}
_TERM = {
    'type': 'object',
    'properties': {
        'support': {'type': 'array', 'items': _SITE, 'minItems': 1},
        'matrix': {'type': 'array', 'items': {'type': 'array', 'items': _COMPLEX}},
        'label': {'type': 'string'},
    },
    'required': ['support', 'matrix'],
    'additionalProperties': False,
}
_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}
_NON_NEGATIVE = {'type': 'number', 'minimum': 0}
_POSITIVE_LIST = {'type': 'array', 'items': _POSITIVE, 'minItems': 1}


def _section(properties: Mapping[str, Any], required: Tuple[str, ...] = ()) -> Dict[str, Any]:
    return {'type': 'object', 'properties': dict(properties), 'required': list(required),
            'additionalProperties': False}


#: JSON schema (Draft 7) of experiment configs.
SCHEMA: Dict[str, Any] = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'title': 'lindblad-locality experiment',
    **_section({
        'lattice': _section({
            'kind': {'enum': ['box', 'chain', 'ring', 'explicit']},
            'n': {'type': 'integer', 'minimum': 1},
            'extents': {'type': 'array', 'items': {'type': 'integer', 'minimum': 1},
                        'minItems': 1},
            'sites': _SITES,
            'extra_edges': {'type': 'array', 'items': _SITE_PAIR},
        }, required=('kind',)),
        'models': {
            'type': 'array',
            'items': _section({
                'kind': {'type': 'string'},
                # Builder keyword arguments; they depend on the kind.
                'params': {'type': 'object'},
                'declared': {'type': 'array', 'items': [
                    {'type': 'integer', 'minimum': 0},
                    {'type': 'integer', 'minimum': 0},
                    _NON_NEGATIVE,
                ], 'minItems': 3, 'maxItems': 3},
            }, required=('kind',)),
        },
        'closure': _section({
            'kind': {'enum': list(CLOSURE_KINDS)},
            'sites': _SITES,
            'rate': _NON_NEGATIVE,
            'hamiltonian': {'type': 'array', 'items': _TERM},
            'jumps': {'type': 'array', 'items': _TERM},
        }, required=('kind',)),
        'region': _SITES,
        'initial_state': _section({
            'kind': {'enum': ['site', 'superposition', 'pure', 'maximally_mixed']},
            'sites': _SITES,
            'vector': {'type': 'array', 'items': _COMPLEX, 'minItems': 1},
        }, required=('kind',)),
        'times': {'type': 'array', 'items': _NON_NEGATIVE, 'minItems': 1},
        'epsilons': _POSITIVE_LIST,
        'pairs': {'type': 'array', 'items': _SITE_PAIR, 'minItems': 1},
        'geometry': {'enum': list(GEOMETRIES)},
        'contour': _section({
            'margin': _POSITIVE,
            'right_offset': _NON_NEGATIVE,
            'nodes_per_side': {'type': 'integer', 'minimum': 16, 'multipleOf': 16},
            'half_width': _POSITIVE,
            'scale': {'type': 'number', 'minimum': 1},
        }),
        'grid': _section({
            're_min': {'type': 'number'},
            're_max': {'type': 'number'},
            'im_min': {'type': 'number'},
            'im_max': {'type': 'number'},
            're_points': {'type': 'integer', 'minimum': 1},
            'im_points': {'type': 'integer', 'minimum': 1},
        }, required=('re_min', 're_max', 'im_min', 'im_max', 're_points', 'im_points')),
        'ct': _section({
            'alpha': _POSITIVE,
            'epsilon': _POSITIVE,
        }),
        'disorder': _section({
            'mode': {'enum': ['moments', 'coherence']},
            'distribution': _section({
                'kind': {'enum': ['uniform', 'triangular']},
                'low': {'type': 'number'},
                'high': {'type': 'number'},
                'mode': {'type': 'number'},
            }, required=('kind',)),
            'lambdas': {'type': 'array', 'items': {'type': 'number'}, 'minItems': 1},
            's': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
            'n_samples': {'type': 'integer', 'minimum': 1},
            'mu': _NON_NEGATIVE,
            'energies': {'type': 'array', 'items': {'type': 'number'}, 'minItems': 1},
            'x0': _SITE,
            'h0': {'enum': ['hopping', 'laplacian', 'none']},
        }, required=('lambdas', 'n_samples')),
        'fit': _section({
            'input': {'type': 'string', 'minLength': 1},
        }, required=('input',)),
        'master_seed': {'type': 'integer', 'minimum': 0, 'maximum': 2 ** 64 - 1},
        'dimension_cap': {'type': 'integer', 'minimum': 1},
        'output': {'type': 'string', 'minLength': 1},
    }),
    'dependencies': {'disorder': ['master_seed']},
}


#: Sections each command reads, checked before any work starts.
COMMAND_SECTIONS: Mapping[str, Tuple[str, ...]] = {
    'model-validate': ('lattice',),
    'evolve': ('lattice', 'initial_state', 'times'),
    'steady': ('lattice',),
    'abel': ('lattice', 'initial_state', 'epsilons'),
    'envelope': ('lattice',),
    'pseudospec': ('lattice', 'grid', 'epsilons'),
    'kernel': ('lattice', 'pairs', 'epsilons'),
    'coherence-bound': ('lattice', 'initial_state', 'pairs', 'epsilons'),
    'ct-verify': ('lattice', 'grid'),
    'disorder-sweep': ('lattice', 'disorder', 'master_seed', 'epsilons'),
    'fit-decay': ('fit',),
}


def _site(value: Any) -> Site:
    return (int(value),) if isinstance(value, int) else tuple(int(c) for c in value)


def _complex(value: Any) -> complex:
    return complex(value[0], value[1]) if isinstance(value, list) else complex(value)


@dataclass(frozen=True)
class DisorderSettings:
    '''The disorder section, defaults filled in.'''
    spec: DisorderSpec
    lambdas: Tuple[float, ...]
    n_samples: int
    mode: str = 'moments'
    s: float = DEFAULT_S
    mu: float = 1.0
    energies: Optional[Tuple[float, ...]] = None
    x0: Optional[Site] = None
    h0: str = 'none'


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    '''
    A validated experiment document.

    Accessors needing a missing section raise ConfigError; sections only some commands use are
    therefore optional in the schema.
    '''
    document: Mapping[str, Any]
    sha256: str
    source: Optional[Path] = field(default=None)

    @classmethod
    def from_document(cls, document: Mapping[str, Any],
                      source: Optional[Path] = None) -> ExperimentConfig:
        '''
        :raises ConfigError: If the document does not match SCHEMA.
        '''
        error = best_match(jsonschema.Draft7Validator(SCHEMA).iter_errors(document))
        if error is not None:
            where = '/'.join(str(p) for p in error.absolute_path) or '<root>'
            raise ConfigError(f'{source or "config"}: {where}: {error.message}') from error
        text = json.dumps(document, sort_keys=True, separators=(',', ':'))
        return cls(copy.deepcopy(dict(document)),
                   hashlib.sha256(text.encode('utf-8')).hexdigest(), source)

    def _require(self, key: str) -> Any:
        if key not in self.document:
            raise ConfigError(f'Config has no {key!r} section')
        return self.document[key]

    def check_command(self, command: str) -> None:
        '''
        :raises ConfigError: If command is unknown or a section it reads is missing.
        '''
        if command not in COMMAND_SECTIONS:
            raise ConfigError(f'Unknown command {command!r}')
        missing = [key for key in COMMAND_SECTIONS[command] if key not in self.document]
        if missing:
            raise ConfigError(f'{command} needs config sections {missing}')

    def get(self, key: str, default: Any = None) -> Any:
        return self.document.get(key, default)

    # Physical setup

    def lattice(self) -> Lattice:
        section = dict(self._require('lattice'))
        kind = section.pop('kind')
        if 'sites' in section:
            section['sites'] = [_site(s) for s in section['sites']]
        if 'extra_edges' in section:
            section['extra_edges'] = [(_site(a), _site(b)) for a, b in section['extra_edges']]
        return build_lattice(kind, **section)

    def model(self, lat: Lattice) -> LindbladModel:
        '''Sum of the configured models, the empty model when there are none.'''
        models = [
            build_model(lat, entry['kind'], **dict(entry.get('params', {})),
                        **({'declared': tuple(entry['declared'])} if 'declared' in entry else {}))
            for entry in self.get('models', [])]
        if not models:
            return empty_model(lat)
        result = models[0]
        for other in models[1:]:
            result = compose_models(result, other)
        return result

    def closure(self) -> BoundaryClosure:
        section = self.get('closure', {'kind': 'none'})
        return BoundaryClosure(
            kind=section['kind'],
            sites=tuple(_site(s) for s in section.get('sites', ())),
            rate=float(section.get('rate', 1.0)),
            hamiltonian=tuple(section.get('hamiltonian', ())),
            jumps=tuple(section.get('jumps', ())))

    def region(self, lat: Lattice) -> Region:
        '''The configured region, the whole lattice by default.'''
        if 'region' not in self.document:
            return lat.full_region()
        return lat.region(_site(s) for s in self.document['region'])

    def initial_state(self, lat: Lattice) -> DensityMatrix:
        section = self._require('initial_state')
        kind = section['kind']
        size = len(lat)
        sites = [lat.ordinal(_site(s)) for s in section.get('sites', ())]
        if kind == 'maximally_mixed':
            return DensityMatrix.maximally_mixed(size)
        if kind == 'pure':
            if 'vector' not in section:
                raise ConfigError('A pure initial state needs a vector')
            vector = [_complex(v) for v in section['vector']]
            if len(vector) != size:
                raise ConfigError(f'Initial vector has {len(vector)} entries for {size} sites')
            return DensityMatrix.pure(vector)
        if not sites:
            raise ConfigError(f'A {kind} initial state needs sites')
        if kind == 'site':
            if len(sites) != 1:
                raise ConfigError('A site initial state names exactly one site')
            return DensityMatrix.site(size, sites[0])
        return DensityMatrix.superposition(size, sites)

    # Command parameters

    def times(self) -> Tuple[float, ...]:
        return tuple(float(t) for t in self._require('times'))

    def epsilons(self) -> Tuple[float, ...]:
        return tuple(float(e) for e in self._require('epsilons'))

    def pairs(self) -> Tuple[Tuple[Site, Site], ...]:
        return tuple((_site(x), _site(y)) for x, y in self._require('pairs'))

    def geometry(self) -> str:
        return str(self.get('geometry', 'three_block'))

    def contour_options(self) -> Dict[str, Any]:
        return dict(self.get('contour', {}))

    def grid(self) -> ComplexGrid:
        return ComplexGrid(**self._require('grid'))

    def ct_alpha(self) -> float:
        return float(self.get('ct', {}).get('alpha', 1.0))

    def ct_epsilon(self) -> Optional[float]:
        '''Fixed epsilon of the Combes-Thomas check; None derives it per grid point.'''
        value = self.get('ct', {}).get('epsilon')
        return None if value is None else float(value)

    def disorder(self) -> DisorderSettings:
        section = self._require('disorder')
        distribution = section.get('distribution', {'kind': 'uniform'})
        lambdas = tuple(float(v) for v in section['lambdas'])
        spec = DisorderSpec(
            distribution=distribution['kind'], lam=lambdas[0],
            master_seed=int(self.document['master_seed']),
            low=float(distribution.get('low', 0.0)), high=float(distribution.get('high', 1.0)),
            mode=distribution.get('mode'))
        energies = section.get('energies')
        return DisorderSettings(
            spec=spec, lambdas=lambdas, n_samples=int(section['n_samples']),
            mode=section.get('mode', 'moments'), s=float(section.get('s', DEFAULT_S)),
            mu=float(section.get('mu', 1.0)),
            energies=None if energies is None else tuple(float(e) for e in energies),
            x0=None if 'x0' not in section else _site(section['x0']),
            h0=section.get('h0', 'none'))

    def fit_input(self) -> Path:
        '''The decay samples file, relative paths taken from the config directory.'''
        path = Path(self._require('fit')['input'])
        if not path.is_absolute() and self.source is not None:
            path = self.source.parent / path
        return path

    @property
    def master_seed(self) -> Optional[int]:
        return self.get('master_seed')

    @property
    def dimension_cap(self) -> int:
        return int(self.get('dimension_cap', DEFAULT_DIMENSION_CAP))

    @property
    def output(self) -> Optional[str]:
        return self.get('output')

    def __repr__(self) -> str:
        return f'ExperimentConfig(source={str(self.source)!r}, sha256={self.sha256[:12]}...)'


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    '''
    Reads and validates an experiment config.

    :raises ConfigError: If the file is not JSON or does not match SCHEMA.
    :raises OSError: If the file cannot be read.
    '''
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as error:
        raise ConfigError(f'{path}: not valid JSON: {error}') from error
    if not isinstance(document, dict):
        raise ConfigError(f'{path}: a config is a JSON object')
    config = ExperimentConfig.from_document(document, path)
    _logger.debug('Loaded %r', config)
    return config

