# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Local Lindbladians: Hamiltonian terms h_Z and jump operators L_a on supports Z, grouped per
support, with declared and measured (R, I, N) locality constants.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import (
    Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union,
)

# Third-party imports
import numpy as np
import scipy.sparse as sp

# Local imports
from .errors import ModelError
from .lattice import Lattice, Region


_logger = logging.getLogger(__name__)

#: Tolerance on the Hermiticity of Hamiltonian terms.
HERMITIAN_TOLERANCE = 1e-12

_ZERO = 0.0


def _frozen(matrix: Any, size: int, what: str) -> np.ndarray:
    array = np.array(matrix, dtype=complex)
    if array.shape != (size, size):
        raise ModelError(f'{what} must be {size}x{size}, got shape {array.shape}')
    array.setflags(write=False)
    return array


def _spectral_norm(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, 2))


@dataclass(frozen=True, eq=False)
class LocalHamiltonianTerm:
    '''A Hermitian term h_Z, stored densely on its support Z.'''
    support: Region
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = _frozen(self.matrix, len(self.support), 'Hamiltonian term')
        object.__setattr__(self, 'matrix', matrix)
        if not np.allclose(matrix, matrix.conj().T, rtol=0, atol=HERMITIAN_TOLERANCE):
            raise ModelError(f'Hamiltonian term on {self.support!r} is not Hermitian')
        used = np.any(matrix != 0, axis=0) | np.any(matrix != 0, axis=1)
        if not used.all():
            raise ModelError(
                f'Hamiltonian term on {self.support!r} has sites without a nonzero entry')

    @property
    def norm(self) -> float:
        return _spectral_norm(self.matrix)


@dataclass(frozen=True, eq=False)
class JumpOperator:
    '''A Lindblad operator L_a, stored densely on its support Z.'''
    support: Region
    matrix: np.ndarray
    label: str = ''

    def __post_init__(self) -> None:
        object.__setattr__(
            self, 'matrix', _frozen(self.matrix, len(self.support), 'Jump operator'))

    @property
    def norm(self) -> float:
        return _spectral_norm(self.matrix)


@dataclass(frozen=True)
class Locality:
    R: int
    I: int  # noqa: E741
    N: float


@dataclass(frozen=True)
class LocalityReport:
    '''
    Measured locality constants. cover_count is the largest number of distinct term supports
    containing a single site.
    '''
    R_actual: int
    I_actual: int
    N_actual: float
    cover_count: int
    declared: Locality
    passed: bool

    @property
    def measured(self) -> Locality:
        return Locality(self.R_actual, self.I_actual, self.N_actual)


def embed(
        matrix: np.ndarray, support: Region, region: Region,
        sparse: bool = False) -> Union[np.ndarray, sp.csr_matrix]:
    '''
    Places a matrix indexed by support into a matrix indexed by region.

    :raises ModelError: If support is not contained in region.
    '''
    if not support <= region:
        raise ModelError(f'{support!r} is not inside {region!r}')
    positions = np.array([region.position(o) for o in support.ordinals], dtype=np.int64)
    size = len(region)
    if sparse:
        block = sp.coo_matrix(matrix)
        return sp.csr_matrix(
            (block.data, (positions[block.row], positions[block.col])), shape=(size, size))
    result = np.zeros((size, size), dtype=complex)
    result[np.ix_(positions, positions)] = matrix
    return result


class LindbladModel:
    '''
    An (R, I, N)-local Lindbladian on a finite lattice.

    Hamiltonian terms on identical supports are summed into a single h_Z. Jump operators are
    grouped per support, in order of first appearance. Models are immutable.
    '''

    def __init__(
            self, lattice: Lattice,
            hamiltonian_terms: Iterable[LocalHamiltonianTerm] = (),
            jump_operators: Iterable[JumpOperator] = (),
            declared_locality: Optional[Locality] = None,
            kind: str = 'explicit',
            parameters: Optional[Mapping[str, Any]] = None) -> None:
        '''
        :param lattice: The lattice every support belongs to.
        :param hamiltonian_terms: Terms h_Z.
        :param jump_operators: Lindblad operators L_a.
        :param declared_locality: Declared (R, I, N). Defaults to the measured constants.
        :param kind: Name of the model family.
        :param parameters: Construction parameters, kept for serialization.
        '''
        self._lattice = lattice
        self._kind = kind
        self._parameters = dict(parameters or {})

        merged: Dict[Region, np.ndarray] = OrderedDict()
        for term in hamiltonian_terms:
            self._check_support(term.support)
            if term.support in merged:
                merged[term.support] = merged[term.support] + term.matrix
            else:
                merged[term.support] = np.array(term.matrix)
        self._hamiltonian_terms = tuple(
            LocalHamiltonianTerm(support, matrix) for support, matrix in merged.items()
            if np.any(matrix != 0))

        groups: Dict[Region, List[JumpOperator]] = OrderedDict()
        for jump in jump_operators:
            self._check_support(jump.support)
            groups.setdefault(jump.support, []).append(jump)
        self._jump_groups = OrderedDict(
            (support, tuple(jumps)) for support, jumps in groups.items())

        self._declared = declared_locality
        report = validate_locality(self)
        if declared_locality is None:
            self._declared = report.measured
            report = validate_locality(self)
        self._report: LocalityReport = report

    def _check_support(self, support: Region) -> None:
        if support.parent != self._lattice:
            raise ModelError(f'Support {support!r} is not on the model lattice')
        if not len(support):
            raise ModelError('Empty support')
        if math.isinf(support.diameter()):
            raise ModelError(f'Support {support!r} is not connected')

    @property
    def lattice(self) -> Lattice:
        return self._lattice

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def parameters(self) -> Mapping[str, Any]:
        return dict(self._parameters)

    @property
    def hamiltonian_terms(self) -> Tuple[LocalHamiltonianTerm, ...]:
        return self._hamiltonian_terms

    @property
    def jump_groups(self) -> Mapping[Region, Tuple[JumpOperator, ...]]:
        return OrderedDict(self._jump_groups)

    @property
    def jump_operators(self) -> Tuple[JumpOperator, ...]:
        return tuple(jump for jumps in self._jump_groups.values() for jump in jumps)

    @property
    def declared_locality(self) -> Locality:
        assert self._declared is not None
        return self._declared

    @property
    def locality(self) -> LocalityReport:
        assert self._report is not None
        return self._report

    def supports(self) -> Tuple[Region, ...]:
        '''Distinct supports carrying a Hamiltonian term or a jump group.'''
        found: Dict[Region, None] = OrderedDict()
        for term in self._hamiltonian_terms:
            found[term.support] = None
        for support in self._jump_groups:
            found[support] = None
        return tuple(found)

    def terms_within(
            self, region: Region
    ) -> Tuple[Tuple[LocalHamiltonianTerm, ...], Tuple[JumpOperator, ...]]:
        '''Terms whose support lies inside region.'''
        return (
            tuple(t for t in self._hamiltonian_terms if t.support <= region),
            tuple(j for j in self.jump_operators if j.support <= region),
        )

    def crossing_terms(
            self, half: Region
    ) -> Tuple[Tuple[LocalHamiltonianTerm, ...], Tuple[JumpOperator, ...]]:
        '''Terms whose support meets both half and its complement.'''
        def crosses(support: Region) -> bool:
            inside = len(support.members & half.members)
            return 0 < inside < len(support)

        return (
            tuple(t for t in self._hamiltonian_terms if crosses(t.support)),
            tuple(j for j in self.jump_operators if crosses(j.support)),
        )

    def hamiltonian(self, region: Optional[Region] = None) -> np.ndarray:
        '''Dense sum of the terms h_Z with Z inside region (the whole lattice by default).'''
        region = region or self._lattice.full_region()
        result = np.zeros((len(region), len(region)), dtype=complex)
        for term in self.terms_within(region)[0]:
            result += embed(term.matrix, term.support, region)
        return result

    def dissipation(self, region: Optional[Region] = None) -> np.ndarray:
        '''Dense sum of L*L over jump operators inside region.'''
        region = region or self._lattice.full_region()
        result = np.zeros((len(region), len(region)), dtype=complex)
        for jump in self.terms_within(region)[1]:
            result += embed(jump.matrix.conj().T @ jump.matrix, jump.support, region)
        return result

    def __repr__(self) -> str:
        return (
            f'{self.__class__.__name__}(kind={self._kind!r}, lattice={self._lattice!r}, '
            f'hamiltonian_terms={len(self._hamiltonian_terms)}, '
            f'jump_operators={len(self.jump_operators)})')


def validate_locality(model: LindbladModel) -> LocalityReport:
    '''
    Measures (R, I, N) and the cover count of a model and compares them with its declared
    locality.
    '''
    supports = model.supports()
    R_actual = 0
    for support in supports:
        R_actual = max(R_actual, support.diameter())

    I_actual = max((len(jumps) for jumps in model.jump_groups.values()), default=0)
    norms = [t.norm for t in model.hamiltonian_terms] + [j.norm for j in model.jump_operators]
    N_actual = max(norms, default=_ZERO)

    cover = np.zeros(len(model.lattice), dtype=np.int64)
    for support in supports:
        cover[list(support.ordinals)] += 1
    cover_count = int(cover.max()) if len(cover) else 0

    declared = model._declared or Locality(R_actual, I_actual, N_actual)
    passed = (
        R_actual <= declared.R
        and I_actual <= declared.I
        and N_actual <= declared.N * (1 + HERMITIAN_TOLERANCE) + HERMITIAN_TOLERANCE)
    return LocalityReport(
        R_actual=int(R_actual),
        I_actual=int(I_actual),
        N_actual=float(N_actual),
        cover_count=cover_count,
        declared=declared,
        passed=bool(passed),
    )


def compose_models(a: LindbladModel, b: LindbladModel) -> LindbladModel:
    '''
    Sum of two Lindbladians on the same lattice. The declared locality of the sum takes the
    larger R, adds the I of both parts and keeps an N bounding every term.
    '''
    if a.lattice != b.lattice:
        raise ModelError('Cannot compose models defined on different lattices')
    if not (b.hamiltonian_terms or b.jump_operators):
        return a
    if not (a.hamiltonian_terms or a.jump_operators):
        return b

    composite = LindbladModel(
        a.lattice,
        a.hamiltonian_terms + b.hamiltonian_terms,
        a.jump_operators + b.jump_operators,
        kind='composite',
        parameters={'components': [model_description(a), model_description(b)]},
    )
    measured = composite.locality
    declared = Locality(
        R=max(a.declared_locality.R, b.declared_locality.R),
        I=a.declared_locality.I + b.declared_locality.I,
        N=max(a.declared_locality.N, b.declared_locality.N, measured.N_actual),
    )
    return LindbladModel(
        a.lattice,
        composite.hamiltonian_terms,
        composite.jump_operators,
        declared_locality=declared,
        kind=composite.kind,
        parameters=composite.parameters,
    )


def empty_model(lattice: Lattice) -> LindbladModel:
    return LindbladModel(lattice, kind='empty')


def build_model(lattice: Lattice, kind: str, **params: Any) -> LindbladModel:
    '''
    Builds a model of a registered kind.

    Built-in kinds are 'dephasing', 'coherence_creation', 'incoherent_hopping',
    'anderson_hamiltonian' and 'explicit'; more can be provided by installed packages through the
    ``lindblad_locality.model_kinds`` entry-point group.

    :param lattice: The lattice to build the model on.
    :param kind: Model kind.
    :param params: Keyword parameters of the builder. ``declared`` sets the declared (R, I, N).
    :return: The model.
    '''
    from .registry import model_builder

    declared = params.pop('declared', None)
    model = model_builder(kind)(lattice, **params)
    if declared is not None:
        model = LindbladModel(
            lattice, model.hamiltonian_terms, model.jump_operators,
            declared_locality=Locality(*declared), kind=model.kind,
            parameters=model.parameters)
    if not model.locality.passed:
        _logger.warning('Model %r does not satisfy its declared locality: %r',
                        model, model.locality)
    return model


# Built-in kinds

def _check_rate(rate: float) -> float:
    rate = float(rate)
    if not np.isfinite(rate) or rate < 0:
        raise ModelError(f'Rate must be finite and non-negative, got {rate}')
    return rate


def dephasing(lattice: Lattice, rate: float = 1.0,
              sites: Optional[Sequence[Any]] = None) -> LindbladModel:
    '''L_v = sqrt(rate) |v><v| for every site v (or the listed sites).'''
    rate = _check_rate(rate)
    ordinals = range(len(lattice)) if sites is None else [lattice.ordinal(s) for s in sites]
    amplitude = np.sqrt(rate)
    jumps = [
        JumpOperator(Region(lattice, (o,)), [[amplitude]], f'dephasing:{lattice.sites[o]}')
        for o in ordinals] if rate > 0 else []
    return LindbladModel(
        lattice, (), jumps, kind='dephasing',
        parameters={'rate': rate, 'sites': None if sites is None else
                    [list(lattice.sites[o]) for o in ordinals]})


def coherence_creation(lattice: Lattice, rate: float = 1.0) -> LindbladModel:
    '''L_(v,w) = sqrt(rate) (|v> + |w>)(<v| - <w|) for every edge v < w.'''
    rate = _check_rate(rate)
    block = np.sqrt(rate) * np.array([[1, -1], [1, -1]], dtype=complex)
    jumps = [
        JumpOperator(
            Region(lattice, (i, j)), block,
            f'coherence:{lattice.sites[i]}-{lattice.sites[j]}')
        for i, j in lattice.edges] if rate > 0 else []
    return LindbladModel(lattice, (), jumps, kind='coherence_creation',
                         parameters={'rate': rate})


def _default_orientation(lattice: Lattice) -> List[Tuple[int, int]]:
    # (source, target): induced edges hop towards the smaller ordinal, wrap edges the other way
    # round, so that a ring is oriented cyclically.
    wraps = {(lattice.ordinal(a), lattice.ordinal(b)) for a, b in lattice.extra_edges}
    return [(i, j) if (i, j) in wraps else (j, i) for i, j in lattice.edges]


def incoherent_hopping(
        lattice: Lattice, rate: float = 1.0,
        orientation: Union[str, Sequence[Sequence[Any]]] = 'default') -> LindbladModel:
    '''
    L_e = sqrt(rate) |v><w| for every oriented edge w -> v.

    :param orientation: 'default', 'both', or an explicit list of [source, target] site pairs.
    '''
    rate = _check_rate(rate)
    if orientation == 'default':
        oriented = _default_orientation(lattice)
    elif orientation == 'both':
        oriented = [(i, j) for i, j in lattice.edges] + [(j, i) for i, j in lattice.edges]
    elif isinstance(orientation, str):
        raise ModelError(f'Unknown orientation {orientation!r}')
    else:
        oriented = []
        for source, target in orientation:
            w, v = lattice.ordinal(source), lattice.ordinal(target)
            if v not in lattice.neighbours(w):
                raise ModelError(
                    f'Oriented edge {lattice.sites[w]} -> {lattice.sites[v]} is not an adjacency')
            oriented.append((w, v))

    amplitude = np.sqrt(rate)
    jumps = []
    for w, v in oriented:
        support = Region(lattice, (v, w))
        block = np.zeros((2, 2), dtype=complex)
        block[support.position(v), support.position(w)] = amplitude
        jumps.append(JumpOperator(
            support, block, f'hopping:{lattice.sites[w]}->{lattice.sites[v]}'))
    return LindbladModel(
        lattice, (), jumps if rate > 0 else [], kind='incoherent_hopping',
        parameters={
            'rate': rate,
            'orientation': [[list(lattice.sites[w]), list(lattice.sites[v])]
                            for w, v in oriented]})


_H0_BLOCKS = {
    'hopping': np.array([[0, -1], [-1, 0]], dtype=complex),
    'laplacian': np.array([[1, -1], [-1, 1]], dtype=complex),
}


def anderson_hamiltonian(
        lattice: Lattice, lam: float = 1.0,
        potential: Optional[Union[Sequence[float], Mapping[Any, float]]] = None,
        h0: str = 'hopping') -> LindbladModel:
    '''
    H = H0 + lam V.

    :param lam: Disorder strength.
    :param potential: Per-site values, either a sequence in site order or a site -> value
        mapping. Missing values are zero.
    :param h0: 'hopping' for edge terms -(|v><w| + |w><v|), 'laplacian' for edge terms
        (|v> - |w>)(<v| - <w|) summing to the negative graph Laplacian, or 'none'.
    '''
    lam = float(lam)
    if not np.isfinite(lam):
        raise ModelError(f'Disorder strength must be finite, got {lam}')
    values = np.zeros(len(lattice))
    if isinstance(potential, Mapping):
        for site, value in potential.items():
            values[lattice.ordinal(site)] = float(value)
    elif potential is not None:
        values = np.array(potential, dtype=float)
        if values.shape != (len(lattice),):
            raise ModelError(
                f'Potential needs {len(lattice)} values, got shape {values.shape}')
    if not np.all(np.isfinite(values)):
        raise ModelError('Potential values must be finite')

    terms = []
    if h0 != 'none':
        try:
            block = _H0_BLOCKS[h0]
        except KeyError:
            raise ModelError(f'Unknown H0 {h0!r}') from None
        terms.extend(LocalHamiltonianTerm(Region(lattice, edge), block)
                     for edge in lattice.edges)
    for ordinal, value in enumerate(lam * values):
        if value != 0:
            terms.append(LocalHamiltonianTerm(Region(lattice, (ordinal,)), [[value]]))
    return LindbladModel(
        lattice, terms, (), kind='anderson_hamiltonian',
        parameters={'lambda': lam, 'potential': values.tolist(), 'h0': h0})


def _parse_matrix(entries: Any) -> np.ndarray:
    array = np.array(entries)
    if array.ndim == 3 and array.shape[-1] == 2:
        return array[..., 0].astype(float) + 1j * array[..., 1].astype(float)
    return array.astype(complex)


def explicit(
        lattice: Lattice,
        hamiltonian: Sequence[Mapping[str, Any]] = (),
        jumps: Sequence[Mapping[str, Any]] = ()) -> LindbladModel:
    '''
    User supplied terms. Each entry has a ``support`` (list of sites) and a ``matrix`` given as
    nested lists of numbers or of [re, im] pairs; jump entries may carry a ``label``.
    '''
    terms = [
        LocalHamiltonianTerm(lattice.region(entry['support']), _parse_matrix(entry['matrix']))
        for entry in hamiltonian]
    operators = [
        JumpOperator(lattice.region(entry['support']), _parse_matrix(entry['matrix']),
                     str(entry.get('label', f'jump:{index}')))
        for index, entry in enumerate(jumps)]
    return LindbladModel(lattice, terms, operators, kind='explicit')


# Serialization

def _entries(matrix: np.ndarray) -> List[List[float]]:
    return [[float(value.real), float(value.imag)] for value in matrix.ravel()]


def model_description(model: LindbladModel) -> Dict[str, Any]:
    return {'kind': model.kind, 'parameters': model.parameters}


def model_to_json(model: LindbladModel) -> Dict[str, Any]:
    '''Model document: kind, parameters and every term with row-major [re, im] entries.'''
    declared = model.declared_locality
    return {
        'kind': model.kind,
        'parameters': model.parameters,
        'declared_locality': {'R': declared.R, 'I': declared.I, 'N': declared.N},
        'hamiltonian_terms': [
            {'support': term.support.to_json(), 'entries': _entries(term.matrix)}
            for term in model.hamiltonian_terms],
        'jump_operators': [
            {'support': jump.support.to_json(), 'label': jump.label,
             'entries': _entries(jump.matrix)}
            for jump in model.jump_operators],
    }
