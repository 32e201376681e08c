# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Finite lattice geometry: induced subgraphs of Z^d, graph distances, balls and boundary sets.

Sites are integer coordinate tuples. Internally every site is addressed by its ordinal, the
position of the site in Lattice.sites. Distances are exact integers, with math.inf for pairs in
different connected components.
'''
from __future__ import annotations  # noqa: F407

# System imports
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from threading import Lock
from typing import (
    Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping,
    Optional, Set, Tuple, Union,
)

# Third-party imports
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path
from typing_extensions import TypeAlias

# Local imports
from .errors import LatticeError


_logger = logging.getLogger(__name__)

Site: TypeAlias = Tuple[int, ...]
Distance: TypeAlias = Union[int, float]

#: Lattices up to this size get their all-pairs distance table at construction.
EAGER_DISTANCE_LIMIT = 2048

_UNREACHABLE = -1


def _as_site(site: Any) -> Site:
    if isinstance(site, (int, np.integer)):
        return (int(site),)
    return tuple(int(c) for c in site)


def _int_rows(rows: np.ndarray) -> np.ndarray:
    rows = np.where(np.isinf(rows), _UNREACHABLE, rows)
    return rows.astype(np.int64)


class Lattice:
    '''
    A finite subset of Z^d with the nearest-neighbour adjacency induced from Z^d.

    Extra edges can be supplied on top of the induced ones; this is how a chain is closed into a
    ring. Lattices are immutable and safe to share between threads.
    '''

    def __init__(
            self, sites: Iterable[Any],
            extra_edges: Iterable[Tuple[Any, Any]] = (),
            kind: str = 'explicit') -> None:
        '''
        :param sites: Integer coordinate vectors, all of the same dimension.
        :param extra_edges: Additional site pairs to connect.
        :param kind: Name of the construction, kept for serialization and display.
        '''
        self._sites: Tuple[Site, ...] = tuple(_as_site(site) for site in sites)
        self._kind = kind
        if not self._sites:
            raise LatticeError('A lattice needs at least one site')

        dimensions = {len(site) for site in self._sites}
        if len(dimensions) != 1 or 0 in dimensions:
            raise LatticeError(f'Sites must share one positive dimension, got {dimensions}')
        self._dimension = dimensions.pop()

        self._index: Dict[Site, int] = {}
        for ordinal, site in enumerate(self._sites):
            if site in self._index:
                raise LatticeError(f'Duplicate site {site}')
            self._index[site] = ordinal

        edges: Set[Tuple[int, int]] = set()
        for ordinal, site in enumerate(self._sites):
            for axis in range(self._dimension):
                neighbour = site[:axis] + (site[axis] + 1,) + site[axis + 1:]
                other = self._index.get(neighbour)
                if other is not None:
                    edges.add((min(ordinal, other), max(ordinal, other)))

        extras = []
        for a, b in extra_edges:
            i, j = self.ordinal(a), self.ordinal(b)
            if i == j:
                raise LatticeError(f'Self-loop at {self._sites[i]} is not an adjacency')
            extras.append((self._sites[min(i, j)], self._sites[max(i, j)]))
            edges.add((min(i, j), max(i, j)))
        self._extra_edges: Tuple[Tuple[Site, Site], ...] = tuple(sorted(set(extras)))
        self._edges: Tuple[Tuple[int, int], ...] = tuple(sorted(edges))

        neighbours: List[List[int]] = [[] for _ in self._sites]
        for i, j in self._edges:
            neighbours[i].append(j)
            neighbours[j].append(i)
        self._neighbours = tuple(tuple(sorted(n)) for n in neighbours)

        n = len(self._sites)
        if self._edges:
            rows, cols = zip(*self._edges)
            data = np.ones(2 * len(self._edges), dtype=np.int8)
            self._adjacency = sp.csr_matrix(
                (data, (rows + cols, cols + rows)), shape=(n, n))
        else:
            self._adjacency = sp.csr_matrix((n, n), dtype=np.int8)

        self._distance_lock = Lock()
        self._distance_rows: Dict[int, np.ndarray] = {}
        self._distances: Optional[np.ndarray] = None
        if n <= EAGER_DISTANCE_LIMIT:
            self._distances = _int_rows(shortest_path(
                self._adjacency, directed=False, unweighted=True))
            self._distances.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def sites(self) -> Tuple[Site, ...]:
        return self._sites

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        '''Adjacent ordinal pairs (i, j) with i < j.'''
        return self._edges

    @property
    def extra_edges(self) -> Tuple[Tuple[Site, Site], ...]:
        return self._extra_edges

    @property
    def adjacency(self) -> sp.csr_matrix:
        return self._adjacency.copy()

    def __len__(self) -> int:
        return len(self._sites)

    def __contains__(self, site: Any) -> bool:
        try:
            return _as_site(site) in self._index
        except TypeError:
            return False

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self._sites == other._sites and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._sites, self._edges))

    def __repr__(self) -> str:
        return (
            f'{self.__class__.__name__}(kind={self._kind!r}, dimension={self._dimension}, '
            f'sites={len(self._sites)}, edges={len(self._edges)})')

    def ordinal(self, site: Any) -> int:
        '''
        :param site: A site of this lattice.
        :return: Its position in the sites sequence.
        :raises LatticeError: If the site is not part of the lattice.
        '''
        try:
            return self._index[_as_site(site)]
        except (KeyError, TypeError):
            raise LatticeError(f'Site {site!r} is not in the lattice') from None

    def neighbours(self, ordinal: int) -> Tuple[int, ...]:
        return self._neighbours[ordinal]

    def degree(self, ordinal: int) -> int:
        return len(self._neighbours[ordinal])

    def distances_from(self, ordinal: int) -> np.ndarray:
        '''
        Graph distances from one site to every site, as a read-only integer array where -1 marks
        unreachable sites.
        '''
        if self._distances is not None:
            return self._distances[ordinal]

        with self._distance_lock:
            row = self._distance_rows.get(ordinal)
            if row is None:
                _logger.debug('Computing BFS distances from ordinal %d', ordinal)
                row = _int_rows(shortest_path(
                    self._adjacency, directed=False, unweighted=True, indices=[ordinal]))[0]
                row.setflags(write=False)
                self._distance_rows[ordinal] = row
            return row

    def distance(self, i: int, j: int) -> Distance:
        '''Graph distance between two ordinals, math.inf when disconnected.'''
        value = int(self.distances_from(i)[j])
        return math.inf if value == _UNREACHABLE else value

    def distance_matrix(self) -> np.ndarray:
        '''
        All-pairs distances as a float array with exact integer entries and inf for disconnected
        pairs.
        '''
        if self._distances is not None:
            table = self._distances
        else:
            table = np.vstack([self.distances_from(i) for i in range(len(self))])
        return np.where(table == _UNREACHABLE, np.inf, table.astype(float))

    def region(self, sites: Iterable[Any]) -> Region:
        return Region(self, (self.ordinal(site) for site in sites))

    def full_region(self) -> Region:
        return Region(self, range(len(self)))


class Region:
    '''
    A subset of the sites of a lattice. Regions are immutable; members are site ordinals.
    '''

    __slots__ = ('_parent', '_members', '_ordinals')

    def __init__(self, parent: Lattice, members: Iterable[int]) -> None:
        self._parent = parent
        self._members: FrozenSet[int] = frozenset(int(m) for m in members)
        for member in self._members:
            if not 0 <= member < len(parent):
                raise LatticeError(f'Ordinal {member} is not in {parent!r}')
        self._ordinals: Tuple[int, ...] = tuple(sorted(self._members))

    @property
    def parent(self) -> Lattice:
        return self._parent

    @property
    def members(self) -> FrozenSet[int]:
        return self._members

    @property
    def ordinals(self) -> Tuple[int, ...]:
        '''Members in increasing ordinal order; this is the row order of restricted matrices.'''
        return self._ordinals

    @property
    def sites(self) -> Tuple[Site, ...]:
        return tuple(self._parent.sites[i] for i in self._ordinals)

    def position(self, ordinal: int) -> int:
        '''Row of an ordinal in matrices restricted to this region.'''
        try:
            return self._ordinals.index(ordinal)
        except ValueError:
            raise LatticeError(f'Ordinal {ordinal} is not in the region') from None

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[int]:
        return iter(self._ordinals)

    def __contains__(self, ordinal: object) -> bool:
        return ordinal in self._members

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self._members == other._members and self._parent == other._parent

    def __hash__(self) -> int:
        return hash(self._members)

    def __le__(self, other: Region) -> bool:
        return self._members <= other._members

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({list(self.sites)!r})'

    def diameter(self) -> Distance:
        if len(self._ordinals) < 2:
            return 0
        members = np.asarray(self._ordinals)
        best = 0
        for i in self._ordinals:
            row = self._parent.distances_from(i)[members]
            if (row == _UNREACHABLE).any():
                return math.inf
            best = max(best, int(row.max()))
        return best

    def distance_to(self, other: Iterable[int]) -> Distance:
        '''Set distance min d(u, v), math.inf if either set is empty or they are disconnected.'''
        others = np.fromiter(other, dtype=np.int64)
        if not self._ordinals or others.size == 0:
            return math.inf
        best = math.inf
        for i in self._ordinals:
            row = self._parent.distances_from(i)[others]
            reachable = row[row != _UNREACHABLE]
            if reachable.size:
                best = min(best, int(reachable.min()))
        return best

    def union(self, other: Region) -> Region:
        return Region(self._parent, self._members | other._members)

    def to_json(self) -> List[List[int]]:
        return [list(site) for site in self.sites]


@dataclass(frozen=True)
class BoundaryFamily:
    '''
    Boundary sets of a bipartition of a lattice into a half and its complement.

    crossing_sets is the family of connected sets of diameter at most R meeting both halves.
    inner_boundary maps each half to its connected subsets of diameter at most R lying within R
    of the other half. r_boundary maps each half to its R-boundary site set.
    '''
    half: Region
    complement: Region
    R: int
    crossing_sets: Tuple[Region, ...]
    inner_boundary: Mapping[Region, Tuple[Region, ...]]
    r_boundary: Mapping[Region, Region]


def build_lattice(kind: str, **params: Any) -> Lattice:
    '''
    Builds a lattice.

    :param kind: One of 'box', 'chain', 'ring' or 'explicit'.
    :param params: ``extents`` (box), ``n`` (chain, ring; chain also accepts ``extents``),
        ``sites`` (explicit).
    :return: The lattice with its induced adjacency.
    '''
    if kind in ('box', 'chain'):
        extents = params.get('extents')
        if extents is None and 'n' in params:
            extents = [params['n']]
        if extents is None:
            raise LatticeError(f'{kind} lattice needs extents')
        if isinstance(extents, int):
            extents = [extents]
        extents = [int(e) for e in extents]
        if kind == 'chain' and len(extents) != 1:
            raise LatticeError('A chain has exactly one extent')
        if any(e <= 0 for e in extents):
            raise LatticeError(f'Extents must be positive, got {extents}')
        sites = itertools.product(*(range(e) for e in extents))
        return Lattice(sites, kind=kind)

    elif kind == 'ring':
        n = int(params['n'])
        if n <= 0:
            raise LatticeError(f'Ring size must be positive, got {n}')
        extra = [((n - 1,), (0,))] if n > 2 else []
        return Lattice(((k,) for k in range(n)), extra_edges=extra, kind=kind)

    elif kind == 'explicit':
        return Lattice(params['sites'], extra_edges=params.get('extra_edges', ()), kind=kind)

    raise LatticeError(f'Unknown lattice kind {kind!r}')


def graph_distance(lat: Lattice, x: Any, y: Any) -> Distance:
    '''
    :return: Length of a shortest path from x to y in the lattice, math.inf if there is none.
    '''
    return lat.distance(lat.ordinal(x), lat.ordinal(y))


def ball(lat: Lattice, x: Any, r: Union[int, float, Fraction]) -> Region:
    '''
    :param r: Non-negative radius, compared exactly against integer distances.
    :return: {u : d(x, u) <= r}.
    '''
    radius = Fraction(r)
    if radius < 0:
        raise LatticeError(f'Radius must be non-negative, got {r}')
    row = lat.distances_from(lat.ordinal(x))
    limit = math.floor(radius)
    return Region(lat, np.flatnonzero((row != _UNREACHABLE) & (row <= limit)))


def complement(region: Region) -> Region:
    return Region(region.parent, set(range(len(region.parent))) - region.members)


def inradius(region: Region) -> Distance:
    '''
    Largest distance from a member of the region to the rest of the lattice, math.inf when the
    region is the whole lattice.
    '''
    outside = complement(region).ordinals
    if not outside:
        return math.inf
    best: Distance = 0
    for ordinal in region.ordinals:
        best = max(best, Region(region.parent, (ordinal,)).distance_to(outside))
    return best


def r_boundary(region: Region, R: int) -> Region:
    '''Sites u with max(d(u, region), d(u, complement)) <= R.'''
    lat = region.parent
    outside = complement(region)
    members = []
    for u in range(len(lat)):
        single = Region(lat, (u,))
        if max(single.distance_to(region.ordinals), single.distance_to(outside.ordinals)) <= R:
            members.append(u)
    return Region(lat, members)


def two_block_regions(lat: Lattice, x: Any, y: Any) -> Tuple[Region, Region]:
    '''
    Splits the lattice along a single surface: sites strictly closer to x than half the distance
    from x to y, and the rest.
    '''
    d = graph_distance(lat, x, y)
    if math.isinf(d):
        raise LatticeError(f'{x} and {y} are not connected')
    row = lat.distances_from(lat.ordinal(x))
    near = np.flatnonzero((row != _UNREACHABLE) & (2 * row < d))
    first = Region(lat, near)
    return first, complement(first)


def connected_subsets(
        lat: Lattice, universe: Iterable[int], R: int) -> Iterator[FrozenSet[int]]:
    '''
    Enumerates every non-empty subset of universe that is connected in its induced subgraph and
    has lattice diameter at most R. Each subset is produced exactly once.
    '''
    allowed = frozenset(universe)

    def within(candidate: FrozenSet[int], new: int) -> bool:
        row = lat.distances_from(new)
        return all(row[m] != _UNREACHABLE and row[m] <= R for m in candidate)

    def extend(
            subset: FrozenSet[int], extension: Set[int], root: int
    ) -> Iterator[FrozenSet[int]]:
        yield subset
        extension = set(extension)
        closed = set(subset)
        for m in subset:
            closed.update(lat.neighbours(m))
        while extension:
            w = extension.pop()
            if not within(subset, w):
                continue
            exclusive = {
                u for u in lat.neighbours(w)
                if u in allowed and u > root and u not in closed}
            yield from extend(subset | {w}, extension | exclusive, root)

    for root in sorted(allowed):
        start = {u for u in lat.neighbours(root) if u in allowed and u > root}
        yield from extend(frozenset((root,)), start, root)


def _inner_boundary(half: Region, outside: Region, R: int) -> Tuple[Region, ...]:
    lat = half.parent
    universe = [
        u for u in half.ordinals
        if Region(lat, (u,)).distance_to(outside.ordinals) <= 2 * R]
    found = []
    for subset in connected_subsets(lat, universe, R):
        candidate = Region(lat, subset)
        if candidate.distance_to(outside.ordinals) <= R:
            found.append(candidate)
    return tuple(sorted(found, key=lambda region: (len(region), region.ordinals)))


def bipartition_boundaries(
        lat: Lattice, half: Region, R: int,
        supports: Iterable[Region] = ()) -> BoundaryFamily:
    '''
    Computes the boundary sets of the bipartition (half, complement).

    :param half: One half of the bipartition.
    :param R: Locality radius.
    :param supports: Term supports to include in the crossing family on top of the enumerated
        connected sets, when they qualify.
    :return: The boundary family.
    '''
    if half.parent != lat:
        raise LatticeError('Region does not belong to this lattice')
    if R < 0:
        raise LatticeError(f'R must be non-negative, got {R}')

    outside = complement(half)
    boundary_sites = r_boundary(half, R)

    def crossing(members: FrozenSet[int]) -> bool:
        return bool(members & half.members) and bool(members & outside.members)

    crossing_sets = {
        subset for subset in connected_subsets(lat, boundary_sites.ordinals, R)
        if crossing(subset)}
    for support in supports:
        if crossing(support.members) and support.diameter() <= R:
            crossing_sets.add(support.members)

    return BoundaryFamily(
        half=half,
        complement=outside,
        R=R,
        crossing_sets=tuple(
            Region(lat, members)
            for members in sorted(crossing_sets, key=lambda m: (len(m), sorted(m)))),
        inner_boundary={
            half: _inner_boundary(half, outside, R),
            outside: _inner_boundary(outside, half, R),
        },
        r_boundary={half: boundary_sites, outside: boundary_sites},
    )


def lattice_to_json(lat: Lattice) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        'dimension': lat.dimension,
        'sites': [list(site) for site in lat.sites],
    }
    if lat.extra_edges:
        document['extra_edges'] = [[list(a), list(b)] for a, b in lat.extra_edges]
    return document


def lattice_from_json(document: Mapping[str, Any]) -> Lattice:
    lat = Lattice(
        document['sites'],
        extra_edges=[(a, b) for a, b in document.get('extra_edges', [])])
    if lat.dimension != document['dimension']:
        raise LatticeError(
            f'Declared dimension {document["dimension"]} does not match sites ({lat.dimension})')
    return lat
