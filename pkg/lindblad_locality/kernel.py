# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Coherence kernels: contour integrals of products of resolvents of the non-hermitian
Hamiltonians of two separated blocks, and the coherence bound they give for Abel averages.

For blocks Lambda_x, Lambda_y around x and y,

    k(u, v) = int_Gamma <x, (z - D_x)^-1 u> <v, (epsilon - z - D_y*)^-1 y> dz / 2 pi i

where Gamma winds once anticlockwise around the spectrum of D_x inside Re z < epsilon.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

# Third-party imports
import numpy as np
import scipy.linalg as la

# Local imports
from .decay import DecayFit, fit_exponential_decay
from .dissipative import (
    BoundaryClosure, ClosureTerms, DissipativeHamiltonian, build_dissipative,
    smallest_singular_value, spectral_envelope,
)
from .dynamics import DensityMatrix, Superoperator, abel_average, assemble_superoperator, unvec, vec
from .errors import (
    ContourError, DimensionCapError, ModelError, PreconditionError,
)
from .lattice import Lattice, Region, Site, ball, complement, graph_distance, r_boundary, \
    two_block_regions
from .model import LindbladModel


_logger = logging.getLogger(__name__)

NODES_PER_SIDE = 64
MAX_NODES_PER_SIDE = 1024
PANEL_NODES = 16
DEFAULT_MARGIN = 0.5
CONVERGENCE_TOLERANCE = 1e-9
GAP_TOLERANCE = 1e-12
BOUND_SLACK = 1e-10

#: Largest lattice for the dense check of the integral representation.
DENSE_ORACLE_LIMIT = 12
#: Largest lattice for the dense decoupled Abel average.
LOCAL_ABEL_LIMIT = 16

GEOMETRIES = ('three_block', 'two_block')

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(PANEL_NODES)


@dataclass(frozen=True)
class Contour:
    '''
    Rectangle right - i top -> right + i top -> left + i top -> left - i top, closed.

    Every side carries a composite Gauss-Legendre rule made of panels of 16 nodes.
    '''
    right: float
    left: float
    top: float
    margin: float
    half_width: float
    nodes_per_side: int = NODES_PER_SIDE

    @property
    def right_offset(self) -> float:
        return self.right

    @property
    def vertices(self) -> Tuple[complex, complex, complex, complex]:
        return (complex(self.right, -self.top), complex(self.right, self.top),
                complex(self.left, self.top), complex(self.left, -self.top))

    def nodes(self, per_side: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        '''
        :return: Quadrature points and weights, the weights including dz. The first per_side
            points lie on the right segment.
        '''
        per_side = per_side or self.nodes_per_side
        if per_side <= 0 or per_side % PANEL_NODES:
            raise PreconditionError(
                f'Nodes per side must be a positive multiple of {PANEL_NODES}, got {per_side}')
        panels = per_side // PANEL_NODES
        offsets = np.arange(panels) / panels
        t = (offsets[:, None] + (_GAUSS_NODES[None, :] + 1) / (2 * panels)).ravel()
        w = np.tile(_GAUSS_WEIGHTS / (2 * panels), panels)

        points, weights = [], []
        vertices = self.vertices
        for start, end in zip(vertices, vertices[1:] + vertices[:1]):
            points.append(start + (end - start) * t)
            weights.append((end - start) * w)
        return np.concatenate(points), np.concatenate(weights)

    def winding_number(self, point: complex, per_side: Optional[int] = None) -> complex:
        z, w = self.nodes(per_side)
        return complex(np.sum(w / (z - point)) / (2j * np.pi))

    def encloses(self, point: complex) -> bool:
        return self.left < point.real < self.right and abs(point.imag) < self.top


def build_contour(
        D: DissipativeHamiltonian, epsilon: float,
        margin: float = DEFAULT_MARGIN,
        right_offset: Optional[float] = None,
        nodes_per_side: int = NODES_PER_SIDE,
        half_width: Optional[float] = None,
        scale: float = 1.0,
        verify: bool = True) -> Contour:
    '''
    Builds the rectangle around the box [-F, 0] x i[-F, F], F = ||Re D|| + ||Im D||, at
    distance margin from its top, left and bottom sides.

    :param right_offset: Real part of the right segment, in [0, epsilon). Defaults to 0 when
        -Re D has a positive gap, epsilon / 2 otherwise.
    :param half_width: Replaces the measured F.
    :param scale: Enlarges the rectangle, the right segment staying in place.
    :param verify: Checks that every eigenvalue of D is enclosed and that no node off the right
        segment lies in the margin-pseudospectrum of D.
    :raises ContourError: If the right segment would touch the spectrum or the checks fail.
    '''
    if not epsilon > 0:
        raise PreconditionError(f'epsilon must be positive, got {epsilon}')
    if not margin > 0:
        raise PreconditionError(f'Contour margin must be positive, got {margin}')
    if scale < 1:
        raise PreconditionError(f'Contour scale must be at least 1, got {scale}')

    envelope = spectral_envelope(D)
    gapped = envelope.gap > GAP_TOLERANCE
    if right_offset is None:
        right_offset = 0.0 if gapped else epsilon / 2
    elif not 0 <= right_offset < epsilon:
        raise ContourError(f'Right offset {right_offset} is not in [0, {epsilon})')
    elif right_offset == 0 and not gapped:
        raise ContourError(
            f'-Re D has gap {envelope.gap}, the right segment cannot sit on the imaginary axis')

    width = envelope.half_width if half_width is None else float(half_width)
    extent = scale * (width + margin)
    contour = Contour(
        right=float(right_offset), left=-extent, top=extent, margin=float(margin),
        half_width=width, nodes_per_side=nodes_per_side)
    _logger.debug('Contour %r around %d eigenvalues', contour, len(envelope.eigenvalues))

    if verify:
        outside = [ev for ev in envelope.eigenvalues if not contour.encloses(ev)]
        if outside:
            raise ContourError(f'Contour misses eigenvalues {outside[:3]}')
        z, _ = contour.nodes()
        for point in z[nodes_per_side:]:
            if smallest_singular_value(D.matrix, point) < margin * (1 - 1e-9):
                raise ContourError(f'Node {point} lies in the {margin}-pseudospectrum')
    return contour


def _integrate(
        contour: Contour, term: Callable[[complex, complex], np.ndarray], per_side: int,
        executor: Optional[Executor]) -> np.ndarray:
    z, w = contour.nodes(per_side)
    values = executor.map(term, z, w) if executor else map(term, z, w)
    total: Any = 0
    for value in values:
        total = total + value
    return np.asarray(total) / (2j * np.pi)


def _adaptive_integral(
        contour: Contour, term: Callable[[complex, complex], np.ndarray],
        executor: Optional[Executor]) -> Tuple[np.ndarray, int, bool]:
    per_side = contour.nodes_per_side
    current = _integrate(contour, term, per_side, executor)
    while per_side < MAX_NODES_PER_SIDE:
        per_side *= 2
        refined = _integrate(contour, term, per_side, executor)
        change = float(np.abs(refined - current).max(initial=0.0))
        size = float(np.abs(refined).max(initial=0.0))
        _logger.debug('Quadrature with %d nodes per side: change %r', per_side, change)
        current = refined
        if change <= CONVERGENCE_TOLERANCE * size:
            return current, per_side, True
    _logger.warning('Contour quadrature not converged at %d nodes per side', per_side)
    return current, per_side, False


# Geometry

def kernel_geometry(
        lat: Lattice, x: Any, y: Any, R: int,
        geometry: str = 'three_block') -> Tuple[Region, Region]:
    '''
    Blocks around x and y: balls of radius d(x, y) / 3 ('three_block'), or the sites closer to x
    than d(x, y) / 2 and the rest ('two_block').

    :raises PreconditionError: If d(x, y) is infinite, zero, or below 3R (2R for 'two_block').
    '''
    d = graph_distance(lat, x, y)
    if math.isinf(d) or d == 0:
        raise PreconditionError(f'{x} and {y} are not two connected distinct sites')
    if geometry == 'three_block':
        if d < 3 * R:
            raise PreconditionError(f'd(x, y) = {d} is below 3R = {3 * R}')
        third = Fraction(int(d), 3)
        return ball(lat, x, third), ball(lat, y, third)
    elif geometry == 'two_block':
        if d < 2 * R:
            raise PreconditionError(f'd(x, y) = {d} is below 2R = {2 * R}')
        return two_block_regions(lat, x, y)
    raise PreconditionError(f'Unknown geometry {geometry!r}, expected one of {GEOMETRIES}')


def _blocks(region_x: Region, region_y: Region, geometry: str) -> Tuple[Region, ...]:
    if geometry == 'two_block':
        return (region_x, region_y)
    rest = complement(region_x.union(region_y))
    return (region_x, region_y, rest) if len(rest) else (region_x, region_y)


def _closure_terms(
        model: LindbladModel, closure: BoundaryClosure,
        region_x: Region, region_y: Region, geometry: str) -> ClosureTerms:
    if geometry == 'two_block':
        first = closure.realize(model, region_x)
        second = closure.realize(model, region_y)
        return ClosureTerms(first.hamiltonian + second.hamiltonian, first.jumps + second.jumps)

    terms = closure.realize(model, region_x.union(region_y))
    for support in [t.support for t in terms.hamiltonian] + [j.support for j in terms.jumps]:
        if not (support <= region_x or support <= region_y):
            raise ModelError(f'Closure support {support!r} couples both blocks')
    return terms


def _decoupled_model(
        model: LindbladModel, blocks: Sequence[Region], terms: ClosureTerms) -> LindbladModel:
    '''Terms inside a single block, plus the closure terms.'''
    def inside(support: Region) -> bool:
        return any(support <= block for block in blocks)

    return LindbladModel(
        model.lattice,
        [t for t in model.hamiltonian_terms if inside(t.support)] + list(terms.hamiltonian),
        [j for j in model.jump_operators if inside(j.support)] + list(terms.jumps),
        kind='decoupled')


def _dense_resolvent(generator: Superoperator, rho: np.ndarray, epsilon: float) -> np.ndarray:
    shifted = epsilon * np.eye(generator.size ** 2) - generator.dense()
    return unvec(la.solve(shifted, vec(rho)), generator.size)


def _unit(size: int, index: int) -> np.ndarray:
    unit = np.zeros(size, dtype=complex)
    unit[index] = 1
    return unit


# Kernel

@dataclass(frozen=True, eq=False)
class CoherenceKernel:
    '''
    Kernel values k(u, v), rows following region_x.ordinals and columns region_y.ordinals.
    '''
    x: Site
    y: Site
    epsilon: float
    region_x: Region
    region_y: Region
    values: np.ndarray
    closure: BoundaryClosure
    closure_terms: ClosureTerms
    geometry: str
    contour: Contour
    nodes_per_side: int
    converged: bool

    def __getitem__(self, pair: Tuple[Any, Any]) -> complex:
        lat = self.region_x.parent
        u, v = pair
        return complex(self.values[self.region_x.position(lat.ordinal(u)),
                                   self.region_y.position(lat.ordinal(v))])

    def distances(self) -> Tuple[np.ndarray, np.ndarray]:
        '''d(x, u) for the rows and d(y, v) for the columns.'''
        lat = self.region_x.parent
        from_x = lat.distances_from(lat.ordinal(self.x))
        from_y = lat.distances_from(lat.ordinal(self.y))
        return (from_x[list(self.region_x.ordinals)], from_y[list(self.region_y.ordinals)])

    def rows(self) -> List[Tuple[Site, Site, int, int, float, float, float]]:
        '''(u, v, d_xu, d_yv, re_k, im_k, abs_k) rows.'''
        lat = self.region_x.parent
        d_x, d_y = self.distances()
        rows = []
        for i, u in enumerate(self.region_x.ordinals):
            for j, v in enumerate(self.region_y.ordinals):
                value = complex(self.values[i, j])
                rows.append((lat.sites[u], lat.sites[v], int(d_x[i]), int(d_y[j]),
                             value.real, value.imag, abs(value)))
        return rows

    def decay_samples(self) -> List[Tuple[int, float]]:
        '''(d(x, u) + d(y, v), |k(u, v)|) pairs.'''
        return [(row[2] + row[3], row[6]) for row in self.rows()]


def compute_kernel(
        model: LindbladModel, x: Any, y: Any, epsilon: float,
        closure: Optional[BoundaryClosure] = None,
        geometry: str = 'three_block',
        margin: float = DEFAULT_MARGIN,
        right_offset: Optional[float] = None,
        nodes_per_side: int = NODES_PER_SIDE,
        half_width: Optional[float] = None,
        scale: float = 1.0,
        executor: Optional[Executor] = None) -> CoherenceKernel:
    '''
    Computes the kernel associated to x and y by contour quadrature, doubling the nodes until
    successive values agree.

    :param closure: Boundary closure of Lambda_x u Lambda_y ('three_block'), or of each block
        ('two_block').
    :param executor: Evaluates quadrature nodes concurrently; the sum keeps node order.
    :raises PreconditionError: If x and y are too close for the geometry.
    :raises ContourError: If no admissible contour exists.
    '''
    if not epsilon > 0:
        raise PreconditionError(f'epsilon must be positive, got {epsilon}')
    closure = closure or BoundaryClosure.none()
    region_x, region_y = kernel_geometry(
        model.lattice, x, y, model.declared_locality.R, geometry)
    terms = _closure_terms(model, closure, region_x, region_y, geometry)
    d_x = build_dissipative(model, region_x, closure, terms)
    d_y = build_dissipative(model, region_y, closure, terms)
    contour = build_contour(
        d_x, epsilon, margin=margin, right_offset=right_offset,
        nodes_per_side=nodes_per_side, half_width=half_width, scale=scale)

    left = d_x.matrix
    right = d_y.matrix.conj().T
    eye_x = np.eye(d_x.size)
    eye_y = np.eye(d_y.size)
    e_x = _unit(d_x.size, d_x.position(x))
    e_y = _unit(d_y.size, d_y.position(y))

    def term(z: complex, w: complex) -> np.ndarray:
        row = la.solve((z * eye_x - left).T, e_x)
        column = la.solve((epsilon - z) * eye_y - right, e_y)
        return w * np.outer(row, column)

    values, per_side, converged = _adaptive_integral(contour, term, executor)
    lat = model.lattice
    return CoherenceKernel(
        x=lat.sites[lat.ordinal(x)], y=lat.sites[lat.ordinal(y)], epsilon=float(epsilon),
        region_x=region_x, region_y=region_y, values=values,
        closure=closure, closure_terms=terms, geometry=geometry, contour=contour,
        nodes_per_side=per_side, converged=converged)


def verify_integral_representation(
        model: LindbladModel, half: Region, rho: np.ndarray, epsilon: float,
        closure: Optional[BoundaryClosure] = None, **contour_options: Any) -> float:
    '''
    Compares the contour integral of (z - D_half)^-1 rho (epsilon - z - D_rest*)^-1 with the dense
    solution of (epsilon - L0)^-1 (rho), L0 the Lindbladian of the terms inside either half plus
    the closure of both halves.

    :param rho: Matrix supported on the rows of half and the columns of its complement.
    :return: Largest entry deviation on that block.
    :raises DimensionCapError: Above the dense oracle limit.
    :raises PreconditionError: If rho has entries outside the off-diagonal block.
    '''
    lat = model.lattice
    if len(lat) > DENSE_ORACLE_LIMIT:
        raise DimensionCapError(
            f'Dense oracle limited to {DENSE_ORACLE_LIMIT} sites, lattice has {len(lat)}')
    rest = complement(half)
    if not len(half) or not len(rest):
        raise PreconditionError('Both halves of the bipartition must be non-empty')
    rho = np.asarray(rho, dtype=complex)
    rows, columns = list(half.ordinals), list(rest.ordinals)
    outside = np.ones(rho.shape, dtype=bool)
    outside[np.ix_(rows, columns)] = False
    if np.any(rho[outside] != 0):
        raise PreconditionError('rho must vanish outside the (half, complement) block')

    closure = closure or BoundaryClosure.none()
    terms = _closure_terms(model, closure, half, rest, 'two_block')
    d_k = build_dissipative(model, half, closure, terms)
    d_j = build_dissipative(model, rest, closure, terms)
    contour = build_contour(d_k, epsilon, **contour_options)

    block = rho[np.ix_(rows, columns)]
    eye_k = np.eye(d_k.size)
    eye_j = np.eye(d_j.size)
    right = d_j.matrix.conj().T

    def term(z: complex, w: complex) -> np.ndarray:
        left = la.solve(z * eye_k - d_k.matrix, block)
        return w * la.solve(((epsilon - z) * eye_j - right).T, left.T).T

    integral, _, _ = _adaptive_integral(contour, term, None)
    decoupled = _decoupled_model(model, (half, rest), terms)
    dense = _dense_resolvent(assemble_superoperator(decoupled), rho, epsilon)
    return float(np.abs(integral - dense[np.ix_(rows, columns)]).max(initial=0.0))


def local_abel_block(
        model: LindbladModel, x: Any, y: Any, epsilon: float,
        rho: Union[DensityMatrix, np.ndarray],
        closure: Optional[BoundaryClosure] = None, geometry: str = 'three_block') -> complex:
    '''
    <x, epsilon (epsilon - L0)^-1 (rho) y> with L0 the decoupled Lindbladian of the kernel
    geometry, computed densely. For 'three_block', rho is first cut down to
    Lambda_x u Lambda_y.
    '''
    lat = model.lattice
    if len(lat) > LOCAL_ABEL_LIMIT:
        raise DimensionCapError(
            f'Dense decoupled average limited to {LOCAL_ABEL_LIMIT} sites, lattice has {len(lat)}')
    closure = closure or BoundaryClosure.none()
    region_x, region_y = kernel_geometry(lat, x, y, model.declared_locality.R, geometry)
    terms = _closure_terms(model, closure, region_x, region_y, geometry)
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if geometry == 'three_block':
        kept = np.zeros(len(lat), dtype=bool)
        kept[list(region_x.union(region_y).ordinals)] = True
        matrix = np.where(np.outer(kept, kept), matrix, 0)
    decoupled = _decoupled_model(model, _blocks(region_x, region_y, geometry), terms)
    solution = _dense_resolvent(assemble_superoperator(decoupled), matrix, epsilon)
    return complex(epsilon * solution[lat.ordinal(x), lat.ordinal(y)])


def boundary_norm_bound(
        model: LindbladModel, blocks: Union[Region, Sequence[Region]],
        closure_terms: Optional[ClosureTerms] = None) -> float:
    '''
    Triangle-inequality bound on the induced norm of the boundary Lindbladian: 2 ||h_Z|| per
    Hamiltonian term and 2 ||L||^2 per jump operator whose support is not inside a single block,
    and the same for every closure term.

    :param blocks: The blocks of the decomposition; a single region stands for itself and its
        complement.
    '''
    if isinstance(blocks, Region):
        blocks = (blocks, complement(blocks))

    def crossing(support: Region) -> bool:
        return not any(support <= block for block in blocks)

    total = sum(2 * t.norm for t in model.hamiltonian_terms if crossing(t.support))
    total += sum(2 * j.norm ** 2 for j in model.jump_operators if crossing(j.support))
    if closure_terms:
        total += sum(2 * t.norm for t in closure_terms.hamiltonian)
        total += sum(2 * j.norm ** 2 for j in closure_terms.jumps)
    return float(total)


@dataclass(frozen=True, eq=False)
class CoherenceBoundReport:
    lhs: float
    rhs: float
    boundary_norm_bound: float
    abel_value: complex
    kernel_term: complex
    satisfied: bool
    decay_fit: Optional[DecayFit]
    kernel: CoherenceKernel

    def to_json(self) -> Dict[str, Any]:
        fit = None
        if self.decay_fit is not None:
            fit = {'C': self.decay_fit.C, 'mu': self.decay_fit.mu,
                   'r_squared': self.decay_fit.r_squared}
        return {
            'x': list(self.kernel.x),
            'y': list(self.kernel.y),
            'epsilon': self.kernel.epsilon,
            'geometry': self.kernel.geometry,
            'closure': dict(self.kernel.closure.to_json()),
            'lhs': self.lhs,
            'rhs': self.rhs,
            'boundary_norm_bound': self.boundary_norm_bound,
            'satisfied': self.satisfied,
            'fit': fit,
        }


def coherence_bound_report(
        model: LindbladModel, rho0: DensityMatrix, x: Any, y: Any, epsilon: float,
        closure: Optional[BoundaryClosure] = None,
        geometry: str = 'three_block',
        executor: Optional[Executor] = None,
        superoperator: Optional[Superoperator] = None,
        **contour_options: Any) -> CoherenceBoundReport:
    '''
    Evaluates both sides of

        |<x, A_eps(rho0) y> - eps sum k(u, v) rho0(u, v)|
            <= sum 1[u in dR(Lambda_x) or v in dR(Lambda_y)] |k(u, v)| ||L_boundary||

    with the Abel average of the full model and the triangle-inequality bound on the boundary
    Lindbladian.
    '''
    kernel = compute_kernel(
        model, x, y, epsilon, closure, geometry, executor=executor, **contour_options)
    lat = model.lattice
    region_x, region_y = kernel.region_x, kernel.region_y

    averaged = abel_average(model, rho0, epsilon, superoperator)
    abel_value = complex(averaged.matrix[lat.ordinal(x), lat.ordinal(y)])
    block = rho0.matrix[np.ix_(list(region_x.ordinals), list(region_y.ordinals))]
    kernel_term = complex(epsilon * np.sum(kernel.values * block))
    lhs = abs(abel_value - kernel_term)

    R = model.declared_locality.R
    edge_x = r_boundary(region_x, R)
    edge_y = r_boundary(region_y, R)
    mask = np.logical_or.outer(
        [u in edge_x for u in region_x.ordinals], [v in edge_y for v in region_y.ordinals])
    norm_bound = boundary_norm_bound(
        model, _blocks(region_x, region_y, geometry), kernel.closure_terms)
    rhs = float(np.abs(kernel.values)[mask].sum()) * norm_bound
    satisfied = lhs <= rhs + BOUND_SLACK
    if not satisfied:
        _logger.warning('Coherence bound violated at x=%s y=%s eps=%r: %r > %r',
                        x, y, epsilon, lhs, rhs)

    try:
        fit: Optional[DecayFit] = fit_exponential_decay(kernel.decay_samples())
    except PreconditionError:
        fit = None
    return CoherenceBoundReport(
        lhs=lhs, rhs=rhs, boundary_norm_bound=norm_bound, abel_value=abel_value,
        kernel_term=kernel_term, satisfied=satisfied, decay_fit=fit, kernel=kernel)
