# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Non-hermitian Hamiltonians D = -i H - 1/2 sum L*L restricted to a region, with boundary
closures, and their spectral properties.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
import scipy.linalg as la

# Local imports
from .errors import DimensionCapError, ModelError, PreconditionError
from .lattice import Region, complement, inradius
from .model import (
    JumpOperator, LindbladModel, LocalHamiltonianTerm, _parse_matrix, embed,
)
from .pseudospectra import (  # noqa: F401
    ComplexGrid, PseudospectrumGrid, ResolventCheck,
    box_exclusion_check, box_half_width, dissipative_resolvent_check,
    perturbation_bound_check, pseudospectrum_grid, smallest_singular_value,
)


_logger = logging.getLogger(__name__)

#: Largest region handled by the dense eigensolvers.
DENSE_EIGEN_LIMIT = 2048

CLOSURE_KINDS = ('none', 'dephasing_site', 'dirichlet', 'explicit')


@dataclass(frozen=True)
class ClosureTerms:
    '''Closure terms b_Z and B_a realized on a region.'''
    hamiltonian: Tuple[LocalHamiltonianTerm, ...] = ()
    jumps: Tuple[JumpOperator, ...] = ()

    def within(self, region: Region) -> ClosureTerms:
        return ClosureTerms(
            tuple(t for t in self.hamiltonian if t.support <= region),
            tuple(j for j in self.jumps if j.support <= region))

    def __bool__(self) -> bool:
        return bool(self.hamiltonian or self.jumps)


@dataclass(frozen=True)
class BoundaryClosure:
    '''
    A boundary Lindbladian used to close a region.

    - 'none': no terms.
    - 'dephasing_site': B = sqrt(rate) |u><u| at the listed sites.
    - 'dirichlet': B_x = sqrt(2 rate (deg(x) - deg_region(x))) |x><x| on the inner boundary.
    - 'explicit': user terms, same entry format as explicit models.

    Sites and terms falling outside the region being closed are ignored, so one closure can
    serve both blocks of a geometry.
    '''
    kind: str = 'none'
    sites: Tuple[Tuple[int, ...], ...] = ()
    rate: float = 1.0
    hamiltonian: Tuple[Mapping[str, Any], ...] = field(default=())
    jumps: Tuple[Mapping[str, Any], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in CLOSURE_KINDS:
            raise ModelError(f'Unknown closure kind {self.kind!r}, expected one of {CLOSURE_KINDS}')
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise ModelError(f'Closure rate must be finite and non-negative, got {self.rate}')
        object.__setattr__(self, 'sites', tuple(tuple(int(c) for c in (
            (s,) if isinstance(s, int) else s)) for s in self.sites))
        object.__setattr__(self, 'hamiltonian', tuple(self.hamiltonian))
        object.__setattr__(self, 'jumps', tuple(self.jumps))

    @classmethod
    def none(cls) -> BoundaryClosure:
        return cls('none')

    @classmethod
    def dephasing_site(cls, sites: Iterable[Any], rate: float = 1.0) -> BoundaryClosure:
        return cls('dephasing_site', sites=tuple(sites), rate=rate)

    @classmethod
    def dirichlet(cls, rate: float = 1.0) -> BoundaryClosure:
        return cls('dirichlet', rate=rate)

    @classmethod
    def explicit(cls, hamiltonian: Sequence[Mapping[str, Any]] = (),
                 jumps: Sequence[Mapping[str, Any]] = ()) -> BoundaryClosure:
        return cls('explicit', hamiltonian=tuple(hamiltonian), jumps=tuple(jumps))

    def realize(self, model: LindbladModel, region: Region) -> ClosureTerms:
        '''
        Builds the closure terms of region and checks they are admissible: supports inside the
        region, of diameter at most R and within distance R of the complement.

        :raises ModelError: If a support lies outside the inner boundary of the region.
        '''
        lat = model.lattice
        terms: ClosureTerms
        if self.kind == 'none':
            terms = ClosureTerms()

        elif self.kind == 'dephasing_site':
            amplitude = math.sqrt(self.rate)
            jumps = []
            for site in self.sites:
                ordinal = lat.ordinal(site)
                if ordinal in region and amplitude > 0:
                    jumps.append(JumpOperator(
                        Region(lat, (ordinal,)), [[amplitude]], f'closure:{site}'))
            terms = ClosureTerms((), tuple(jumps))

        elif self.kind == 'dirichlet':
            jumps = []
            for ordinal in region.ordinals:
                inside = sum(1 for n in lat.neighbours(ordinal) if n in region)
                missing = lat.degree(ordinal) - inside
                if missing > 0 and self.rate > 0:
                    jumps.append(JumpOperator(
                        Region(lat, (ordinal,)), [[math.sqrt(2 * self.rate * missing)]],
                        f'dirichlet:{lat.sites[ordinal]}'))
            terms = ClosureTerms((), tuple(jumps))

        else:
            hamiltonian = []
            for entry in self.hamiltonian:
                support = lat.region(entry['support'])
                if support <= region:
                    hamiltonian.append(
                        LocalHamiltonianTerm(support, _parse_matrix(entry['matrix'])))
            jumps = []
            for index, entry in enumerate(self.jumps):
                support = lat.region(entry['support'])
                if support <= region:
                    jumps.append(JumpOperator(
                        support, _parse_matrix(entry['matrix']),
                        str(entry.get('label', f'closure:{index}'))))
            terms = ClosureTerms(tuple(hamiltonian), tuple(jumps))

        self._check_admissible(model, region, terms)
        return terms

    @staticmethod
    def _check_admissible(model: LindbladModel, region: Region, terms: ClosureTerms) -> None:
        R = model.declared_locality.R
        outside = complement(region).ordinals
        for support in [t.support for t in terms.hamiltonian] + [j.support for j in terms.jumps]:
            if support.diameter() > R or support.distance_to(outside) > R:
                raise ModelError(
                    f'Closure support {support!r} is outside the inner boundary of the region '
                    f'(R={R})')
        norms = [t.norm for t in terms.hamiltonian] + [j.norm for j in terms.jumps]
        if norms and max(norms) > model.declared_locality.N * (1 + 1e-12):
            _logger.warning('Closure term norm %r exceeds the declared N=%r',
                            max(norms), model.declared_locality.N)

    def to_json(self) -> Mapping[str, Any]:
        document: dict = {'kind': self.kind}
        if self.kind == 'dephasing_site':
            document.update(sites=[list(s) for s in self.sites], rate=self.rate)
        elif self.kind == 'dirichlet':
            document.update(rate=self.rate)
        elif self.kind == 'explicit':
            document.update(hamiltonian=list(self.hamiltonian), jumps=list(self.jumps))
        return document


@dataclass(frozen=True)
class BoundConstants:
    '''Locality constants of the terms entering a restricted operator.'''
    cover_count: int
    I: int  # noqa: E741
    N: float

    @property
    def re_bound(self) -> float:
        return self.cover_count * self.I * self.N ** 2

    @property
    def im_bound(self) -> float:
        return self.cover_count * self.N


def _bound_constants(
        region: Region, hamiltonian: Sequence[LocalHamiltonianTerm],
        jumps: Sequence[JumpOperator]) -> BoundConstants:
    supports = {t.support for t in hamiltonian} | {j.support for j in jumps}
    cover = {o: 0 for o in region.ordinals}
    for support in supports:
        for ordinal in support.ordinals:
            cover[ordinal] += 1
    per_support: dict = {}
    for jump in jumps:
        per_support[jump.support] = per_support.get(jump.support, 0) + 1
    norms = [t.norm for t in hamiltonian] + [j.norm for j in jumps]
    return BoundConstants(
        cover_count=max(cover.values(), default=0),
        I=max(per_support.values(), default=0),
        N=max(norms, default=0.0))


@dataclass(frozen=True, eq=False)
class DissipativeHamiltonian:
    '''
    D = -i sum h_Z - 1/2 sum L*L - i sum b_Z - 1/2 sum B*B over the terms inside a region.

    Rows and columns follow region.ordinals.
    '''
    region: Region
    matrix: np.ndarray
    model: LindbladModel
    closure: BoundaryClosure
    closure_terms: ClosureTerms
    constants: BoundConstants

    @property
    def size(self) -> int:
        return len(self.region)

    def hermitian_part(self) -> np.ndarray:
        '''Re D = (D + D*) / 2.'''
        return (self.matrix + self.matrix.conj().T) / 2

    def anti_hermitian_part(self) -> np.ndarray:
        '''Im D = (D - D*) / 2i.'''
        return (self.matrix - self.matrix.conj().T) / 2j

    def position(self, site: Any) -> int:
        return self.region.position(self.region.parent.ordinal(site))


def build_dissipative(
        model: LindbladModel, region: Region,
        closure: Optional[BoundaryClosure] = None,
        closure_terms: Optional[ClosureTerms] = None) -> DissipativeHamiltonian:
    '''
    Restricts the non-hermitian Hamiltonian of a model to region.

    :param closure: Boundary closure realized on region.
    :param closure_terms: Already realized closure terms (for instance on a larger region
        containing this one); only those inside region are used. Takes precedence over closure.
    :raises ModelError: If the closure is not admissible or D is not maximally dissipative.
    '''
    if region.parent != model.lattice:
        raise ModelError('Region does not belong to the model lattice')
    closure = closure or BoundaryClosure.none()
    if closure_terms is None:
        closure_terms = closure.realize(model, region)
    else:
        closure_terms = closure_terms.within(region)

    hamiltonian, jumps = model.terms_within(region)
    hamiltonian = hamiltonian + closure_terms.hamiltonian
    jumps = jumps + closure_terms.jumps

    size = len(region)
    matrix = np.zeros((size, size), dtype=complex)
    for term in hamiltonian:
        matrix -= 1j * embed(term.matrix, term.support, region)
    for jump in jumps:
        matrix -= 0.5 * embed(jump.matrix.conj().T @ jump.matrix, jump.support, region)

    if size:
        top = la.eigvalsh((matrix + matrix.conj().T) / 2).max()
        if top > 1e-12 * max(1.0, float(np.abs(matrix).max())):
            raise ModelError(f'Restricted operator is not dissipative: Re D has eigenvalue {top}')

    return DissipativeHamiltonian(
        region=region, matrix=matrix, model=model, closure=closure,
        closure_terms=closure_terms,
        constants=_bound_constants(region, hamiltonian, jumps))


@dataclass(frozen=True, eq=False)
class SpectralEnvelope:
    '''
    Eigenvalues of D, the norms of its Hermitian and anti-Hermitian parts, the rectangle
    [-F, 0] x i[-F, F] with F = re_norm + im_norm that contains the spectrum, and the gap
    lambda_min(-Re D).
    '''
    eigenvalues: np.ndarray
    re_norm: float
    im_norm: float
    gap: float
    re_bound: float
    im_bound: float

    @property
    def half_width(self) -> float:
        return self.re_norm + self.im_norm

    @property
    def box(self) -> Tuple[complex, complex]:
        '''Lower left and upper right corners.'''
        return complex(-self.half_width, -self.half_width), complex(0, self.half_width)

    def inside_box(self, slack: float = 1e-8) -> bool:
        F = self.half_width + slack
        return bool(np.all(
            (self.eigenvalues.real <= slack) & (self.eigenvalues.real >= -F)
            & (np.abs(self.eigenvalues.imag) <= F)))

    @property
    def dissipative(self) -> bool:
        return bool(np.all(self.eigenvalues.real <= 1e-10))

    @property
    def within_norm_bounds(self) -> bool:
        slack = 1e-10
        return (self.re_norm <= self.re_bound * (1 + slack) + slack
                and self.im_norm <= self.im_bound * (1 + slack) + slack)

    @property
    def consistent(self) -> bool:
        return self.dissipative and self.inside_box() and self.within_norm_bounds


def spectral_envelope(D: DissipativeHamiltonian) -> SpectralEnvelope:
    '''
    :raises DimensionCapError: Above the dense eigensolver limit.
    '''
    if D.size > DENSE_EIGEN_LIMIT:
        raise DimensionCapError(
            f'Region of {D.size} sites exceeds the dense limit {DENSE_EIGEN_LIMIT}')
    if D.size == 0:
        return SpectralEnvelope(np.zeros(0, dtype=complex), 0.0, 0.0, math.inf, 0.0, 0.0)
    re = D.hermitian_part()
    im = D.anti_hermitian_part()
    try:
        eigenvalues = la.eigvals(D.matrix)
    except la.LinAlgError as error:
        raise PreconditionError(f'Eigensolver failed: {error}') from error
    return SpectralEnvelope(
        eigenvalues=eigenvalues,
        re_norm=float(np.linalg.norm(re, 2)),
        im_norm=float(np.linalg.norm(im, 2)),
        gap=float(-la.eigvalsh(re).max()),
        re_bound=D.constants.re_bound,
        im_bound=D.constants.im_bound,
    )


def random_box_half_width(model: LindbladModel) -> float:
    '''cover_count N (I N + 1): the box half width used uniformly over random models.'''
    report = model.locality
    return report.cover_count * report.N_actual * (report.I_actual * report.N_actual + 1)


# Rank-one perturbations

@dataclass(frozen=True)
class RankOneReport:
    '''
    Direct inversion of z - D, D = D_hat + strength |d><d|, against the two sign variants
    (z - D_hat)^-1 +/- G|d><d|G / (1/strength - g) with g = <d, G d>.
    '''
    deviation_plus: float
    deviation_minus: float
    denominator: complex
    matching: str


def rank_one_resolvent_check(
        d_hat: np.ndarray, site: int, z: complex,
        strength: float = 0.5, tolerance: float = 1e-10) -> RankOneReport:
    '''
    :param d_hat: Unperturbed matrix.
    :param site: Row of the rank-one projector.
    :param z: Spectral parameter, in the resolvent set of both operators.
    :raises PreconditionError: If z is (numerically) in a spectrum, or the update is singular.
    '''
    d_hat = np.asarray(d_hat, dtype=complex)
    size = d_hat.shape[0]
    perturbed = d_hat.copy()
    perturbed[site, site] += strength
    identity = np.eye(size, dtype=complex)
    for operator in (d_hat, perturbed):
        if smallest_singular_value(operator, z) < 1e-12:
            raise PreconditionError(f'{z} is in the spectrum')

    resolvent = la.solve(z * identity - d_hat, identity)
    direct = la.solve(z * identity - perturbed, identity)
    g = complex(resolvent[site, site])
    if strength == 0:
        plus = minus = resolvent
        denominator = complex(math.inf)
    else:
        denominator = 1.0 / strength - g
        if abs(denominator) < 1e-14:
            raise PreconditionError('Singular rank-one shift')
        update = np.outer(resolvent[:, site], resolvent[site, :]) / denominator
        plus, minus = resolvent + update, resolvent - update

    scale = max(1.0, float(np.abs(direct).max()))
    deviation_plus = float(np.abs(plus - direct).max())
    deviation_minus = float(np.abs(minus - direct).max())
    plus_ok = deviation_plus <= tolerance * scale
    minus_ok = deviation_minus <= tolerance * scale
    matching = ('both' if plus_ok and minus_ok else 'plus' if plus_ok
                else 'minus' if minus_ok else 'neither')
    return RankOneReport(deviation_plus, deviation_minus, denominator, matching)


def rank_one_denominator_infimum(
        d_hat: np.ndarray, site: int, energy: float,
        eps_values: Iterable[float], strength: float = 0.5) -> float:
    '''min over epsilon of Re(1/strength - <d, (epsilon + iE - D_hat)^-1 d>).'''
    d_hat = np.asarray(d_hat, dtype=complex)
    size = d_hat.shape[0]
    unit = np.zeros(size, dtype=complex)
    unit[site] = 1
    best = math.inf
    for epsilon in eps_values:
        column = la.solve((epsilon + 1j * energy) * np.eye(size) - d_hat, unit)
        best = min(best, float((1.0 / strength - column[site]).real))
    return best


# Dark states

def dark_states(model: LindbladModel, tolerance: float = 1e-10) -> Tuple[np.ndarray, ...]:
    '''
    Orthonormal vectors annihilated by every jump operator that are eigenvectors of H: the
    largest H-invariant subspace of ker(sum L*L), diagonalized.

    :param tolerance: Relative threshold of the kernel of sum L*L, of the leak out of it under H
        and of the eigenvector residual ||H psi - E psi||.
    '''
    loss = model.dissipation()
    hamiltonian = model.hamiltonian()
    size = loss.shape[0]
    values, vectors = la.eigh(loss)
    scale = max(1.0, float(np.abs(values).max()) if size else 1.0)
    basis = vectors[:, values <= tolerance * scale]
    accuracy = tolerance * max(1.0, float(np.abs(hamiltonian).max()))

    while basis.shape[1]:
        image = hamiltonian @ basis
        leak = image - basis @ (basis.conj().T @ image)
        if np.abs(leak).max() <= accuracy:
            break
        coefficients = la.null_space(leak, rcond=tolerance)
        if coefficients.shape[1] == basis.shape[1]:
            break
        basis = basis @ coefficients

    if not basis.shape[1]:
        return ()
    _, rotation = la.eigh(basis.conj().T @ hamiltonian @ basis)
    states: List[np.ndarray] = []
    for psi in (basis @ rotation).T:
        psi = psi / np.linalg.norm(psi)
        energy = np.vdot(psi, hamiltonian @ psi)
        if np.linalg.norm(hamiltonian @ psi - energy * psi) > accuracy:
            _logger.warning('Dropping an inaccurate dark state candidate')
            continue
        states.append(psi)
    return tuple(states)


# Gaps of Dirichlet-closed regions

def dirichlet_gap(model: LindbladModel, region: Region, rate: float = 1.0) -> float:
    '''Gap lambda_min(-Re D) of the region closed with the Dirichlet boundary closure.'''
    D = build_dissipative(model, region, BoundaryClosure.dirichlet(rate))
    return spectral_envelope(D).gap


@dataclass(frozen=True)
class InradiusReport:
    gap: float
    inradius: float
    bound: float
    passed: bool


def inradius_gap_check(model: LindbladModel, region: Region) -> InradiusReport:
    '''Compares the Dirichlet gap of region with 1 / (inradius |region|).'''
    gap = dirichlet_gap(model, region)
    radius = inradius(region)
    bound = 0.0 if math.isinf(radius) or not len(region) else 1.0 / (radius * len(region))
    return InradiusReport(gap, float(radius), bound, gap >= bound * (1 - 1e-10))
