# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Density matrices, vectorized Lindbladians and the dynamics they generate.

Vectorization is column stacking: vec(A rho B) = (B^T kron A) vec(rho), i.e. numpy's
``reshape(-1, order='F')``.
'''
from __future__ import annotations  # noqa: F407

# System imports
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import quad_vec, solve_ivp

# Local imports
from .errors import DimensionCapError, NumericalFailure, PreconditionError
from .model import LindbladModel, embed, validate_locality


_logger = logging.getLogger(__name__)

#: Lattices up to this size are evolved with a dense matrix exponential.
DENSE_EXPM_LIMIT = 24
#: Lattices up to this size get their steady states from a full SVD.
DENSE_KERNEL_LIMIT = 16
#: Relative singular value threshold of the numerical kernel.
KERNEL_TOLERANCE = 1e-10
#: Largest |Lambda|^2 accepted for a vectorized generator.
DEFAULT_DIMENSION_CAP = 10_000

STATE_TOLERANCE = 1e-10
CLIP_TOLERANCE = 1e-10
FAILURE_TOLERANCE = 1e-8


def vec(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix).reshape(-1, order='F')


def unvec(vector: np.ndarray, size: int) -> np.ndarray:
    return np.asarray(vector).reshape(size, size, order='F')


class DensityMatrix:
    '''
    A Hermitian, positive semi-definite, unit trace matrix indexed by lattice ordinals.
    '''

    __slots__ = ('_matrix',)

    def __init__(self, matrix: np.ndarray, tolerance: float = STATE_TOLERANCE) -> None:
        '''
        :param matrix: Square complex matrix.
        :param tolerance: Allowed defect of Hermiticity, trace and positivity.
        :raises PreconditionError: If the matrix is not a state within tolerance.
        '''
        array = np.array(matrix, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise PreconditionError(f'A density matrix is square, got shape {array.shape}')
        if not np.allclose(array, array.conj().T, rtol=0, atol=tolerance):
            raise PreconditionError('Density matrix is not Hermitian')
        if abs(np.trace(array) - 1) > tolerance:
            raise PreconditionError(f'Density matrix trace is {np.trace(array)}, not 1')
        if array.size and la.eigvalsh(array).min() < -tolerance:
            raise PreconditionError('Density matrix is not positive semi-definite')
        array.setflags(write=False)
        self._matrix = array

    @classmethod
    def from_numerical(
            cls, matrix: np.ndarray,
            clip: float = CLIP_TOLERANCE, failure: float = FAILURE_TOLERANCE
    ) -> DensityMatrix:
        '''
        Turns the output of a numerical propagation back into a state.

        The matrix is Hermitized. Eigenvalues in [-clip, 0) are set to zero and the trace is
        renormalized; eigenvalues in [-failure, -clip) are kept and logged.

        :raises NumericalFailure: On eigenvalues below -failure or a trace defect above failure.
        '''
        array = np.asarray(matrix, dtype=complex)
        if not np.all(np.isfinite(array)):
            raise NumericalFailure('Propagated state has non-finite entries')
        hermitian = (array + array.conj().T) / 2
        trace = np.trace(hermitian).real
        if abs(trace - 1) > failure:
            raise NumericalFailure(f'Propagated state lost its trace: {trace!r}')

        values, vectors = la.eigh(hermitian)
        lowest = values.min() if values.size else 0.0
        if lowest < -failure:
            raise NumericalFailure(f'Propagated state lost positivity: eigenvalue {lowest!r}')
        if lowest < -clip:
            _logger.warning('Unrepaired negative eigenvalue %r in propagated state', lowest)
            return cls(hermitian, tolerance=failure)
        if lowest < 0:
            values = np.clip(values, 0, None)
            hermitian = (vectors * values) @ vectors.conj().T
            hermitian = (hermitian + hermitian.conj().T) / 2
            hermitian /= np.trace(hermitian).real
        return cls(hermitian, tolerance=failure)

    @classmethod
    def pure(cls, vector: Sequence[complex]) -> DensityMatrix:
        psi = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise PreconditionError('Zero vector has no pure state')
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def site(cls, size: int, ordinal: int) -> DensityMatrix:
        matrix = np.zeros((size, size), dtype=complex)
        matrix[ordinal, ordinal] = 1
        return cls(matrix)

    @classmethod
    def superposition(cls, size: int, ordinals: Iterable[int]) -> DensityMatrix:
        '''Uniform superposition of the listed site states.'''
        psi = np.zeros(size, dtype=complex)
        psi[list(ordinals)] = 1
        return cls.pure(psi)

    @classmethod
    def maximally_mixed(cls, size: int) -> DensityMatrix:
        return cls(np.eye(size, dtype=complex) / size)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def __len__(self) -> int:
        return self._matrix.shape[0]

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        return complex(self._matrix[index])

    def trace_norm(self) -> float:
        return float(np.abs(la.eigvalsh(self._matrix)).sum())

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(size={len(self)})'


@dataclass(frozen=True, eq=False)
class Superoperator:
    '''
    Sparse matrix of a Lindbladian (or of its Heisenberg-picture adjoint) acting on vec(rho).
    '''
    matrix: sp.csr_matrix
    size: int
    adjoint: bool = False

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.size)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def triplets(self) -> List[Tuple[int, int, float, float]]:
        '''Coordinate list (row, col, re, im), sorted by row then column.'''
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[k]), int(coo.col[k]), float(coo.data[k].real), float(coo.data[k].imag))
            for k in order]


@dataclass(frozen=True, eq=False)
class SteadyBasis:
    '''
    Steady states spanning the numerical kernel of a Lindbladian.

    kernel_vectors holds an orthonormal basis of the kernel as columns (vectorized matrices);
    states are trace normalized positive matrices spanning the same space.
    '''
    states: Tuple[DensityMatrix, ...]
    residuals: Tuple[float, ...]
    kernel_vectors: np.ndarray
    generator_norm: float

    @property
    def dimension(self) -> int:
        return self.kernel_vectors.shape[1]

    @property
    def empty(self) -> bool:
        return self.dimension == 0

    def contains(self, rho: np.ndarray, tolerance: float = 1e-8) -> bool:
        '''Whether rho lies in the kernel, up to tolerance in Frobenius norm.'''
        target = vec(rho)
        if self.empty:
            return bool(np.linalg.norm(target) <= tolerance)
        coefficients = self.kernel_vectors.conj().T @ target
        return bool(np.linalg.norm(target - self.kernel_vectors @ coefficients) <= tolerance)


def _operators(
        model: LindbladModel) -> Tuple[sp.csr_matrix, List[sp.csr_matrix]]:
    region = model.lattice.full_region()
    size = len(region)
    hamiltonian = sp.csr_matrix((size, size), dtype=complex)
    for term in model.hamiltonian_terms:
        hamiltonian = hamiltonian + embed(term.matrix, term.support, region, sparse=True)
    jumps = [embed(j.matrix, j.support, region, sparse=True) for j in model.jump_operators]
    return hamiltonian, jumps


def assemble_superoperator(
        model: LindbladModel, adjoint: bool = False,
        dimension_cap: int = DEFAULT_DIMENSION_CAP) -> Superoperator:
    '''
    Vectorizes -i[H, .] + sum L . L* - 1/2 {L*L, .}, or with adjoint set its Heisenberg picture
    i[H, .] + sum L* . L - 1/2 {L*L, .}.

    :raises DimensionCapError: If |Lambda|^2 exceeds dimension_cap.
    '''
    size = len(model.lattice)
    if size * size > dimension_cap:
        raise DimensionCapError(
            f'Vectorized generator needs {size * size} rows, cap is {dimension_cap}')

    hamiltonian, jumps = _operators(model)
    identity = sp.identity(size, dtype=complex, format='csr')
    sign = 1j if adjoint else -1j
    generator = sign * (sp.kron(identity, hamiltonian) - sp.kron(hamiltonian.T, identity))
    for jump in jumps:
        loss = (jump.conj().T @ jump).tocsr()
        if adjoint:
            sandwich = sp.kron(jump.T, jump.conj().T)
        else:
            sandwich = sp.kron(jump.conj(), jump)
        generator = generator + sandwich \
            - 0.5 * sp.kron(identity, loss) - 0.5 * sp.kron(loss.T, identity)
    return Superoperator(sp.csr_matrix(generator), size, adjoint)


def evolve(
        model: LindbladModel, rho0: DensityMatrix, t: float,
        superoperator: Optional[Superoperator] = None) -> DensityMatrix:
    '''
    :return: exp(t L)(rho0).
    :raises PreconditionError: If t is negative.
    :raises NumericalFailure: If the propagated matrix leaves the state tolerance window.
    '''
    if t < 0:
        raise PreconditionError(f'Evolution time must be non-negative, got {t}')
    if t == 0:
        return rho0

    generator = superoperator or assemble_superoperator(model)
    start = vec(rho0.matrix)
    if generator.size <= DENSE_EXPM_LIMIT:
        _logger.debug('Dense exponential, dimension %d', generator.size ** 2)
        final = la.expm(t * generator.dense()) @ start
    else:
        _logger.debug('Runge-Kutta integration, dimension %d', generator.size ** 2)
        matrix = generator.matrix
        solution = solve_ivp(
            lambda _, y: matrix @ y, (0.0, float(t)), start,
            method='DOP853', rtol=1e-10, atol=1e-12)
        if not solution.success:
            raise NumericalFailure(f'Integrator failed: {solution.message}')
        final = solution.y[:, -1]
    return DensityMatrix.from_numerical(unvec(final, generator.size))


def _dense_kernel(generator: Superoperator, tolerance: float) -> Tuple[np.ndarray, float]:
    _, singular, vh = la.svd(generator.dense())
    top = float(singular[0]) if singular.size else 0.0
    if top == 0:
        return np.eye(generator.size ** 2, dtype=complex), 0.0
    return vh[singular <= tolerance * top].conj().T, top


def _kernel(generator: Superoperator, tolerance: float) -> Tuple[np.ndarray, float]:
    '''
    Numerical kernel of the generator and its largest singular value.

    The shift-invert iteration asks for twice as many eigenpairs until some of the returned
    values fall outside the kernel threshold; once the request would reach the whole space the
    dense decomposition takes over.
    '''
    if generator.size <= DENSE_KERNEL_LIMIT:
        _logger.debug('Steady states from a full SVD')
        return _dense_kernel(generator, tolerance)

    matrix = generator.matrix.tocsc()
    top = float(spla.svds(matrix, k=1, return_singular_vectors=False)[0])
    if top == 0:
        return np.eye(generator.size ** 2, dtype=complex), 0.0
    threshold = max(tolerance * top, 1e-12)
    limit = generator.size ** 2 - 2
    count = min(limit, generator.size + 2)
    while True:
        _logger.debug('Steady states from shift-invert iteration, %d eigenpairs', count)
        values, vectors = spla.eigs(matrix, k=count, sigma=-1e-6 * top, which='LM')
        inside = np.abs(values) <= threshold
        if inside.sum() < count:
            break
        if 2 * count > limit:
            _logger.debug('Steady kernel fills the iteration, switching to a full SVD')
            return _dense_kernel(generator, tolerance)
        count *= 2

    selected = vectors[:, inside]
    if selected.size == 0:
        return selected, top
    return la.orth(selected), top


def _positive_parts(kernel: np.ndarray, size: int) -> List[np.ndarray]:
    candidates = []
    for column in kernel.T:
        matrix = unvec(column, size)
        for hermitian in ((matrix + matrix.conj().T) / 2,
                          (matrix - matrix.conj().T) / 2j):
            if np.linalg.norm(hermitian) < 1e-12:
                continue
            values, vectors = la.eigh(hermitian)
            for part in (np.clip(values, 0, None), np.clip(-values, 0, None)):
                trace = part.sum()
                if trace > 1e-8 * np.abs(values).sum():
                    state = (vectors * (part / trace)) @ vectors.conj().T
                    candidates.append((state + state.conj().T) / 2)
    return candidates


def steady_states(
        model: LindbladModel, tolerance: float = KERNEL_TOLERANCE,
        superoperator: Optional[Superoperator] = None) -> SteadyBasis:
    '''
    Computes a basis of the kernel of the Lindbladian.

    Positive and negative parts of the Hermitian kernel elements are again steady; trace
    normalized and reduced to a linearly independent set they give the returned states.
    '''
    generator = superoperator or assemble_superoperator(model)
    kernel, top = _kernel(generator, tolerance)
    if kernel.shape[1] == 0:
        _logger.warning('Empty steady kernel for %r', model)

    chosen: List[np.ndarray] = []
    basis = np.zeros((generator.size ** 2, 0), dtype=complex)
    for candidate in _positive_parts(kernel, generator.size):
        if len(chosen) == kernel.shape[1]:
            break
        flat = vec(candidate)
        residual = flat - basis @ (basis.conj().T @ flat)
        if np.linalg.norm(residual) > 1e-6 * np.linalg.norm(flat):
            chosen.append(candidate)
            basis = np.column_stack([basis, residual / np.linalg.norm(residual)])

    states = tuple(DensityMatrix.from_numerical(state) for state in chosen)
    residuals = tuple(
        float(np.linalg.norm(generator.matrix @ vec(state.matrix))) for state in states)
    return SteadyBasis(states, residuals, kernel, top)


def abel_average(
        model: LindbladModel, rho0: DensityMatrix, epsilon: float,
        superoperator: Optional[Superoperator] = None) -> DensityMatrix:
    '''
    :return: epsilon (epsilon - L)^-1 (rho0), the Abel average of the evolution at rate epsilon.
    :raises PreconditionError: If epsilon is not positive.
    :raises NumericalFailure: If the sparse factorization fails.
    '''
    if not epsilon > 0:
        raise PreconditionError(f'Abel averages need epsilon > 0, got {epsilon}')
    generator = superoperator or assemble_superoperator(model)
    shifted = (epsilon * sp.identity(generator.size ** 2, format='csc', dtype=complex)
               - generator.matrix.tocsc())
    try:
        solution = spla.splu(shifted).solve(vec(rho0.matrix).astype(complex))
    except RuntimeError as error:
        raise NumericalFailure(f'Resolvent solve failed: {error}') from error
    return DensityMatrix.from_numerical(epsilon * unvec(solution, generator.size))


def abel_average_by_quadrature(
        model: LindbladModel, rho0: DensityMatrix, epsilon: float,
        horizon: float = 40.0, superoperator: Optional[Superoperator] = None) -> DensityMatrix:
    '''
    Time-domain Abel average epsilon * int_0^{horizon/epsilon} e^{-epsilon t} exp(tL)(rho0) dt,
    by adaptive quadrature in the rescaled time s = epsilon t.
    '''
    if not epsilon > 0:
        raise PreconditionError(f'Abel averages need epsilon > 0, got {epsilon}')
    generator = superoperator or assemble_superoperator(model)
    if generator.size > DENSE_EXPM_LIMIT:
        raise DimensionCapError('Quadrature Abel averages use dense exponentials')
    dense = generator.dense()
    start = vec(rho0.matrix)

    def integrand(s: float) -> np.ndarray:
        return np.exp(-s) * (la.expm((s / epsilon) * dense) @ start)

    value, _ = quad_vec(integrand, 0.0, horizon, epsabs=1e-13, epsrel=1e-10, limit=4000)
    return DensityMatrix.from_numerical(unvec(value, generator.size))


@dataclass(frozen=True)
class TraceNormReport:
    '''Sampled lower bound of the induced trace norm of L against 2 C_R N (1 + N I).'''
    lower_bound: float
    bound: float
    samples: int
    passed: bool


def trace_norm_bound_check(
        model: LindbladModel, samples: int = 200, seed: int = 0,
        superoperator: Optional[Superoperator] = None) -> TraceNormReport:
    '''
    Maximizes the trace norm of L(|psi><phi|) over all pairs of site vectors and over random
    unit vector pairs, and compares the result with the norm bound built from the measured
    locality constants.
    '''
    report = validate_locality(model)
    bound = 2 * report.cover_count * report.N_actual * (1 + report.N_actual * report.I_actual)
    generator = superoperator or assemble_superoperator(model)
    size = generator.size

    best = 0.0
    for column in range(size):
        images = generator.matrix[:, column * size:(column + 1) * size].toarray()
        for row in range(size):
            image = unvec(images[:, row], size)
            best = max(best, float(np.linalg.norm(image, 'nuc')))

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        psi, phi = rng.normal(size=(2, size)) + 1j * rng.normal(size=(2, size))
        psi /= np.linalg.norm(psi)
        phi /= np.linalg.norm(phi)
        image = generator.apply(np.outer(psi, phi.conj()))
        best = max(best, float(np.linalg.norm(image, 'nuc')))

    return TraceNormReport(
        lower_bound=best, bound=bound, samples=samples + size * size,
        passed=best <= bound * (1 + 1e-12) + 1e-12)


@dataclass(frozen=True)
class AdjointReport:
    '''Deviation of the term-wise adjoint from the conjugate transpose, and L*(1).'''
    deviation: float
    identity_residual: float
    passed: bool


def adjoint_consistency_check(
        model: LindbladModel, tolerance: float = 1e-10) -> AdjointReport:
    forward = assemble_superoperator(model)
    backward = assemble_superoperator(model, adjoint=True)
    difference = (backward.matrix - forward.matrix.conj().T).tocoo()
    deviation = float(np.abs(difference.data).max()) if difference.nnz else 0.0
    identity = np.eye(forward.size, dtype=complex)
    residual = float(np.abs(backward.apply(identity)).max()) if forward.size else 0.0
    return AdjointReport(
        deviation=deviation, identity_residual=residual,
        passed=deviation <= tolerance and residual <= tolerance)
