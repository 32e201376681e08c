# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports

# Third-party imports

# Local imports
from .errors import (
    LindbladLocalityError, LatticeError, ModelError, PreconditionError, DimensionCapError,
    ConfigError, ContourError, NumericalFailure, VerificationFailure,
)
from .lattice import (
    Lattice, Region,
    build_lattice, graph_distance, ball, complement, inradius, r_boundary, two_block_regions,
    bipartition_boundaries,
)
from .model import (
    LindbladModel, LocalHamiltonianTerm, JumpOperator, Locality, LocalityReport,
    build_model, validate_locality, compose_models, anderson_hamiltonian,
)
from .registry import ModelKindRegistry, model_kinds
from .dynamics import (
    DensityMatrix, Superoperator, SteadyBasis,
    assemble_superoperator, evolve, steady_states, abel_average,
)
from .dissipative import (
    BoundaryClosure, DissipativeHamiltonian, SpectralEnvelope,
    build_dissipative, spectral_envelope,
)
from .pseudospectra import ComplexGrid, pseudospectrum_grid
from .kernel import (
    CoherenceKernel, CoherenceBoundReport,
    compute_kernel, coherence_bound_report, verify_integral_representation,
)
from .ct import s_alpha, ct_bound, ct_verify_region
from .disorder import (
    DisorderSpec, MomentEstimate, LocalizationThreshold, ModelFamily,
    sample_potential, fractional_moment_mc, localization_threshold, disordered_coherence_mc,
    disordered_coherence_pairs_mc,
)
from .decay import DecayFit, fit_exponential_decay, fit_power_law
from .progress import ProgressObservable
from .config import ExperimentConfig, load_config
from .__about__ import (
    __title__, __summary__, __uri__, __version__,
    __author__, __email__, __license__, __copyright__,
)

__all__ = [
    'LindbladLocalityError', 'LatticeError', 'ModelError', 'PreconditionError',
    'DimensionCapError', 'ConfigError', 'ContourError', 'NumericalFailure',
    'VerificationFailure',
    'Lattice', 'Region',
    'build_lattice', 'graph_distance', 'ball', 'complement', 'inradius', 'r_boundary',
    'two_block_regions', 'bipartition_boundaries',
    'LindbladModel', 'LocalHamiltonianTerm', 'JumpOperator', 'Locality', 'LocalityReport',
    'build_model', 'validate_locality', 'compose_models', 'anderson_hamiltonian',
    'ModelKindRegistry', 'model_kinds',
    'DensityMatrix', 'Superoperator', 'SteadyBasis',
    'assemble_superoperator', 'evolve', 'steady_states', 'abel_average',
    'BoundaryClosure', 'DissipativeHamiltonian', 'SpectralEnvelope',
    'build_dissipative', 'spectral_envelope',
    'ComplexGrid', 'pseudospectrum_grid',
    'CoherenceKernel', 'CoherenceBoundReport',
    'compute_kernel', 'coherence_bound_report', 'verify_integral_representation',
    's_alpha', 'ct_bound', 'ct_verify_region',
    'DisorderSpec', 'MomentEstimate', 'LocalizationThreshold', 'ModelFamily',
    'sample_potential', 'fractional_moment_mc', 'localization_threshold',
    'disordered_coherence_mc', 'disordered_coherence_pairs_mc',
    'DecayFit', 'fit_exponential_decay', 'fit_power_law',
    'ProgressObservable',
    'ExperimentConfig', 'load_config',

    '__title__', '__summary__', '__uri__', '__version__',
    '__author__', '__email__', '__license__', '__copyright__',
]
