# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Batch experiment driver.

    lindblad-locality <command> --config path [--threads n] [--emit-plot-data] [--out dir]

Every run writes its result files and a manifest.json into the output directory. The exit status
is 0 on success, 2 when a checked inequality fails and 1 on operational errors.
'''
from __future__ import annotations  # noqa: F407

# System imports
import argparse
import logging
import os
import platform
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

# Third-party imports
import jsonschema
import numpy as np
import scipy

# Local imports
from . import io
from .__about__ import __version__
from .config import COMMAND_SECTIONS, ExperimentConfig, load_config
from .ct import ct_verify_region
from .decay import DecayFit, fit_exponential_decay
from .disorder import (
    ModelFamily, MomentEstimate, apriori_bound, disordered_coherence_pairs_mc, energy_sweep,
    fractional_moment_mc, localization_threshold)
from .dissipative import (
    DissipativeHamiltonian, box_exclusion_check, build_dissipative, dissipative_resolvent_check,
    pseudospectrum_grid, spectral_envelope)
from .dynamics import (
    DensityMatrix, Superoperator, abel_average, adjoint_consistency_check,
    assemble_superoperator, evolve, steady_states, trace_norm_bound_check)
from .errors import LindbladLocalityError, PreconditionError, VerificationFailure
from .kernel import coherence_bound_report, compute_kernel
from .lattice import Lattice, lattice_to_json
from .model import LindbladModel, model_to_json
from .progress import ProgressObservable


_logger = logging.getLogger(__name__)

COMMANDS = tuple(COMMAND_SECTIONS)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

#: Largest trace defect accepted for a propagated state.
TRACE_TOLERANCE = 1e-10
#: Largest residual ||L rho|| accepted for a steady state.
RESIDUAL_TOLERANCE = 1e-8


class _ProgressLog:
    '''Logs sweep progress at debug level.'''

    def __init__(self, command: str) -> None:
        self.command = command
        self.observers = ProgressObservable()
        self.observers.on('realization', self.realization)
        self.observers.on('resampled', self.resampled)
        self.observers.on('grid_point', self.grid_point)

    def realization(self, index: int, values: Any) -> None:
        _logger.debug('%s: realization %d done', self.command, index)

    def resampled(self, index: int, attempt: int) -> None:
        _logger.info('%s: realization %d drawn again (attempt %d)', self.command, index, attempt)

    def grid_point(self, index: int, z: complex) -> None:
        _logger.debug('%s: grid point %d at %r', self.command, index, z)


@dataclass
class RunContext:
    '''State shared by the command handlers of one run.'''
    config: ExperimentConfig
    command: str
    out: Path
    executor: Optional[Executor] = None
    emit_plot_data: bool = False
    artifacts: List[Path] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    progress: Optional[_ProgressLog] = None

    @property
    def observers(self) -> Optional[ProgressObservable]:
        return self.progress.observers if self.progress else None

    def path(self, name: str) -> Path:
        return self.out / name

    def wrote(self, *paths: Path) -> None:
        self.artifacts.extend(paths)

    def check(self, name: str, passed: bool) -> None:
        self.checks[name] = self.checks.get(name, True) and bool(passed)
        if not passed:
            _logger.warning('%s: check %r failed', self.command, name)

    def setup(self) -> Tuple[Lattice, LindbladModel]:
        lat = self.config.lattice()
        return lat, self.config.model(lat)

    def generator(self, model: LindbladModel) -> Superoperator:
        return assemble_superoperator(model, dimension_cap=self.config.dimension_cap)

    def dissipative(self, lat: Lattice, model: LindbladModel) -> DissipativeHamiltonian:
        return build_dissipative(model, self.config.region(lat), self.config.closure())

    def plot(self, name: str, samples: Sequence[Tuple[float, float]]) -> None:
        if self.emit_plot_data:
            self.wrote(io.write_plot_data(self.path(name), samples))


def _state_samples(rho: DensityMatrix, lat: Lattice) -> List[Tuple[float, float]]:
    '''(d(u, v), |rho(u, v)|) over the off-diagonal entries at finite distance.'''
    distances = lat.distance_matrix()
    magnitudes = np.abs(rho.matrix)
    size = len(lat)
    return [(float(distances[u, v]), float(magnitudes[u, v]))
            for u in range(size) for v in range(size)
            if u != v and np.isfinite(distances[u, v])]


def _fit_json(fit: Optional[DecayFit]) -> Optional[Dict[str, float]]:
    if fit is None:
        return None
    return {'C': fit.C, 'mu': fit.mu, 'r_squared': fit.r_squared, 'points': fit.points}


def _try_fit(samples: Sequence[Tuple[float, float]]) -> Optional[DecayFit]:
    try:
        return fit_exponential_decay(samples)
    except PreconditionError as error:
        _logger.info('No decay fit: %s', error)
        return None


# Command handlers

def _model_validate(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    generator = ctx.generator(model)
    report = model.locality
    trace_norm = trace_norm_bound_check(
        model, seed=ctx.config.master_seed or 0, superoperator=generator)
    adjoint = adjoint_consistency_check(model)

    ctx.wrote(io.write_json(ctx.path('model.json'), {
        'lattice': lattice_to_json(lat), 'model': model_to_json(model)}))
    ctx.wrote(io.write_json(ctx.path('locality.json'), {
        'R_actual': report.R_actual, 'I_actual': report.I_actual,
        'N_actual': report.N_actual, 'cover_count': report.cover_count,
        'declared': {'R': report.declared.R, 'I': report.declared.I, 'N': report.declared.N},
        'passed': report.passed,
        'trace_norm': {'lower_bound': trace_norm.lower_bound, 'bound': trace_norm.bound,
                       'samples': trace_norm.samples, 'passed': trace_norm.passed},
        'adjoint': {'deviation': adjoint.deviation,
                    'identity_residual': adjoint.identity_residual,
                    'passed': adjoint.passed},
    }))
    ctx.check('locality', report.passed)
    ctx.check('trace_norm', trace_norm.passed)
    ctx.check('adjoint', adjoint.passed)


def _evolve(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    generator = ctx.generator(model)
    rho0 = ctx.config.initial_state(lat)
    ctx.wrote(io.write_triplets(ctx.path('superoperator.csv'), generator))
    summary = []
    for index, t in enumerate(ctx.config.times()):
        rho = evolve(model, rho0, t, generator)
        trace = float(np.trace(rho.matrix).real)
        lowest = float(np.linalg.eigvalsh(rho.matrix).min())
        summary.append({'t': t, 'trace': trace, 'min_eigenvalue': lowest})
        ctx.wrote(io.write_density_matrix(ctx.path(f'state_t{index}.csv'), rho, lat))
        ctx.plot(f'plot_state_t{index}.csv', _state_samples(rho, lat))
        ctx.check('state', abs(trace - 1) <= TRACE_TOLERANCE and lowest >= -TRACE_TOLERANCE)
    ctx.wrote(io.write_json(ctx.path('evolve.json'), summary))


def _steady(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    basis = steady_states(model, superoperator=ctx.generator(model))
    for index, state in enumerate(basis.states):
        ctx.wrote(io.write_density_matrix(ctx.path(f'steady_{index}.csv'), state, lat))
        ctx.plot(f'plot_steady_{index}.csv', _state_samples(state, lat))
    ctx.wrote(io.write_json(ctx.path('steady.json'), {
        'dimension': basis.dimension, 'residuals': list(basis.residuals),
        'generator_norm': basis.generator_norm}))
    ctx.check('residuals', all(r <= RESIDUAL_TOLERANCE for r in basis.residuals))


def _abel(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    generator = ctx.generator(model)
    rho0 = ctx.config.initial_state(lat)
    summary = []
    for index, epsilon in enumerate(ctx.config.epsilons()):
        averaged = abel_average(model, rho0, epsilon, generator)
        samples = _state_samples(averaged, lat)
        summary.append({'epsilon': epsilon, 'trace': float(np.trace(averaged.matrix).real),
                        'fit': _fit_json(_try_fit(samples))})
        ctx.wrote(io.write_density_matrix(ctx.path(f'abel_eps{index}.csv'), averaged, lat))
        ctx.plot(f'plot_abel_eps{index}.csv', samples)
    ctx.wrote(io.write_json(ctx.path('abel.json'), summary))


def _envelope(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    envelope = spectral_envelope(ctx.dissipative(lat, model))
    ctx.wrote(*io.write_envelope(ctx.out, envelope))
    ctx.check('envelope', envelope.consistent)


def _pseudospec(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    matrix = ctx.dissipative(lat, model).matrix
    epsilons = ctx.config.epsilons()
    grid = pseudospectrum_grid(
        matrix, ctx.config.grid(), epsilons[0], ctx.executor, ctx.observers)
    ctx.wrote(io.write_pseudospectrum(ctx.path('pseudospectrum.csv'), grid))

    points = list(grid.points)
    resolvent = dissipative_resolvent_check(matrix, points)
    summary: Dict[str, Any] = {
        'dissipative_resolvent': {'passed': resolvent.passed,
                                  'violations': int(resolvent.violations.size),
                                  'skipped': resolvent.skipped},
        'epsilons': []}
    ctx.check('dissipative_resolvent', resolvent.passed)
    for epsilon in epsilons:
        box = box_exclusion_check(matrix, points, epsilon)
        summary['epsilons'].append({
            'epsilon': epsilon, 'members': int(np.count_nonzero(grid.sigma_min < epsilon)),
            'box_exclusion': {'passed': box.passed, 'violations': int(box.violations.size),
                              'skipped': box.skipped}})
        ctx.check('box_exclusion', box.passed)
    ctx.wrote(io.write_json(ctx.path('pseudospectrum.json'), summary))


def _kernel(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    config = ctx.config
    summary = []
    for k, (x, y) in enumerate(config.pairs()):
        for j, epsilon in enumerate(config.epsilons()):
            kernel = compute_kernel(
                model, x, y, epsilon, config.closure(), config.geometry(),
                executor=ctx.executor, **config.contour_options())
            samples = kernel.decay_samples()
            summary.append({'x': list(x), 'y': list(y), 'epsilon': epsilon,
                            'nodes_per_side': kernel.nodes_per_side,
                            'converged': kernel.converged,
                            'fit': _fit_json(_try_fit(samples))})
            ctx.wrote(io.write_kernel(ctx.path(f'kernel_{k}_{j}.csv'), kernel))
            ctx.plot(f'plot_kernel_{k}_{j}.csv', samples)
    ctx.wrote(io.write_json(ctx.path('kernel.json'), summary))


def _coherence_bound(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    config = ctx.config
    generator = ctx.generator(model)
    rho0 = config.initial_state(lat)
    reports = []
    for k, (x, y) in enumerate(config.pairs()):
        for j, epsilon in enumerate(config.epsilons()):
            report = coherence_bound_report(
                model, rho0, x, y, epsilon, config.closure(), config.geometry(),
                executor=ctx.executor, superoperator=generator, **config.contour_options())
            reports.append(report)
            ctx.plot(f'plot_coherence_{k}_{j}.csv', report.kernel.decay_samples())
            ctx.check('coherence_bound', report.satisfied)
    ctx.wrote(io.write_coherence_reports(ctx.path('coherence.json'), reports))


def _ct_verify(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    config = ctx.config
    region = config.region(lat)
    matrix = build_dissipative(model, region, config.closure()).matrix
    options: Dict[str, Any] = {}
    if config.ct_epsilon() is not None:
        options['eps_rule'] = config.ct_epsilon()
    verification = ct_verify_region(
        matrix, lat, config.grid().points(), alpha=config.ct_alpha(), region=region,
        executor=ctx.executor, observers=ctx.observers, **options)
    ctx.wrote(io.write_violations(ctx.path('violations.csv'), verification))
    ctx.wrote(io.write_json(ctx.path('ct.json'), {
        'alpha': config.ct_alpha(), 'epsilon': config.ct_epsilon(),
        'rows': len(verification.rows), 'violations': len(verification.violations),
        'skipped': verification.skipped, 'passed': verification.passed}))
    ctx.check('combes_thomas', verification.passed)


def _apriori_ok(estimate: MomentEstimate, spec: Any) -> bool:
    x, y = estimate.pair
    bound = apriori_bound(spec, estimate.s, diagonal=tuple(x) == tuple(y))
    return estimate.mean <= bound + 3 * estimate.std_error


def _disorder_sweep(ctx: RunContext) -> None:
    lat, model = ctx.setup()
    config = ctx.config
    settings = config.disorder()
    x0 = settings.x0 if settings.x0 is not None else lat.sites[0]
    if 'pairs' in config.document:
        pairs: Sequence[Tuple[Any, Any]] = config.pairs()
    else:
        pairs = [(x0, site) for site in lat.sites]

    rows: List[Tuple[Any, ...]] = []
    fits: List[Mapping[str, Any]] = []
    if settings.mode == 'moments':
        A0 = build_dissipative(model, lat.full_region()).matrix
        energies = settings.energies if settings.energies is not None else energy_sweep(A0)
        thresholds = []
        for lam in settings.lambdas:
            spec = settings.spec.with_lambda(lam)
            threshold = localization_threshold(A0, lat, spec, settings.s, settings.mu)
            thresholds.append({**threshold.to_json(), 'lambda': lam})
            for epsilon in config.epsilons():
                for energy in energies:
                    z = complex(epsilon, energy)
                    estimates = fractional_moment_mc(
                        A0, lat, spec, settings.s, z, pairs, settings.n_samples,
                        ctx.executor, ctx.observers)
                    rows.extend(io.sweep_rows(lam, estimates))
                    fits.append(_sweep_fit(lam, z, estimates))
                    ctx.check('apriori', all(_apriori_ok(e, spec) for e in estimates))
        ctx.wrote(io.write_json(ctx.path('threshold.json'), thresholds))
    else:
        family = ModelFamily(model, h0=settings.h0)
        for lam in settings.lambdas:
            spec = settings.spec.with_lambda(lam)
            for epsilon in config.epsilons():
                estimates = disordered_coherence_pairs_mc(
                    family, spec, x0, pairs, epsilon, settings.n_samples,
                    ctx.executor, ctx.observers)
                rows.extend(io.sweep_rows(lam, estimates))
                fits.append(_sweep_fit(lam, complex(epsilon), estimates))

    ctx.wrote(io.write_sweep(ctx.path('sweep.csv'), rows))
    ctx.wrote(io.write_json(ctx.path('sweep_fits.json'), fits))
    ctx.plot('plot_sweep.csv', [(row[2], row[3]) for row in rows if np.isfinite(row[2])])


def _sweep_fit(lam: float, z: complex, estimates: Sequence[MomentEstimate]) -> Mapping[str, Any]:
    samples = [(e.distance, e.mean) for e in estimates if np.isfinite(e.distance)]
    return {'lambda': lam, 're_z': z.real, 'im_z': z.imag, 'fit': _fit_json(_try_fit(samples))}


def _fit_decay(ctx: RunContext) -> None:
    samples = io.read_decay_samples(ctx.config.fit_input())
    fit = fit_exponential_decay(samples)
    ctx.wrote(io.write_json(ctx.path('fit.json'), _fit_json(fit)))
    ctx.plot('plot_fit.csv', samples)


HANDLERS: Mapping[str, Callable[[RunContext], None]] = {
    'model-validate': _model_validate,
    'evolve': _evolve,
    'steady': _steady,
    'abel': _abel,
    'envelope': _envelope,
    'pseudospec': _pseudospec,
    'kernel': _kernel,
    'coherence-bound': _coherence_bound,
    'ct-verify': _ct_verify,
    'disorder-sweep': _disorder_sweep,
    'fit-decay': _fit_decay,
}


def versions() -> Dict[str, str]:
    return {'lindblad_locality': __version__, 'numpy': np.__version__,
            'scipy': scipy.__version__, 'python': platform.python_version()}


def run(config: ExperimentConfig, command: str, out: Optional[Path] = None,
        executor: Optional[Executor] = None, emit_plot_data: bool = False) -> int:
    '''
    Runs one command and writes its results and manifest.json to the output directory.

    :param out: Output directory; defaults to the config output entry, then './results'.
    :return: EXIT_OK.
    :raises VerificationFailure: When a checked inequality failed; results and manifest are
        written first.
    :raises LindbladLocalityError: On operational errors.
    '''
    config.check_command(command)
    out = Path(out or config.output or 'results')
    out.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(config, command, out, executor, emit_plot_data,
                     progress=_ProgressLog(command))

    _logger.info('Running %s into %s', command, out)
    start = time.perf_counter()
    HANDLERS[command](ctx)
    duration_ms = int(round((time.perf_counter() - start) * 1000))

    io.write_json(out / 'manifest.json', {
        'command': command,
        'config_sha256': config.sha256,
        'seed': config.master_seed,
        'duration_ms': duration_ms,
        'versions': versions(),
        'artifacts': sorted(p.relative_to(out).as_posix() for p in ctx.artifacts),
        'checks': ctx.checks,
    })
    failed = sorted(name for name, passed in ctx.checks.items() if not passed)
    _logger.info('Finished %s in %d ms', command, duration_ms)
    if failed:
        raise VerificationFailure(f'{command}: failed checks {failed}')
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='lindblad-locality',
        description='Numerical checks of locality estimates for local Lindbladians.')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', required=True, type=Path, help='Experiment config (JSON)')
    parser.add_argument('--threads', type=int, default=os.cpu_count() or 1,
                        help='Worker threads (default: number of CPUs)')
    parser.add_argument('--emit-plot-data', action='store_true',
                        help='Also write (distance, log10 magnitude) tables')
    parser.add_argument('--out', type=Path, help='Output directory')
    parser.add_argument('--verbose', action='store_true', help='Log at debug level')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    if args.threads < 1:
        _logger.error('--threads must be positive, got %d', args.threads)
        return EXIT_ERROR

    try:
        config = load_config(args.config)
        with ThreadPoolExecutor(max_workers=args.threads) as executor:
            return run(config, args.command, args.out, executor, args.emit_plot_data)
    except VerificationFailure as error:
        _logger.error('%s', error)
        return EXIT_VIOLATION
    except (LindbladLocalityError, OSError, jsonschema.ValidationError) as error:
        _logger.error('%s: %s', type(error).__name__, error)
        return EXIT_ERROR


if __name__ == '__main__':
    raise SystemExit(main())
