"""Subcommand implementations. Each takes the parsed arguments and returns a `ResultsDocument`."""

import argparse
import logging

from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from supermarket.analysis.fixed_point import (
    balance_residuals,
    doubly_exponential_ratio,
    fixed_point_table,
)
from supermarket.analysis.sojourn import (
    expected_sojourn,
    exponential_sojourn,
    matched_exponential,
    mph1_sojourn,
    residual_mean,
)
from supermarket.cli.dist_spec import parse_dist_spec
from supermarket.mean_field.dynamics import derivative
from supermarket.mean_field.integrator import IntegratorConfig, integrate, stationary_solve
from supermarket.mean_field.lyapunov import log_decay_fit, lyapunov_distance
from supermarket.mean_field.state import (
    count_ordering_violations,
    default_depth,
    empty_state,
    state_from_document,
    state_from_table,
)
from supermarket.phase_type.fitting import fit_moments
from supermarket.repro.reference import RESPONSE_TIME_N, RESPONSE_TIME_REL_TOL, RESPONSE_TIME_TABLE
from supermarket.repro.report import (
    published_response_time,
    reproduce,
    reproduce_response_times,
    response_time_keys,
)
from supermarket.simulation.aggregate import ReplicationPlan, run_replications
from supermarket.types import (
    ModelParams,
    MomentTriple,
    Provenance,
    ResultsDocument,
    ResultsTable,
    SimConfig,
)
from supermarket.utils.constants import RESIDUAL_TOL


logger = logging.getLogger(__name__)


def tool_version() -> str:
    try:
        return version('supermarket-ph')
    except PackageNotFoundError:
        return '0.0.0'


def _provenance(args: argparse.Namespace, seed: int | None = None) -> Provenance:
    timestamp = None
    if not getattr(args, 'no_timestamp', False):
        timestamp = datetime.now(timezone.utc).isoformat(timespec='seconds')
    return Provenance(version=tool_version(), seed=seed, timestamp=timestamp)


def _model(args: argparse.Namespace) -> ModelParams:
    return ModelParams(ph=parse_dist_spec(args.dist), lambda_=args.lam, d=args.d)


def _model_parameters(params: ModelParams, args: argparse.Namespace) -> dict:
    return {
        'dist': args.dist,
        'lambda': params.lambda_,
        'd': params.d,
        'mu': params.mu,
        'rho': params.rho,
    }


def cmd_fit(args: argparse.Namespace) -> ResultsDocument:
    """Clamps and fits a moment triple with the canonical PH(2)."""
    raw = MomentTriple(m1=args.m1, m2=args.m2, m3=args.m3)
    outcome = fit_moments(raw)
    ph = outcome.distribution
    rows = [
        [n, raw_value, clamped_value, ph.moment(n)]
        for n, (raw_value, clamped_value) in enumerate(
            zip(raw.as_tuple(), outcome.clamped.as_tuple()), start=1
        )
    ]
    return ResultsDocument(
        command='fit',
        parameters={'m1': raw.m1, 'm2': raw.m2, 'm3': raw.m3},
        tables=[ResultsTable(name='moments', columns=['n', 'raw', 'clamped', 'fitted'], rows=rows)],
        summary={
            'clamp_flags': [flag.value for flag in outcome.clamp_flags],
            'eta': outcome.eta,
            'xi1': outcome.xi1,
            'xi2': outcome.xi2,
            'alpha': list(ph.alpha),
            'T': [list(row) for row in ph.t_matrix],
            'max_relative_error': outcome.max_relative_error,
        },
        notes=[f'clamp rule {flag.value} applied' for flag in outcome.clamp_flags],
        provenance=_provenance(args),
    )


def cmd_fixed_point(args: argparse.Namespace) -> ResultsDocument:
    """Tabulates the closed-form fixed point and its balance residuals."""
    params = _model(args)
    table = fixed_point_table(params, tail_eps=args.tail_eps, k_max=args.kmax)
    residuals = balance_residuals(table, params)
    m = table.order
    columns = ['k', *[f'pi_k[{i + 1}]' for i in range(m)], 'pi_k e', 'scalar_residual', 'max_vector_residual']
    rows = [
        [
            k,
            *table.level(k).tolist(),
            float(table.tails[k - 1]),
            float(residuals.scalar[k - 1]),
            float(np.max(np.abs(residuals.vector[k - 1]))),
        ]
        for k in range(1, table.K + 1)
    ]
    notes = []
    if residuals.max_vector() > RESIDUAL_TOL * params.lambda_:
        notes.append(
            f'componentwise balance residual {residuals.max_vector():.3g} is not zero for m={m}; '
            'the aggregate (scalar) balance holds'
        )
    if table.truncated:
        notes.append('table capped before the tail threshold')
    return ResultsDocument(
        command='fixed-point',
        parameters={**_model_parameters(params, args), 'kmax': args.kmax, 'tail_eps': args.tail_eps},
        tables=[ResultsTable(name='fixed_point', columns=columns, rows=rows)],
        summary={
            'omega': table.omega.tolist(),
            'theta': table.theta,
            'K': table.K,
            'level0_residual': residuals.level0,
            'max_scalar_residual': residuals.max_scalar(),
            'max_vector_residual': residuals.max_vector(),
            'decay_ratios': doubly_exponential_ratio(table),
        },
        notes=notes,
        provenance=_provenance(args),
    )


def cmd_sojourn(args: argparse.Namespace) -> ResultsDocument:
    """Mean sojourn time at the fixed point."""
    params = _model(args)
    ph = params.ph
    summary = {
        'expected_sojourn': expected_sojourn(params),
        'mean_service': ph.mean(),
        'residual_mean': residual_mean(ph),
        'theta': ph.theta(params.d),
        'exponential_baseline': exponential_sojourn(params.mu, params.lambda_, params.d),
    }
    notes = []
    if params.d == 1:
        summary['mph1_sojourn'] = mph1_sojourn(ph, params.lambda_)
        if ph.order > 1:
            notes.append('at d=1 the M/PH/1 value mph1_sojourn is the exact single-queue mean')
    return ResultsDocument(
        command='sojourn',
        parameters=_model_parameters(params, args),
        summary=summary,
        notes=notes,
        provenance=_provenance(args),
    )


def _initial_state(args: argparse.Namespace, params: ModelParams, depth: int):
    if args.init == 'empty':
        return empty_state(params, depth)
    if args.init == 'fixed-point':
        return state_from_table(fixed_point_table(params, k_max=depth), depth)
    return state_from_document(args.init, params)


def cmd_ode(args: argparse.Namespace) -> ResultsDocument:
    """Integrates the mean-field equations and tracks the distance to the fixed point."""
    params = _model(args)
    params.require_stable()
    initial = _initial_state(args, params, args.kmax or default_depth(params))
    depth = initial.K
    table = fixed_point_table(params, k_max=depth)
    horizon = args.horizon or 100.0 / (params.lambda_ + params.mu)
    config = IntegratorConfig(step_scale=args.step_scale, samples=args.samples)
    trajectory = integrate(initial, params, horizon, config)

    columns = ['t', *[f'S_{k} e' for k in range(1, depth + 1)], 'phi']
    rows = [
        [sample.t, *sample.tails.tolist(), lyapunov_distance(sample, table)]
        for sample in trajectory.samples
    ]
    final = trajectory.final
    summary = {
        'horizon': horizon,
        'K': depth,
        'final_phi': lyapunov_distance(final, table),
        'final_derivative_norm': float(np.max(np.abs(derivative(final, params)))),
        'ordering_violations': count_ordering_violations(final, table),
    }
    notes = []
    try:
        fit = log_decay_fit(trajectory, table)
        summary['log_phi_slope'] = fit.slope
        summary['log_phi_r_squared'] = fit.r_squared
    except ValueError as e:
        notes.append(f'no decay fit: {e}')
    return ResultsDocument(
        command='ode',
        parameters={**_model_parameters(params, args), 'init': args.init, 'kmax': depth},
        tables=[ResultsTable(name='trajectory', columns=columns, rows=rows)],
        summary=summary,
        notes=notes,
        provenance=_provenance(args),
    )


def _sim_config(args: argparse.Namespace, ph=None) -> SimConfig:
    return SimConfig(
        n=args.n,
        d=args.d,
        lambda_=args.lam,
        ph=ph or parse_dist_spec(args.dist),
        horizon=args.horizon,
        warmup=args.warmup,
        seed=args.seed,
        replications=args.reps,
        max_level=args.max_level,
    )


def _tail_rows(tails: list[float], by_phase: list[list[float]]) -> list[list]:
    rows = [[0, tails[0]]]
    rows.extend([k, tails[k], *by_phase[k - 1]] for k in range(1, len(tails)))
    return rows


def cmd_simulate(args: argparse.Namespace) -> ResultsDocument:
    """Runs independent replications of the finite-n model."""
    config = _sim_config(args)
    stats = run_replications(config, ReplicationPlan(workers=args.workers))
    m = config.ph.order
    notes = ['system is overloaded (rho >= 1)'] if stats.overloaded else []
    return ResultsDocument(
        command='simulate',
        parameters=config.model_dump(mode='json', exclude={'ph'}) | {'dist': args.dist},
        tables=[
            ResultsTable(
                name='replications',
                columns=['replication', 'mean_response'],
                rows=[[i + 1, mean] for i, mean in enumerate(stats.replication_means)],
            ),
            ResultsTable(
                name='tail_fractions',
                columns=['k', 'fraction', *[f'phase_{i + 1}' for i in range(m)]],
                rows=_tail_rows(stats.tail_fractions, stats.tail_fractions_by_phase),
            ),
        ],
        summary={
            'mean_response': stats.mean_response,
            'ci_half_width': stats.ci_half_width,
            'customers_served': stats.customers_served,
            'mean_queue_length': stats.mean_queue_length,
            'little_check': stats.little_check,
        },
        notes=notes,
        provenance=_provenance(args, seed=config.seed),
    )


def cmd_compare(args: argparse.Namespace) -> ResultsDocument:
    """Closed form, mean-field stationary point, simulation and exponential baseline side by side."""
    params = _model(args)
    params.require_stable()
    table = fixed_point_table(params)
    stationary = stationary_solve(params, K=table.K)
    baseline = ModelParams(ph=matched_exponential(params.ph), lambda_=params.lambda_, d=params.d)
    baseline_table = fixed_point_table(baseline, k_max=table.K)
    residuals = balance_residuals(table, params)

    stats = None
    if not args.no_sim:
        stats = run_replications(_sim_config(args, params.ph), ReplicationPlan(workers=args.workers))

    rows = []
    for k in range(1, table.K + 1):
        simulated = None
        if stats is not None and k < len(stats.tail_fractions):
            simulated = stats.tail_fractions[k]
        rows.append(
            [
                k,
                float(table.tails[k - 1]),
                float(stationary.tails[k - 1]),
                simulated,
                float(baseline_table.tails[k - 1]),
            ]
        )
    summary = {
        'expected_sojourn': expected_sojourn(params),
        'exponential_baseline_sojourn': expected_sojourn(baseline),
        'max_scalar_residual': residuals.max_scalar(),
        'max_vector_residual': residuals.max_vector(),
        'stationary_gap': float(np.max(np.abs(stationary.levels - table.pi))),
    }
    if params.d == 1:
        summary['mph1_sojourn'] = mph1_sojourn(params.ph, params.lambda_)
    if stats is not None:
        summary['simulated_sojourn'] = stats.mean_response
        summary['simulated_ci_half_width'] = stats.ci_half_width
        summary['little_check'] = stats.little_check
    notes = []
    published = published_response_time(args.dist, params.d, params.lambda_)
    if published is not None:
        summary['published_sojourn'] = published
        if stats is not None and args.n == RESPONSE_TIME_N:
            gap = (stats.mean_response - published) / published
            summary['published_gap'] = gap
            flagged = abs(gap) > RESPONSE_TIME_REL_TOL
            summary['published_flagged'] = flagged
            if flagged:
                notes.append(
                    f'simulated sojourn misses the published {published} by {100 * gap:+.1f}%'
                )
        elif stats is not None:
            notes.append(
                f'published_sojourn is for n={RESPONSE_TIME_N}, not compared at n={args.n}'
            )
    if params.d == 1 and params.ph.order > 1:
        notes.append('at d=1 the M/PH/1 value mph1_sojourn is the exact single-queue mean')
    if residuals.max_vector() > RESIDUAL_TOL * params.lambda_:
        notes.append(
            f'componentwise balance residual {residuals.max_vector():.3g} at the closed form; '
            'compare the ode_stationary column'
        )
    return ResultsDocument(
        command='compare',
        parameters=_model_parameters(params, args),
        tables=[
            ResultsTable(
                name='tails',
                columns=['k', 'closed_form', 'ode_stationary', 'simulated', 'exponential_baseline'],
                rows=rows,
            )
        ],
        summary=summary,
        notes=notes,
        provenance=_provenance(args, seed=None if args.no_sim else args.seed),
    )


def _repro_response_times(args: argparse.Namespace) -> ResultsDocument:
    report = reproduce_response_times(
        response_time_keys(args.dist),
        horizon=args.horizon,
        warmup=args.warmup,
        seed=args.seed,
        replications=args.reps,
        plan=ReplicationPlan(workers=args.workers),
    )
    rows = [
        [
            cell.dist,
            cell.d,
            cell.lambda_,
            cell.published,
            cell.simulated,
            cell.ci_half_width,
            cell.gap,
            cell.flagged,
        ]
        for cell in report.cells
    ]
    flagged = report.flagged
    return ResultsDocument(
        command='repro',
        parameters={
            'table': RESPONSE_TIME_TABLE,
            'n': report.n,
            'dists': args.dist,
            'horizon': args.horizon,
            'warmup': args.warmup,
            'replications': args.reps,
            'rel_tol': RESPONSE_TIME_REL_TOL,
        },
        tables=[
            ResultsTable(
                name=RESPONSE_TIME_TABLE,
                columns=[
                    'dist',
                    'd',
                    'lambda',
                    'published',
                    'simulated',
                    'ci_half_width',
                    'gap',
                    'flagged',
                ],
                rows=rows,
            )
        ],
        summary={'cells': len(report.cells), 'flagged': len(flagged)},
        notes=[
            f'{cell.dist} d={cell.d} lambda={cell.lambda_}: published {cell.published}, '
            f'simulated {cell.simulated:.4g} ({100 * cell.gap:+.1f}%)'
            for cell in flagged
        ],
        provenance=_provenance(args, seed=args.seed),
    )


def cmd_repro(args: argparse.Namespace) -> ResultsDocument:
    """Recomputes a published table and flags deviating cells."""
    if args.table == RESPONSE_TIME_TABLE:
        return _repro_response_times(args)
    report = reproduce(args.table)
    rows = [
        [
            cell.scenario,
            cell.level,
            'e' if cell.phase is None else cell.phase + 1,
            cell.published,
            cell.computed,
            cell.deviation,
            cell.flagged,
        ]
        for cell in report.cells
    ]
    flagged = report.flagged
    return ResultsDocument(
        command='repro',
        parameters={'table': args.table},
        tables=[
            ResultsTable(
                name=report.table.name,
                columns=['scenario', 'k', 'phase', 'published', 'computed', 'deviation', 'flagged'],
                rows=rows,
            )
        ],
        summary={'cells': len(report.cells), 'flagged': len(flagged)},
        notes=[
            f'{cell.scenario} pi_{cell.level}: published {cell.published}, computed {cell.computed:.4g}'
            for cell in flagged
        ],
        provenance=_provenance(args),
    )
