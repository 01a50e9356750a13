"""Randomized verification of both optimizers against the oracles.

Instance ``i`` of a run with seed ``s`` is drawn from
``numpy.random.default_rng([s, i])``, so any failure can be replayed
from the ``(seed, index)`` pair in the report.
"""

from __future__ import annotations

import logging
import math

from typing import Any

import numpy as np

from pydantic import BaseModel, ConfigDict

from wprelay.channels import db_to_linear, make_los_channel
from wprelay.link_model import feasible_max_power
from wprelay.optimizers import full_duplex
from wprelay.optimizers.time_switching import (
    solve_tsr,
    stationarity_residual,
)
from wprelay.oracle import OracleUnboundedError, grid_search_p1, scan_p2
from wprelay.schema.run import RunConfig
from wprelay.schema.solutions import Bounded, FdSolution, Solved
from wprelay.schema.system import ChannelSet, SystemParams
from wprelay.schema.types import as_complex_vector
from wprelay.schema.verification import (
    CheckFailure,
    SkippedInstance,
    VerificationReport,
)
from wprelay.utils import relative_deviation

logger = logging.getLogger(__name__)


class Instance(BaseModel):
    """One random relay instance and the draws that produced it."""

    model_config = ConfigDict(frozen=True)

    ps_dbm: float
    aod_h: float
    aod_g: float
    beta_sr: float
    beta_rd: float
    beta_rr: float
    params: SystemParams
    channels: ChannelSet

    def dump(self) -> dict[str, Any]:
        """Return a JSON-ready description for failure reports."""
        return self.model_dump(mode='json')


def draw_instance(rng: np.random.Generator, config: RunConfig) -> Instance:
    """Draw AoDs, path losses, ``beta_rr`` and ``P_s`` uniformly.

    The loop channel gets independent uniform phases per element so that
    ``f`` is not confined to the broadside direction.
    """
    sampling = config.sampling
    geometry = config.geometry
    aod_h, aod_g = rng.uniform(
        sampling.sample_aod_min, sampling.sample_aod_max, size=2
    )
    beta_sr, beta_rd = rng.uniform(
        sampling.sample_path_loss_db_min,
        sampling.sample_path_loss_db_max,
        size=2,
    )
    beta_rr = float(
        rng.uniform(
            sampling.sample_beta_rr_db_min, sampling.sample_beta_rr_db_max
        )
    )
    ps_dbm = float(
        rng.uniform(config.sweep.ps_dbm_start, config.sweep.ps_dbm_stop)
    )
    n = geometry.num_relay_tx_antennas
    loop_phases = rng.uniform(0.0, 2.0 * np.pi, size=n)
    spacing = geometry.element_spacing_over_wavelength
    channels = ChannelSet(
        h=make_los_channel(
            geometry.num_source_antennas, spacing, aod_h, beta_sr
        ),
        g=make_los_channel(n, spacing, aod_g, beta_rd),
        f=as_complex_vector(
            math.sqrt(db_to_linear(beta_rr)) * np.exp(1j * loop_phases)
        ),
    )
    return Instance(
        ps_dbm=ps_dbm,
        aod_h=float(aod_h),
        aod_g=float(aod_g),
        beta_sr=float(beta_sr),
        beta_rd=float(beta_rd),
        beta_rr=beta_rr,
        params=config.system.to_params(ps_dbm),
        channels=channels,
    )


def _fd_checks(
    config: RunConfig, inst: Instance, closed: FdSolution, matrix: FdSolution
) -> list[tuple[str, float, float]]:
    tol = config.tolerances
    params, ch = inst.params, inst.channels
    oracle = grid_search_p1(params, ch, tol.grid_spec)
    excess = max(
        0.0,
        oracle.best_value - closed.gamma2_star - oracle.certified_gap_bound,
    )
    feasible = feasible_max_power(params, ch.h, ch.f, closed.v_r_star)
    tightness = (
        relative_deviation(closed.pr_star, feasible.pr_max)
        if isinstance(feasible, Bounded)
        else math.inf
    )
    overlap = abs(np.vdot(closed.v_r_star, matrix.v_r_star))
    return [
        (
            'oracle_gap',
            relative_deviation(oracle.best_value, closed.gamma2_star),
            tol.oracle_rel_tol,
        ),
        (
            'oracle_excess',
            excess / closed.gamma2_star,
            tol.cross_path_rel_tol,
        ),
        (
            'closed_form_gamma2',
            relative_deviation(
                closed.gamma2_star, full_duplex.optimal_gamma2(params, ch)
            ),
            tol.cross_path_rel_tol,
        ),
        (
            'cross_path_gamma2',
            relative_deviation(matrix.gamma2_star, closed.gamma2_star),
            tol.cross_path_rel_tol,
        ),
        ('cross_path_beamformer', 1.0 - overlap, tol.cross_path_rel_tol),
        ('constraint_tightness', tightness, tol.tightness_rel_tol),
        (
            'phase_alignment',
            abs(np.vdot(ch.f, closed.v_r_star).imag),
            tol.alignment_tol,
        ),
    ]


def _tsr_checks(
    config: RunConfig, inst: Instance
) -> list[tuple[str, float, float]]:
    tol = config.tolerances
    tsr = solve_tsr(
        inst.params, inst.channels.h, inst.channels.g, tol=tol.bisection_tol
    )
    scan = scan_p2(tsr.gamma1, tsr.c_const, tol.tsr_scan_points)
    return [
        (
            'tsr_grid',
            max(0.0, scan.best_value - tsr.rate),
            tol.tsr_grid_tol,
        ),
        (
            'tsr_stationarity',
            abs(
                stationarity_residual(
                    tsr.alpha_star, tsr.gamma1, tsr.c_const
                )
            ),
            tol.stationarity_tol,
        ),
    ]


def _fd_pair(inst: Instance) -> tuple[FdSolution, FdSolution] | str:
    # a reason string when the instance cannot be solved
    closed = full_duplex.solve_closed_form(inst.params, inst.channels)
    if not isinstance(closed, Solved):
        return closed.diagnostic
    matrix = full_duplex.solve_matrix_path(inst.params, inst.channels)
    if not isinstance(matrix, Solved):
        return matrix.diagnostic
    first, second = closed.solution, matrix.solution
    if isinstance(first, FdSolution) and isinstance(second, FdSolution):
        return first, second
    return 'solvers returned a single-antenna payload'


def run_verify(
    config: RunConfig, num_random_instances: int, seed: int = 0
) -> VerificationReport:
    """Compare solvers with oracles over random instances.

    Unbounded-regime draws are skipped with their diagnostic. Every check
    deviation beyond its tolerance becomes a :class:`CheckFailure` that
    carries the instance.
    """
    if num_random_instances < 1:
        raise ValueError('num_random_instances must be at least 1')
    report = VerificationReport(seed=seed, requested=num_random_instances)

    for index in range(num_random_instances):
        rng = np.random.default_rng([seed, index])
        inst = draw_instance(rng, config)
        solved = _fd_pair(inst)
        if isinstance(solved, str):
            report.skipped.append(
                SkippedInstance(seed=seed, index=index, reason=solved)
            )
            continue
        try:
            checks = _fd_checks(config, inst, *solved)
        except OracleUnboundedError as exc:
            report.skipped.append(
                SkippedInstance(seed=seed, index=index, reason=str(exc))
            )
            continue
        checks += _tsr_checks(config, inst)

        report.checked += 1
        for name, deviation, tolerance in checks:
            previous = report.max_deviations.get(name, 0.0)
            report.max_deviations[name] = max(previous, deviation)
            if not deviation <= tolerance:
                logger.warning(
                    'seed %d instance %d: %s deviation %.3e exceeds %.0e',
                    seed,
                    index,
                    name,
                    deviation,
                    tolerance,
                )
                report.failures.append(
                    CheckFailure(
                        seed=seed,
                        index=index,
                        check=name,
                        deviation=deviation,
                        tolerance=tolerance,
                        instance=inst.dump(),
                    )
                )

    logger.info(
        'verified %d of %d instances (%d skipped, %d failures)',
        report.checked,
        report.requested,
        len(report.skipped),
        len(report.failures),
    )
    return report
