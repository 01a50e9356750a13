"""Source-power sweep comparing the full-duplex and time-switching relays."""

from __future__ import annotations

import csv
import logging

from typing import Iterable, TextIO

from wprelay.channels import ChannelError, build_channels
from wprelay.optimizers.full_duplex import solve_closed_form
from wprelay.optimizers.time_switching import solve_tsr
from wprelay.schema.run import RegimeFlag, RunConfig, SweepRow
from wprelay.schema.solutions import (
    DegenerateChannel,
    FdSolution,
    Solved,
)
from wprelay.schema.system import ChannelSet
from wprelay.utils import format_sig

logger = logging.getLogger(__name__)

CSV_HEADER = (
    'ps_dbm',
    'rate_fd_bpshz',
    'rate_tsr_bpshz',
    'gamma2_star',
    'pr_fd_w',
    'alpha_star',
    'pr_tsr_w',
    'regime',
)


def sweep_row(
    config: RunConfig, channels: ChannelSet, ps_dbm: float
) -> SweepRow:
    """Solve both protocols at one source power."""
    params = config.system.to_params(ps_dbm)
    outcome = solve_closed_form(params, channels)
    if isinstance(outcome, DegenerateChannel):
        raise ChannelError(outcome.diagnostic)
    tsr = solve_tsr(
        params, channels.h, channels.g, tol=config.tolerances.bisection_tol
    )

    fd = outcome.solution if isinstance(outcome, Solved) else None
    if isinstance(fd, FdSolution):
        regime: RegimeFlag = 'near-singular' if fd.near_singular else 'ok'
        return SweepRow(
            ps_dbm=ps_dbm,
            rate_fd=fd.rate,
            rate_tsr=tsr.rate,
            gamma2_star=fd.gamma2_star,
            pr_fd_watts=fd.pr_star,
            alpha_star=tsr.alpha_star,
            pr_tsr_watts=tsr.pr,
            regime_flag=regime,
        )
    logger.warning('P_s = %s dBm: full-duplex power is unbounded.', ps_dbm)
    return SweepRow(
        ps_dbm=ps_dbm,
        rate_tsr=tsr.rate,
        alpha_star=tsr.alpha_star,
        pr_tsr_watts=tsr.pr,
        regime_flag='unbounded',
    )


def run_sweep(config: RunConfig) -> list[SweepRow]:
    """Return one row per source power, in ascending order."""
    channels = build_channels(config.geometry)
    grid = config.sweep.grid()
    logger.info(
        'sweeping %d source powers from %s to %s dBm',
        len(grid),
        grid[0],
        grid[-1],
    )
    return [sweep_row(config, channels, ps_dbm) for ps_dbm in grid]


def write_sweep_csv(rows: Iterable[SweepRow], stream: TextIO) -> None:
    """Write ``rows`` as CSV with 9 significant digits per number."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                format_sig(row.ps_dbm),
                format_sig(row.rate_fd),
                format_sig(row.rate_tsr),
                format_sig(row.gamma2_star),
                format_sig(row.pr_fd_watts),
                format_sig(row.alpha_star),
                format_sig(row.pr_tsr_watts),
                row.regime_flag,
            ]
        )
