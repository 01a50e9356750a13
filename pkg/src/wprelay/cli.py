"""Command-line interface for relay solves, sweeps and verification."""

from __future__ import annotations

import io
import logging

from pathlib import Path
from typing import Optional

import typer

from rich import print
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from wprelay.channels import build_channels
from wprelay.harness.config import ConfigError, load_config, render_config
from wprelay.harness.sweep import run_sweep, sweep_row, write_sweep_csv
from wprelay.harness.verify import run_verify
from wprelay.optimizers.full_duplex import solve_closed_form
from wprelay.optimizers.time_switching import solve_tsr
from wprelay.schema.run import RunConfig
from wprelay.schema.solutions import FdSolution, Solved
from wprelay.utils import format_sig

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True)

ConfigOption = typer.Option(
    None, '--config', help='Flat key=value configuration file.'
)
OutOption = typer.Option(None, '--out', help='Output file.')

err_console = Console(stderr=True)


def configure_logging(level: str = 'WARNING') -> None:
    """Configure logging for the command-line tools."""
    logging.basicConfig(
        level=level.upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def _load(path: Optional[Path], echo: bool = True) -> RunConfig:
    try:
        config = load_config(path)
    except ConfigError as exc:
        print(f'[bold red]{escape(str(exc))}[/bold red]')
        raise typer.Exit(code=2) from exc
    if echo:
        # stdout carries only command output
        err_console.print(
            escape(render_config(config)), highlight=False, soft_wrap=True
        )
    return config


def _write_single_row(config: RunConfig, out: Path) -> None:
    row = sweep_row(
        config, build_channels(config.geometry), config.system.ps_dbm
    )
    with out.open('w', encoding='utf-8', newline='') as stream:
        write_sweep_csv([row], stream)
    print(f'[green]Row written to {out}[/green]')


def _table(title: str, values: dict[str, str]) -> Table:
    table = Table(title=title)
    table.add_column('quantity', style='cyan')
    table.add_column('value', justify='right')
    for key, value in values.items():
        table.add_row(key, value)
    return table


@app.callback()
def main(
    log_level: str = typer.Option(
        'WARNING', '--log-level', help='Python logging level.'
    ),
) -> None:
    """Full-duplex wireless-powered relay optimization tools."""
    configure_logging(log_level)


@app.command('solve-fd')
def solve_fd(
    config_path: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Solve the full-duplex relay at the configured source power."""
    config = _load(config_path)
    params = config.system.to_params()
    outcome = solve_closed_form(params, build_channels(config.geometry))
    if not isinstance(outcome, Solved):
        print(
            f'[bold yellow]{outcome.kind}:[/bold yellow] '
            f'{escape(outcome.diagnostic)}'
        )
    elif isinstance(outcome.solution, FdSolution):
        sol = outcome.solution
        values = {
            'P_s (dBm)': format_sig(config.system.ps_dbm),
            'P_r* (W)': format_sig(sol.pr_star),
            'gamma1': format_sig(sol.gamma1),
            'gamma2*': format_sig(sol.gamma2_star),
            'gamma_d': format_sig(sol.gamma_d),
            'rate (bps/Hz)': format_sig(sol.rate),
            'alpha1': format_sig(sol.alpha1),
            'alpha2': format_sig(sol.alpha2),
            'cos theta': format_sig(sol.cos_theta),
            'harvested energy (J)': format_sig(sol.harvested_energy),
            'near-singular': str(sol.near_singular),
        }
        for k, z in enumerate(sol.v_r_star):
            values[f'v_r*[{k}]'] = f'{format_sig(z.real)} {z.imag:+.9g}j'
        print(_table('Full-duplex optimum', values))
    if out is not None:
        _write_single_row(config, out)


@app.command('solve-tsr')
def solve_tsr_command(
    config_path: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Solve the time-switching benchmark at the configured source power."""
    config = _load(config_path)
    channels = build_channels(config.geometry)
    sol = solve_tsr(
        config.system.to_params(),
        channels.h,
        channels.g,
        tol=config.tolerances.bisection_tol,
    )
    values = {
        'P_s (dBm)': format_sig(config.system.ps_dbm),
        'alpha*': format_sig(sol.alpha_star),
        'z*': format_sig(sol.z_star),
        'C': format_sig(sol.c_const),
        'P_r (W)': format_sig(sol.pr),
        'gamma_d': format_sig(sol.gamma_d),
        'rate (bps/Hz)': format_sig(sol.rate),
    }
    print(_table('Time-switching optimum', values))
    if out is not None:
        _write_single_row(config, out)


@app.command('sweep')
def sweep(
    config_path: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Compare both protocols over the source-power grid as CSV."""
    config = _load(config_path)
    rows = run_sweep(config)
    target = out or (
        Path(config.output_path) if config.output_path else None
    )
    if target is None:
        buffer = io.StringIO()
        write_sweep_csv(rows, buffer)
        typer.echo(buffer.getvalue(), nl=False)
        return
    with target.open('w', encoding='utf-8', newline='') as stream:
        write_sweep_csv(rows, stream)
    print(f'[green]{len(rows)} rows written to {target}[/green]')


@app.command('verify')
def verify(
    config_path: Optional[Path] = ConfigOption,
    seed: int = typer.Option(0, '--seed', help='Base random seed.'),
    instances: int = typer.Option(
        100, '--instances', min=1, help='Random instances to check.'
    ),
    out: Optional[Path] = typer.Option(
        None, '--out', help='JSON report file.'
    ),
) -> None:
    """Check the solvers against the brute-force oracles."""
    config = _load(config_path)
    report = run_verify(config, instances, seed=seed)

    table = Table(title=f'Verification (seed {seed})')
    table.add_column('check', style='cyan')
    table.add_column('max deviation', justify='right')
    for name, deviation in sorted(report.max_deviations.items()):
        table.add_row(name, f'{deviation:.3e}')
    print(table)
    print(
        f'checked {report.checked}, skipped {len(report.skipped)}, '
        f'failures {len(report.failures)}'
    )
    for skipped in report.skipped:
        print(
            f'[yellow]skipped {skipped.index}:[/yellow] '
            f'{escape(skipped.reason)}'
        )
    for failure in report.failures:
        print(
            f'[bold red]FAIL[/bold red] seed={failure.seed} '
            f'index={failure.index} {failure.check}: '
            f'{failure.deviation:.3e} > {failure.tolerance:.0e}'
        )
    if out is not None:
        out.write_text(report.model_dump_json(indent=2), encoding='utf-8')
        print(f'[green]Report written to {out}[/green]')
    if not report.passed:
        raise typer.Exit(code=1)


@app.command('config')
def show_config(config_path: Optional[Path] = ConfigOption) -> None:
    """Print the effective configuration as key=value lines."""
    typer.echo(render_config(_load(config_path, echo=False)))


if __name__ == '__main__':  # pragma: no cover
    app()
