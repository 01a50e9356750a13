"""Test the wprelay command-line interface."""

import json

from typer.testing import CliRunner

from wprelay.cli import app
from wprelay.harness.sweep import CSV_HEADER
from wprelay.optimizers import full_duplex

runner = CliRunner()


def test_config_command(config_dir):
    """Test that the effective configuration is printed."""
    result = runner.invoke(app, ['config'])
    assert result.exit_code == 0
    assert 'eta=0.8' in result.stdout
    assert 'ps_dbm=30.0' in result.stdout

    result = runner.invoke(
        app, ['config', '--config', str(config_dir / 'eta_override.env')]
    )
    assert result.exit_code == 0
    assert 'eta=1.0' in result.stdout


def test_sweep_to_stdout():
    """Test that the sweep CSV goes to stdout without --out."""
    result = runner.invoke(app, ['sweep'])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    assert len(lines) == 32
    assert 'eta=0.8' in result.stderr


def test_sweep_to_file(config_dir, tmp_path):
    """Test --out together with a configuration file."""
    out = tmp_path / 'sweep.csv'
    result = runner.invoke(
        app,
        [
            'sweep',
            '--config',
            str(config_dir / 'short_sweep.env'),
            '--out',
            str(out),
        ],
    )
    assert result.exit_code == 0
    lines = out.read_text(encoding='utf-8').splitlines()
    assert len(lines) == 4
    assert [line.split(',')[0] for line in lines[1:]] == ['20', '30', '40']


def test_solve_fd():
    """Test the single-point full-duplex table."""
    result = runner.invoke(app, ['solve-fd'])
    assert result.exit_code == 0
    assert 'Full-duplex optimum' in result.stdout
    assert '5.30' in result.stdout
    assert 'ps_dbm=30.0' in result.stderr
    assert 'ps_dbm=30.0' not in result.stdout


def test_solve_fd_unbounded(config_dir):
    """Test that an unbounded instance is reported, not solved."""
    result = runner.invoke(
        app, ['solve-fd', '--config', str(config_dir / 'unbounded.env')]
    )
    assert result.exit_code == 0
    assert 'unbounded' in result.stdout
    assert 'Full-duplex optimum' not in result.stdout


def test_solve_tsr_writes_row(tmp_path):
    """Test the time-switching table and its CSV row."""
    out = tmp_path / 'row.csv'
    result = runner.invoke(app, ['solve-tsr', '--out', str(out)])
    assert result.exit_code == 0
    assert 'Time-switching optimum' in result.stdout
    lines = out.read_text(encoding='utf-8').splitlines()
    assert len(lines) == 2
    assert lines[1].startswith('30,')


def test_verify_writes_report(tmp_path):
    """Test a short verification run and its JSON report."""
    out = tmp_path / 'report.json'
    result = runner.invoke(
        app, ['verify', '--instances', '3', '--seed', '1', '--out', str(out)]
    )
    assert result.exit_code == 0
    report = json.loads(out.read_text(encoding='utf-8'))
    assert report['seed'] == 1
    assert report['requested'] == 3
    assert report['failures'] == []


def test_verify_failure_exit_code(monkeypatch):
    """Test that failed checks exit with status 1."""
    original = full_duplex.optimum_coefficients

    def flipped(params, ch):
        coeffs = original(params, ch)
        return coeffs.model_copy(update={'alpha1': -coeffs.alpha1})

    monkeypatch.setattr(full_duplex, 'optimum_coefficients', flipped)
    result = runner.invoke(app, ['verify', '--instances', '2'])
    assert result.exit_code == 1
    assert 'FAIL' in result.stdout


def test_malformed_config_exit_code(config_dir):
    """Test that configuration errors exit with status 2."""
    result = runner.invoke(
        app, ['sweep', '--config', str(config_dir / 'malformed.env')]
    )
    assert result.exit_code == 2
    assert 'malformed' in result.stdout
