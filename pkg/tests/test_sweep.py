"""Test the source-power sweep."""

import io

import pytest

from wprelay.channels import ChannelError
from wprelay.harness.config import load_config
from wprelay.harness.sweep import (
    CSV_HEADER,
    run_sweep,
    sweep_row,
    write_sweep_csv,
)
from wprelay.schema.run import RunConfig

from tests.conftest import make_channels


@pytest.fixture(scope='module')
def default_rows():
    """Sweep rows of the default configuration."""
    return run_sweep(RunConfig())


def _csv(rows) -> str:
    buffer = io.StringIO()
    write_sweep_csv(rows, buffer)
    return buffer.getvalue()


def test_default_grid(default_rows):
    """Test 31 ascending rows from 20 to 50 dBm."""
    powers = [row.ps_dbm for row in default_rows]
    assert len(powers) == 31
    assert powers[0] == 20.0 and powers[-1] == 50.0
    assert powers == sorted(powers)
    assert all(row.regime_flag == 'ok' for row in default_rows)


def test_rates_grow_with_source_power(default_rows):
    """Test that both rates are nondecreasing in P_s."""
    fd = [row.rate_fd for row in default_rows]
    tsr = [row.rate_tsr for row in default_rows]
    assert all(b >= a for a, b in zip(fd, fd[1:]))
    assert all(b >= a for a, b in zip(tsr, tsr[1:]))


def test_full_duplex_dominates(default_rows):
    """Test that full duplex beats time switching from 30 dBm on."""
    for row in default_rows:
        if row.ps_dbm >= 30.0:
            assert row.rate_fd > row.rate_tsr
            assert 0 < row.alpha_star < 1


def test_reference_row(default_rows):
    """Test the 30 dBm row against the single-point optimum."""
    row = next(row for row in default_rows if row.ps_dbm == 30.0)
    assert row.gamma2_star == pytest.approx(5.3045, rel=1e-3)
    assert row.rate_fd == pytest.approx(1.3282, rel=1e-3)


def test_csv_layout(default_rows):
    """Test the header and the number of significant digits."""
    lines = _csv(default_rows).splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    assert lines[0] == (
        'ps_dbm,rate_fd_bpshz,rate_tsr_bpshz,gamma2_star,pr_fd_w,'
        'alpha_star,pr_tsr_w,regime'
    )
    assert len(lines) == 32
    cells = lines[11].split(',')
    assert cells[0] == '30'
    assert cells[-1] == 'ok'
    assert len(cells[1].replace('.', '').lstrip('0')) <= 9


def test_csv_is_deterministic():
    """Test that repeated sweeps write identical bytes."""
    config = RunConfig()
    assert _csv(run_sweep(config)) == _csv(run_sweep(config))


def test_unbounded_rows(config_dir, caplog):
    """Test that unbounded points keep the time-switching columns."""
    config = load_config(config_dir / 'unbounded.env')
    rows = run_sweep(config)
    assert len(rows) == 3
    for row in rows:
        assert row.regime_flag == 'unbounded'
        assert row.rate_fd is None and row.gamma2_star is None
        assert row.rate_tsr > 0
    cells = _csv(rows).splitlines()[1].split(',')
    assert cells[1] == cells[3] == cells[4] == ''
    assert cells[-1] == 'unbounded'
    assert 'unbounded' in caplog.text


def test_degenerate_channel_is_an_error():
    """Test that a zero destination channel aborts the row."""
    channels = make_channels([1e-3, 1e-3], [0.0, 0.0], [0.1, 0.1])
    with pytest.raises(ChannelError):
        sweep_row(RunConfig(), channels, 30.0)
