"""Test the randomized verification harness."""

import numpy as np
import pytest

from wprelay.harness.verify import draw_instance, run_verify
from wprelay.optimizers import full_duplex
from wprelay.schema.run import RunConfig, SamplingSettings


@pytest.fixture(scope='module')
def default_report():
    """Verification report over 100 default instances."""
    return run_verify(RunConfig(), 100, seed=0)


def _sabotage(monkeypatch):
    original = full_duplex.optimum_coefficients

    def flipped(params, ch):
        coeffs = original(params, ch)
        return coeffs.model_copy(update={'alpha1': -coeffs.alpha1})

    monkeypatch.setattr(full_duplex, 'optimum_coefficients', flipped)


def test_default_instances_pass(default_report):
    """Test that every check holds on 100 random instances."""
    assert default_report.passed
    assert default_report.checked + len(default_report.skipped) == 100
    assert default_report.checked >= 90
    assert default_report.max_deviations['oracle_gap'] <= 1e-3
    assert default_report.max_deviations['tsr_grid'] <= 1e-9
    expected = {
        'oracle_gap',
        'oracle_excess',
        'closed_form_gamma2',
        'cross_path_gamma2',
        'cross_path_beamformer',
        'constraint_tightness',
        'phase_alignment',
        'tsr_grid',
        'tsr_stationarity',
    }
    assert set(default_report.max_deviations) == expected


def test_sabotaged_solver_is_caught(monkeypatch):
    """Test that a wrong sign in the closed form fails verification."""
    _sabotage(monkeypatch)
    report = run_verify(RunConfig(), 5, seed=7)
    assert not report.passed
    failure = report.failures[0]
    assert failure.seed == 7
    assert 0 <= failure.index < 5
    assert {'params', 'channels', 'ps_dbm'} <= set(failure.instance)
    checks = {f.check for f in report.failures}
    assert 'cross_path_gamma2' in checks


def test_unbounded_draws_are_skipped():
    """Test that a non-contractive loop range skips every instance."""
    config = RunConfig(
        sampling=SamplingSettings(
            sample_beta_rr_db_min=10.0, sample_beta_rr_db_max=15.0
        )
    )
    report = run_verify(config, 10, seed=3)
    assert report.checked == 0
    assert len(report.skipped) == 10
    assert all('non-contractive' in s.reason for s in report.skipped)
    assert [s.index for s in report.skipped] == list(range(10))
    assert report.passed


def test_report_is_deterministic():
    """Test that the same seed reproduces the same report."""
    first = run_verify(RunConfig(), 5, seed=42)
    second = run_verify(RunConfig(), 5, seed=42)
    assert first.model_dump_json() == second.model_dump_json()


def test_instance_count_is_checked():
    """Test that fewer than one instance is rejected."""
    with pytest.raises(ValueError):
        run_verify(RunConfig(), 0)


def test_draws_stay_in_range():
    """Test that drawn instances respect the sampling ranges."""
    config = RunConfig()
    sampling = config.sampling
    for index in range(50):
        inst = draw_instance(np.random.default_rng([5, index]), config)
        for aod in (inst.aod_h, inst.aod_g):
            assert sampling.sample_aod_min <= aod <= sampling.sample_aod_max
        for loss in (inst.beta_sr, inst.beta_rd):
            assert (
                sampling.sample_path_loss_db_min
                <= loss
                <= sampling.sample_path_loss_db_max
            )
        assert (
            sampling.sample_beta_rr_db_min
            <= inst.beta_rr
            <= sampling.sample_beta_rr_db_max
        )
        assert 20.0 <= inst.ps_dbm <= 50.0
        assert inst.channels.f.size == 2
        assert np.allclose(
            np.abs(inst.channels.f), np.sqrt(10 ** (inst.beta_rr / 10))
        )
