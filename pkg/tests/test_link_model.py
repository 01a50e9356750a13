"""Test the closed-form link quantities."""

import math

import numpy as np
import pytest

from wprelay.link_model import (
    BeamformerNormError,
    ZeroChannelError,
    end_to_end_snr,
    energy_waveform_phase,
    feasible_max_power,
    first_hop_snr,
    gamma_d_direct,
    harvested_energy_bound,
    link_budget,
    mrt_vector,
    second_hop_snr,
    throughput,
    tight_power_profile,
)
from wprelay.schema.solutions import Bounded, Unbounded

from tests.conftest import make_params


def _unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_link_budget(link_params, link_channels):
    """Test gamma1, A and a at the default link."""
    budget = link_budget(link_params, link_channels.h)
    assert budget.gamma1 == pytest.approx(2e6)
    assert budget.a_power == pytest.approx(2e-6 + 1e-12)
    assert budget.harvest_scale == pytest.approx(1.6e-6)
    assert first_hop_snr(link_params, link_channels.h) == budget.gamma1


def test_gamma_d_direct_matches_composition(rng):
    """Test the received-signal SNR against the hop composition."""
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        params = make_params(
            ps=10 ** rng.uniform(-3, 1),
            sigma_r2=10 ** rng.uniform(-13, -10),
            sigma_d2=10 ** rng.uniform(-13, -10),
        )
        h = 1e-3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        g = 1e-3 * (rng.normal(size=n) + 1j * rng.normal(size=n))
        v_r = _unit(rng, n)
        pr = 10 ** rng.uniform(-8, -3)
        gamma1 = first_hop_snr(params, h)
        gamma2 = second_hop_snr(pr, v_r, g, params.sigma_d2)
        expected = end_to_end_snr(gamma1, gamma2)
        assert gamma_d_direct(params, h, g, pr, v_r) == pytest.approx(
            expected, rel=1e-10
        )


def test_gamma_d_direct_orthogonal_beamformer(caplog):
    """Test that a beamformer orthogonal to g yields zero SNR."""
    params = make_params()
    g = np.array([1.0, 0.0])
    v_r = np.array([0.0, 1.0])
    assert gamma_d_direct(params, np.array([1e-3]), g, 1.0, v_r) == 0.0
    assert 'orthogonal' in caplog.text


def test_beamformer_norm_is_checked():
    """Test that non-unit beamformers are rejected."""
    with pytest.raises(BeamformerNormError):
        second_hop_snr(1.0, np.array([1.0, 1.0]), np.array([1.0, 0.0]), 1.0)


def test_mrt_vector():
    """Test the matched filter and its zero-channel error."""
    g = np.array([3.0, 4j])
    assert np.allclose(mrt_vector(g), [0.6, 0.8j])
    with pytest.raises(ZeroChannelError):
        mrt_vector(np.zeros(2))


def test_throughput():
    """Test the two-phase rate."""
    assert throughput(0.0) == 0.0
    assert throughput(3.0) == pytest.approx(1.0)
    assert throughput(1e-20) * 2 * math.log(2) / 1e-20 == pytest.approx(1.0)


def test_feasible_power_without_loop(link_params, link_channels):
    """Test that a zero loop channel caps the power at eta P_s |h|^2."""
    v_r = mrt_vector(link_channels.g)
    result = feasible_max_power(
        link_params, link_channels.h, np.zeros(2), v_r
    )
    assert isinstance(result, Bounded)
    assert result.pr_max == pytest.approx(1.6e-6)


def test_feasible_power_is_tight(link_params, link_channels):
    """Test energy causality holds with equality at the returned power."""
    h, f = link_channels.h, link_channels.f
    v_r = mrt_vector(link_channels.g)
    result = feasible_max_power(link_params, h, f, v_r)
    assert isinstance(result, Bounded)
    budget = link_budget(link_params, h)
    loop = math.sqrt(result.pr_max / budget.a_power) * abs(np.vdot(f, v_r))
    harvested = budget.harvest_scale * (1.0 + loop) ** 2
    assert result.pr_max == pytest.approx(harvested, rel=1e-12)
    energy = harvested_energy_bound(link_params, h, f, result.pr_max, v_r)
    assert energy == pytest.approx(0.5 * result.pr_max, rel=1e-12)


def test_feasible_power_unbounded():
    """Test that a non-contractive loop reports unbounded power."""
    params = make_params(ps=1.0, sigma_r2=1.0, eta=0.5)
    result = feasible_max_power(
        params, np.array([1.0]), np.array([2.0]), np.array([1.0])
    )
    assert isinstance(result, Unbounded)


def test_tight_power_profile_matches_scalar(link_params, link_channels, rng):
    """Test the vectorized power map row by row."""
    h, f = link_channels.h, link_channels.f
    rows = np.array([_unit(rng, 2) for _ in range(20)])
    profile = tight_power_profile(link_params, h, f, rows)
    for row, power in zip(rows, profile):
        result = feasible_max_power(link_params, h, f, row)
        assert isinstance(result, Bounded)
        assert power == pytest.approx(result.pr_max, rel=1e-12)


def test_tight_power_profile_marks_unbounded_rows():
    """Test that unbounded rows hold +inf."""
    params = make_params(ps=1.0, sigma_r2=1.0, eta=0.5)
    rows = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    profile = tight_power_profile(
        params, np.array([1.0]), np.array([4.0, 0.0]), rows
    )
    assert np.isinf(profile[0])
    assert profile[1] == pytest.approx(0.5)


def test_energy_waveform_phase():
    """Test the phase of f^H v_r."""
    f = np.array([1.0, 0.0])
    v_r = np.array([1j, 0.0])
    assert energy_waveform_phase(f, v_r) == pytest.approx(0.5 * math.pi)


def test_energy_causality_below_tight_power(link_params, link_channels, rng):
    """Test that every power below the tight one is energy feasible."""
    h, f = link_channels.h, link_channels.f
    for _ in range(50):
        v_r = _unit(rng, 2)
        result = feasible_max_power(link_params, h, f, v_r)
        assert isinstance(result, Bounded)
        for share in (0.0, 0.1, 0.5, 0.9, 0.999):
            pr = share * result.pr_max
            energy = harvested_energy_bound(link_params, h, f, pr, v_r)
            assert 0.5 * link_params.t_block * pr <= energy


def test_gamma_d_direct_is_monotone(link_channels):
    """Test that the destination SNR grows with P_r and with P_s."""
    h, g = link_channels.h, link_channels.g
    v_r = mrt_vector(g)
    params = make_params()
    by_relay = [
        gamma_d_direct(params, h, g, pr, v_r)
        for pr in np.logspace(-9, -3, 25)
    ]
    assert all(b >= a for a, b in zip(by_relay, by_relay[1:]))
    by_source = [
        gamma_d_direct(make_params(ps=ps), h, g, 1e-6, v_r)
        for ps in np.logspace(-3, 1, 25)
    ]
    assert all(b >= a for a, b in zip(by_source, by_source[1:]))
    assert by_source[-1] > by_source[0]


def test_harvested_energy_ignores_global_phase(
    link_params, link_channels, rng
):
    """Test that a unit-modulus factor on v_r leaves the energy bound."""
    h, f = link_channels.h, link_channels.f
    v_r = _unit(rng, 2)
    energy = harvested_energy_bound(link_params, h, f, 1e-6, v_r)
    for psi in np.linspace(0.0, 2.0 * np.pi, 7):
        rotated = np.exp(1j * psi) * v_r
        assert harvested_energy_bound(
            link_params, h, f, 1e-6, rotated
        ) == pytest.approx(energy, rel=1e-12)
