"""Pytest configuration for the wprelay package tests."""

from __future__ import annotations

import math

from pathlib import Path

import numpy as np
import pytest

from wprelay.channels import build_channels
from wprelay.harness.verify import Instance, draw_instance
from wprelay.schema.run import RunConfig, SystemSettings
from wprelay.schema.system import ChannelSet, GeometryConfig, SystemParams


def make_params(ps: float = 1.0, **kwargs: float) -> SystemParams:
    """Build system parameters with 1e-12 W noise unless overridden."""
    values = {'sigma_r2': 1e-12, 'sigma_d2': 1e-12, 'eta': 0.8}
    values.update(kwargs)
    return SystemParams(ps=ps, **values)


def make_channels(h: list, g: list, f: list) -> ChannelSet:
    """Build a channel set from plain complex lists."""
    return ChannelSet(
        h=np.asarray(h, dtype=np.complex128),
        g=np.asarray(g, dtype=np.complex128),
        f=np.asarray(f, dtype=np.complex128),
    )


@pytest.fixture
def test_data_dir() -> Path:
    """Fixture providing the path to the test data directory."""
    return Path(__file__).parent / 'data'


@pytest.fixture
def config_dir(test_data_dir: Path) -> Path:
    """Fixture for the directory containing configuration files."""
    return test_data_dir / 'configs'


@pytest.fixture
def link_geometry() -> GeometryConfig:
    """Two-antenna line-of-sight geometry with the default path losses."""
    return GeometryConfig()


@pytest.fixture
def link_channels(link_geometry: GeometryConfig) -> ChannelSet:
    """Channels built from the default geometry."""
    return build_channels(link_geometry)


@pytest.fixture
def link_params() -> SystemParams:
    """Default system parameters at P_s = 30 dBm (1 W)."""
    return SystemSettings().to_params()


@pytest.fixture
def effective_cos() -> float:
    """Closed-form cos(theta) of the default g and f."""
    return math.cos(0.5 * math.pi * math.sin(math.radians(5.0)))


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator."""
    return np.random.default_rng(20240601)


@pytest.fixture(scope='session')
def random_instances() -> list[Instance]:
    """Two hundred random bounded-regime instances with N = 2."""
    config = RunConfig()
    return [
        draw_instance(np.random.default_rng([11, index]), config)
        for index in range(200)
    ]


@pytest.fixture(scope='session')
def wide_instances() -> list[Instance]:
    """Random instances with four relay transmit antennas."""
    config = RunConfig(
        geometry=GeometryConfig(num_source_antennas=3, num_relay_tx_antennas=4)
    )
    return [
        draw_instance(np.random.default_rng([12, index]), config)
        for index in range(50)
    ]
