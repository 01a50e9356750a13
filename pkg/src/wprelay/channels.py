"""Deterministic line-of-sight channels and dB/linear conversions.

All powers are linear (watts or plain ratios) inside the package; the
helpers here are the only place decibels are interpreted.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from wprelay.schema.system import ChannelSet, GeometryConfig
from wprelay.schema.types import ComplexArray, as_complex_vector

logger = logging.getLogger(__name__)


class ChannelError(ValueError):
    """Base class for channel construction errors."""

    ...


def db_to_linear(x: float) -> float:
    """Convert a power ratio in dB to linear scale.

    ``-inf`` maps to exactly ``0.0``.
    """
    return float(10.0 ** (x / 10.0))


def linear_to_db(x: float) -> float:
    """Convert a linear power ratio to dB; zero maps to ``-inf``."""
    if x < 0:
        raise ChannelError(f'negative power ratio: {x}')
    if x == 0:
        return -math.inf
    return 10.0 * math.log10(x)


def dbm_to_watts(x: float) -> float:
    """Convert an absolute power in dBm to watts."""
    return float(10.0 ** ((x - 30.0) / 10.0))


def watts_to_dbm(x: float) -> float:
    """Convert an absolute power in watts to dBm."""
    return linear_to_db(x) + 30.0


def _require_antennas(n: int) -> None:
    if n < 1:
        raise ChannelError(f'antenna count must be positive, got {n}')


def make_los_channel(
    n: int, d_over_lambda: float, aod_deg: float, path_loss_db: float
) -> ComplexArray:
    """Build a uniform-linear-array line-of-sight channel.

    Parameters
    ----------
    n : int
        Number of array elements.
    d_over_lambda : float
        Element spacing in carrier wavelengths.
    aod_deg : float
        Angle of departure in degrees.
    path_loss_db : float
        Path loss in dB, applied to every element.

    Returns
    -------
    numpy.ndarray
        Entry ``k`` equals
        ``sqrt(beta) * exp(j 2 pi (d/lambda) k sin(aod))``.
    """
    _require_antennas(n)
    k = np.arange(n)
    phase = 2 * np.pi * d_over_lambda * k * np.sin(np.deg2rad(aod_deg))
    amplitude = math.sqrt(db_to_linear(path_loss_db))
    return as_complex_vector(amplitude * np.exp(1j * phase))


def make_loop_channel(n: int, beta_rr: float) -> ComplexArray:
    """Build the flat loop channel ``sqrt(beta_rr) * [1, ..., 1]``.

    ``beta_rr = -inf`` gives the exact all-zeros vector.
    """
    _require_antennas(n)
    if beta_rr == -math.inf:
        return as_complex_vector(np.zeros(n))
    return as_complex_vector(np.full(n, math.sqrt(db_to_linear(beta_rr))))


def effective_angle_cos(f: ComplexArray, g: ComplexArray) -> float:
    """Return ``|f^H g| / (|f| |g|)``, the cosine of the effective angle.

    A zero ``f`` yields ``0.0`` so closed forms degrade to the
    no-recycling case.
    """
    g_norm = float(np.linalg.norm(g))
    if g_norm == 0.0:
        raise ChannelError('g must be nonzero')
    f_norm = float(np.linalg.norm(f))
    if f_norm == 0.0:
        return 0.0
    cos_theta = abs(np.vdot(f, g)) / (f_norm * g_norm)
    return float(min(cos_theta, 1.0))


def build_channels(geometry: GeometryConfig) -> ChannelSet:
    """Construct ``h``, ``g`` and ``f`` from an antenna geometry."""
    h = make_los_channel(
        geometry.num_source_antennas,
        geometry.element_spacing_over_wavelength,
        geometry.aod_h,
        geometry.beta_sr,
    )
    g = make_los_channel(
        geometry.num_relay_tx_antennas,
        geometry.element_spacing_over_wavelength,
        geometry.aod_g,
        geometry.beta_rd,
    )
    f = make_loop_channel(geometry.num_relay_tx_antennas, geometry.beta_rr)
    logger.debug(
        'built channels: |h|^2=%.6g |g|^2=%.6g |f|^2=%.6g',
        np.linalg.norm(h) ** 2,
        np.linalg.norm(g) ** 2,
        np.linalg.norm(f) ** 2,
    )
    return ChannelSet(h=h, g=g, f=f, geometry=geometry)
