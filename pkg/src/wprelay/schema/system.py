"""Pydantic models describing the relay geometry, channels and link."""

from __future__ import annotations

import logging
import math

from typing import Optional

import numpy as np

from public import public
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wprelay.schema.types import ComplexVector

logger = logging.getLogger(__name__)


@public
class GeometryConfig(BaseModel):
    """Antenna geometry and path losses of the line-of-sight setup."""

    model_config = ConfigDict(frozen=True)

    num_source_antennas: int = Field(
        2, ge=1, description='Source transmit antennas M.'
    )
    num_relay_tx_antennas: int = Field(
        2, ge=1, description='Relay transmit antennas N.'
    )
    element_spacing_over_wavelength: float = Field(
        0.5, gt=0, allow_inf_nan=False, description='ULA spacing d/lambda.'
    )
    aod_h: float = Field(
        10.0, allow_inf_nan=False, description='AoD of h in degrees.'
    )
    aod_g: float = Field(
        5.0, allow_inf_nan=False, description='AoD of g in degrees.'
    )
    beta_sr: float = Field(
        -60.0, allow_inf_nan=False, description='S to R path loss (dB).'
    )
    beta_rd: float = Field(
        -60.0, allow_inf_nan=False, description='R to D path loss (dB).'
    )
    beta_rr: float = Field(
        -15.0,
        description='Loop path loss (dB); -inf means no loop channel.',
    )

    @model_validator(mode='after')
    def _check_path_losses(self) -> GeometryConfig:
        if math.isnan(self.beta_rr) or self.beta_rr == math.inf:
            raise ValueError('beta_rr must be finite or -inf')
        for name in ('beta_sr', 'beta_rd', 'beta_rr'):
            value = getattr(self, name)
            if value > 0:
                logger.warning(
                    '%s = %s dB is a gain, not a loss; accepted anyway.',
                    name,
                    value,
                )
        return self


@public
class SystemParams(BaseModel):
    """Link-level parameters, all powers in watts."""

    model_config = ConfigDict(frozen=True)

    ps: float = Field(
        ..., ge=0, allow_inf_nan=False, description='Source power P_s.'
    )
    sigma_r2: float = Field(
        ..., gt=0, allow_inf_nan=False, description='Relay noise power.'
    )
    sigma_d2: float = Field(
        ...,
        gt=0,
        allow_inf_nan=False,
        description='Destination noise power.',
    )
    eta: float = Field(
        0.8, gt=0, le=1, description='Energy harvesting efficiency.'
    )
    t_block: float = Field(
        1.0, gt=0, allow_inf_nan=False, description='Block duration (s).'
    )


@public
class LinkBudget(BaseModel):
    """First-hop quantities shared by both protocols."""

    model_config = ConfigDict(frozen=True)

    gamma1: float = Field(..., ge=0, description='First-hop SNR.')
    a_power: float = Field(
        ..., gt=0, description='Received power A = P_s|h|^2 + sigma_r^2.'
    )
    harvest_scale: float = Field(
        ..., ge=0, description='Directly harvested power eta P_s |h|^2.'
    )


@public
class ChannelSet(BaseModel):
    """The three channel vectors of the relay network.

    ``h`` is the source to relay-receive-antenna channel, ``g`` the relay
    to destination channel and ``f`` the relay loop channel. Zero ``h`` or
    ``g`` are representable; the solvers report them as degenerate.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: ComplexVector
    g: ComplexVector
    f: ComplexVector
    geometry: Optional[GeometryConfig] = None

    @model_validator(mode='after')
    def _check_lengths(self) -> ChannelSet:
        if self.g.shape != self.f.shape:
            raise ValueError(
                f'g and f must share the relay antenna count, got '
                f'{self.g.size} and {self.f.size}'
            )
        if self.geometry is not None:
            if self.h.size != self.geometry.num_source_antennas:
                raise ValueError('h length differs from num_source_antennas')
            if self.g.size != self.geometry.num_relay_tx_antennas:
                raise ValueError(
                    'g length differs from num_relay_tx_antennas'
                )
        return self

    @property
    def num_relay_tx_antennas(self) -> int:
        """Relay transmit antenna count N."""
        return int(self.g.size)

    @property
    def is_degenerate(self) -> bool:
        """True when ``h`` or ``g`` is the zero vector."""
        return bool(
            np.linalg.norm(self.h) == 0.0 or np.linalg.norm(self.g) == 0.0
        )
