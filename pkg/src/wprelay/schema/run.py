"""Run configuration and sweep records used by the harness."""

from __future__ import annotations

import logging
import math

from typing import Literal, Optional

from public import public
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wprelay.channels import dbm_to_watts
from wprelay.schema.system import GeometryConfig, SystemParams
from wprelay.schema.verification import GridSpec

logger = logging.getLogger(__name__)

RegimeFlag = Literal['ok', 'near-singular', 'unbounded']


@public
class SystemSettings(BaseModel):
    """System parameters as written in configuration files (dB/dBm)."""

    model_config = ConfigDict(frozen=True)

    ps_dbm: float = Field(
        30.0,
        allow_inf_nan=False,
        description='Source power for single-point solves.',
    )
    sigma_r2_dbm: float = Field(-90.0, allow_inf_nan=False)
    sigma_d2_dbm: float = Field(-90.0, allow_inf_nan=False)
    eta: float = Field(0.8, gt=0, le=1)
    t_block: float = Field(1.0, gt=0, allow_inf_nan=False)
    # documents where -90 dBm comes from; never used in computations
    bandwidth_hz: float = Field(10e6, gt=0, allow_inf_nan=False)
    noise_psd_dbm_hz: float = Field(-160.0, allow_inf_nan=False)

    @model_validator(mode='after')
    def _check_noise_budget(self) -> SystemSettings:
        budget = self.noise_psd_dbm_hz + 10 * math.log10(self.bandwidth_hz)
        for name in ('sigma_r2_dbm', 'sigma_d2_dbm'):
            if abs(getattr(self, name) - budget) > 1e-6:
                logger.warning(
                    '%s = %s dBm differs from the PSD x bandwidth budget '
                    '(%.3f dBm).',
                    name,
                    getattr(self, name),
                    budget,
                )
        return self

    def to_params(self, ps_dbm: Optional[float] = None) -> SystemParams:
        """Convert to watts, optionally overriding the source power."""
        return SystemParams(
            ps=dbm_to_watts(self.ps_dbm if ps_dbm is None else ps_dbm),
            sigma_r2=dbm_to_watts(self.sigma_r2_dbm),
            sigma_d2=dbm_to_watts(self.sigma_d2_dbm),
            eta=self.eta,
            t_block=self.t_block,
        )


@public
class SweepSettings(BaseModel):
    """Source-power grid of the throughput comparison."""

    model_config = ConfigDict(frozen=True)

    ps_dbm_start: float = Field(20.0, allow_inf_nan=False)
    ps_dbm_stop: float = Field(50.0, allow_inf_nan=False)
    ps_dbm_step: float = Field(1.0, gt=0, allow_inf_nan=False)

    @model_validator(mode='after')
    def _check_order(self) -> SweepSettings:
        if self.ps_dbm_start > self.ps_dbm_stop:
            raise ValueError('ps_dbm_start must not exceed ps_dbm_stop')
        return self

    def grid(self) -> list[float]:
        """Return the ascending source powers in dBm, stop included."""
        count = (
            math.floor(
                (self.ps_dbm_stop - self.ps_dbm_start) / self.ps_dbm_step
                + 1e-9
            )
            + 1
        )
        return [
            round(self.ps_dbm_start + i * self.ps_dbm_step, 12)
            for i in range(count)
        ]


@public
class ToleranceSettings(BaseModel):
    """Numerical tolerances of the solvers and of verification."""

    model_config = ConfigDict(frozen=True)

    bisection_tol: float = Field(1e-12, gt=0, lt=1)
    angular_resolution: float = Field(1e-3, gt=0)
    phase_resolution: float = Field(1e-3, gt=0)
    refine_rounds: int = Field(2, ge=0)
    oracle_rel_tol: float = Field(1e-3, gt=0)
    cross_path_rel_tol: float = Field(1e-9, gt=0)
    tightness_rel_tol: float = Field(1e-9, gt=0)
    alignment_tol: float = Field(1e-9, gt=0)
    stationarity_tol: float = Field(1e-8, gt=0)
    tsr_grid_tol: float = Field(1e-9, gt=0)
    tsr_scan_points: int = Field(10_000, ge=100)

    @property
    def grid_spec(self) -> GridSpec:
        """Return the oracle grid specification."""
        return GridSpec(
            angular_resolution=self.angular_resolution,
            phase_resolution=self.phase_resolution,
            refine_rounds=self.refine_rounds,
        )


@public
class SamplingSettings(BaseModel):
    """Ranges of the random verification instances."""

    model_config = ConfigDict(frozen=True)

    sample_aod_min: float = Field(-90.0, allow_inf_nan=False)
    sample_aod_max: float = Field(90.0, allow_inf_nan=False)
    sample_path_loss_db_min: float = Field(-80.0, allow_inf_nan=False)
    sample_path_loss_db_max: float = Field(-40.0, allow_inf_nan=False)
    sample_beta_rr_db_min: float = Field(-30.0, allow_inf_nan=False)
    sample_beta_rr_db_max: float = Field(-10.0, allow_inf_nan=False)

    @model_validator(mode='after')
    def _check_ranges(self) -> SamplingSettings:
        stems = ('sample_aod', 'sample_path_loss_db', 'sample_beta_rr_db')
        for stem in stems:
            if getattr(self, f'{stem}_min') > getattr(self, f'{stem}_max'):
                raise ValueError(f'{stem}_min must not exceed {stem}_max')
        return self


@public
class RunConfig(BaseModel):
    """Effective configuration of a CLI run."""

    model_config = ConfigDict(frozen=True)

    geometry: GeometryConfig = Field(default_factory=GeometryConfig)
    system: SystemSettings = Field(default_factory=SystemSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    output_path: Optional[str] = None


@public
class SweepRow(BaseModel):
    """One source-power point of the protocol comparison."""

    model_config = ConfigDict(frozen=True)

    ps_dbm: float
    rate_fd: Optional[float] = Field(None, ge=0)
    rate_tsr: float = Field(..., ge=0)
    gamma2_star: Optional[float] = Field(None, ge=0)
    pr_fd_watts: Optional[float] = Field(None, ge=0)
    alpha_star: Optional[float] = Field(None, gt=0, lt=1)
    pr_tsr_watts: float = Field(..., ge=0)
    regime_flag: RegimeFlag = 'ok'
