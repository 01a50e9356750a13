"""Pydantic models for optimizer outputs."""

from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np

from public import public
from pydantic import BaseModel, ConfigDict, Field

from wprelay.schema.types import ComplexVector


@public
class Bounded(BaseModel):
    """Finite maximum relay power for a given beamformer."""

    model_config = ConfigDict(frozen=True)

    kind: Literal['bounded'] = 'bounded'
    pr_max: float = Field(..., ge=0, description='Tight relay power (W).')


@public
class Unbounded(BaseModel):
    """The energy loop is non-contractive: any relay power is feasible."""

    model_config = ConfigDict(frozen=True)

    kind: Literal['unbounded'] = 'unbounded'


FeasiblePower = Annotated[
    Union[Bounded, Unbounded], Field(discriminator='kind')
]


@public
class OptimumCoefficients(BaseModel):
    """Mixing weights of the optimal unnormalized beamformer."""

    model_config = ConfigDict(frozen=True)

    alpha1: float
    alpha2: float
    cos_theta: float = Field(..., ge=0, le=1)
    phase_gf: float = Field(..., description='Phase of g^H f (radians).')


@public
class FdSolution(BaseModel):
    """Optimal relay power and beamformer of the full-duplex protocol."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pr_star: float = Field(..., ge=0, description='Optimal relay power (W).')
    v_r_star: ComplexVector
    gamma1: float = Field(..., ge=0)
    gamma2_star: float = Field(..., ge=0)
    gamma_d: float = Field(..., ge=0)
    rate: float = Field(..., ge=0, description='Throughput in bps/Hz.')
    alpha1: float
    alpha2: float
    cos_theta: float = Field(..., ge=0, le=1)
    harvested_energy: float = Field(
        ..., ge=0, description='Harvested energy per block (J).'
    )
    energy_waveform_phase: float = Field(
        0.0, description='Phase the source energy waveform must carry.'
    )
    near_singular: bool = False


@public
class SisoSolution(BaseModel):
    """Optimal relay power of the single-transmit-antenna relay."""

    model_config = ConfigDict(frozen=True)

    pr_star: float = Field(..., ge=0)
    loop_ratio: float = Field(
        ..., ge=0, lt=1, description='sqrt(eta)|f| / sqrt(1 + 1/gamma1).'
    )
    gamma1: float = Field(..., ge=0)


@public
class MatrixIntermediates(BaseModel):
    """Quadratic-form reformulation quantities of the matrix path."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    f_hat: ComplexVector
    loop_load: float = Field(..., description='a |f_hat|^2.')
    f_matrix: np.ndarray
    f_sqrt: np.ndarray
    f_inv_sqrt: np.ndarray
    f_inv: np.ndarray
    b_vec: ComplexVector
    beta_scalar: float = Field(..., ge=0)
    psi: float
    v_unscaled: ComplexVector


@public
class Solved(BaseModel):
    """A finite optimum was found."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal['solved'] = 'solved'
    solution: Union[FdSolution, SisoSolution]


@public
class UnboundedPower(BaseModel):
    """No finite optimum: the recycled energy can sustain any power."""

    model_config = ConfigDict(frozen=True)

    kind: Literal['unbounded'] = 'unbounded'
    diagnostic: str


@public
class DegenerateChannel(BaseModel):
    """The source or destination channel is the zero vector."""

    model_config = ConfigDict(frozen=True)

    kind: Literal['degenerate'] = 'degenerate'
    diagnostic: str


SolveOutcome = Annotated[
    Union[Solved, UnboundedPower, DegenerateChannel],
    Field(discriminator='kind'),
]


@public
class TsrSolution(BaseModel):
    """Optimal time split of the time-switching relaying protocol."""

    model_config = ConfigDict(frozen=True)

    alpha_star: float = Field(..., gt=0, lt=1)
    z_star: float = Field(..., gt=1)
    c_const: float = Field(..., gt=0)
    gamma1: float = Field(..., gt=0)
    pr: float = Field(..., ge=0, description='Relay power (W).')
    gamma_d: float = Field(..., ge=0)
    rate: float = Field(..., ge=0, description='Throughput in bps/Hz.')

