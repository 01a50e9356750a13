"""Pydantic models for the brute-force oracles and verification runs."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from public import public
from pydantic import BaseModel, ConfigDict, Field

from wprelay.schema.types import ComplexVector


@public
class GridSpec(BaseModel):
    """Resolution of the beamformer grid search."""

    model_config = ConfigDict(frozen=True)

    angular_resolution: float = Field(
        1e-3, gt=0, description='Final spacing of the magnitude angle t.'
    )
    phase_resolution: float = Field(
        1e-3, gt=0, description='Final spacing of the relative phase.'
    )
    refine_rounds: int = Field(
        2,
        ge=0,
        description='Decades between the coarse and the final spacing.',
    )


@public
class OracleResult(BaseModel):
    """Incumbent of a brute-force search."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best_value: float
    best_beamformer: Optional[ComplexVector] = None
    best_alpha: Optional[float] = None
    certified_gap_bound: float = Field(..., ge=0)
    evaluations: int = Field(..., ge=1)


@public
class SkippedInstance(BaseModel):
    """A random instance excluded from verification."""

    seed: int
    index: int
    reason: str


@public
class CheckFailure(BaseModel):
    """A check whose deviation exceeded its tolerance."""

    seed: int
    index: int
    check: str
    deviation: float
    tolerance: float
    instance: Dict[str, Any] = Field(default_factory=dict)


@public
class VerificationReport(BaseModel):
    """Summary of a verification run."""

    seed: int
    requested: int
    checked: int = 0
    skipped: List[SkippedInstance] = Field(default_factory=list)
    failures: List[CheckFailure] = Field(default_factory=list)
    max_deviations: Dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Return True when no check failed."""
        return not self.failures
