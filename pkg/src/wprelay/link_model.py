"""Closed-form link quantities of the two-hop amplify-and-forward relay.

The first hop carries information from the source to the relay's
receive antenna; in the second hop the relay forwards the scaled
received signal to the destination while it harvests energy from the
source and, through the loop channel ``f``, from its own transmission.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt

from wprelay.schema.solutions import Bounded, FeasiblePower, Unbounded
from wprelay.schema.system import LinkBudget, SystemParams
from wprelay.schema.types import ComplexArray

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-9


class LinkModelError(ValueError):
    """Base class for link model errors."""

    ...


class BeamformerNormError(LinkModelError):
    """A beamformer is not unit-norm within tolerance."""

    ...


class ZeroChannelError(LinkModelError):
    """A channel that must be nonzero is the zero vector."""

    ...


def _require_unit(v_r: ComplexArray) -> None:
    norm = float(np.linalg.norm(v_r))
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise BeamformerNormError(
            f'beamformer norm {norm!r} is not 1 within {UNIT_NORM_TOL}'
        )


def _channel_gain(h: ComplexArray) -> float:
    return float(np.vdot(h, h).real)


def mrt_vector(h: ComplexArray) -> ComplexArray:
    """Return the maximal-ratio-transmission beamformer ``h / |h|``."""
    norm = float(np.linalg.norm(h))
    if norm == 0.0:
        raise ZeroChannelError('MRT is undefined for a zero channel')
    return np.asarray(h, dtype=np.complex128) / norm


def link_budget(params: SystemParams, h: ComplexArray) -> LinkBudget:
    """Return the first-hop SNR, received power ``A`` and harvest scale."""
    received = params.ps * _channel_gain(h)
    return LinkBudget(
        gamma1=received / params.sigma_r2,
        a_power=received + params.sigma_r2,
        harvest_scale=params.eta * received,
    )


def first_hop_snr(params: SystemParams, h: ComplexArray) -> float:
    """Return ``gamma1 = P_s |h|^2 / sigma_r^2``."""
    return params.ps * _channel_gain(h) / params.sigma_r2


def second_hop_snr(
    pr: float, v_r: ComplexArray, g: ComplexArray, sigma_d2: float
) -> float:
    """Return ``gamma2 = P_r |g^H v_r|^2 / sigma_d^2``."""
    _require_unit(v_r)
    return pr * abs(np.vdot(g, v_r)) ** 2 / sigma_d2


def end_to_end_snr(gamma1: float, gamma2: float) -> float:
    """Compose hop SNRs as ``gamma1 gamma2 / (gamma1 + gamma2 + 1)``."""
    return gamma1 * gamma2 / (gamma1 + gamma2 + 1.0)


def gamma_d_direct(
    params: SystemParams,
    h: ComplexArray,
    g: ComplexArray,
    pr: float,
    v_r: ComplexArray,
) -> float:
    """Evaluate the destination SNR from the received-signal expression.

    Returns ``P_s|h|^2 / (sigma_r^2 + sigma_d^2 A / (P_r |g^H v_r|^2))``,
    or ``0.0`` when no signal power reaches the destination.
    """
    _require_unit(v_r)
    received = params.ps * _channel_gain(h)
    forwarded = pr * abs(np.vdot(g, v_r)) ** 2
    if forwarded == 0.0:
        if pr > 0:
            logger.warning(
                'beamformer is orthogonal to g; destination SNR is zero.'
            )
        return 0.0
    a_power = received + params.sigma_r2
    noise = params.sigma_r2 + params.sigma_d2 * a_power / forwarded
    return received / noise


def throughput(gamma_d: float) -> float:
    """Return the two-phase throughput ``0.5 log2(1 + gamma_d)`` in bps/Hz."""
    return math.log1p(gamma_d) / (2.0 * math.log(2.0))


def energy_waveform_phase(f: ComplexArray, v_r: ComplexArray) -> float:
    """Return the phase of ``f^H v_r``.

    The harvested-energy bound is attained when the source energy symbols
    equal the information symbols rotated by this phase.
    """
    return float(np.angle(np.vdot(f, v_r)))


def harvested_energy_bound(
    params: SystemParams,
    h: ComplexArray,
    f: ComplexArray,
    pr: float,
    v_r: ComplexArray,
) -> float:
    """Return the per-block harvested energy bound in joules.

    ``(T/2) eta P_s |h|^2 (1 + sqrt(P_r / A) |f^H v_r|)^2``; receiver noise
    is not harvested.
    """
    _require_unit(v_r)
    budget = link_budget(params, h)
    loop = math.sqrt(pr / budget.a_power) * abs(np.vdot(f, v_r))
    return 0.5 * params.t_block * budget.harvest_scale * (1.0 + loop) ** 2


def feasible_max_power(
    params: SystemParams,
    h: ComplexArray,
    f: ComplexArray,
    v_r: ComplexArray,
) -> FeasiblePower:
    """Return the largest relay power meeting energy causality.

    Solving ``sqrt(P_r) <= sqrt(a) (1 + sqrt(P_r) c)`` with
    ``c = |f^H v_r| / sqrt(A)`` gives ``a / (1 - sqrt(a) c)^2`` while
    ``sqrt(a) c < 1``; otherwise every power is feasible.
    """
    _require_unit(v_r)
    budget = link_budget(params, h)
    loop = math.sqrt(budget.harvest_scale / budget.a_power) * abs(
        np.vdot(f, v_r)
    )
    if loop >= 1.0:
        return Unbounded()
    return Bounded(pr_max=budget.harvest_scale / (1.0 - loop) ** 2)


def tight_power_profile(
    params: SystemParams,
    h: ComplexArray,
    f: ComplexArray,
    beamformers: npt.NDArray[np.complex128],
) -> npt.NDArray[np.float64]:
    """Vectorized :func:`feasible_max_power` over rows of ``beamformers``.

    Rows are assumed unit-norm. Unbounded rows hold ``+inf``.
    """
    budget = link_budget(params, h)
    loop = math.sqrt(budget.harvest_scale / budget.a_power) * np.abs(
        beamformers @ np.conj(f)
    )
    power = np.full(loop.shape, np.inf)
    bounded = loop < 1.0
    power[bounded] = budget.harvest_scale / (1.0 - loop[bounded]) ** 2
    return power
