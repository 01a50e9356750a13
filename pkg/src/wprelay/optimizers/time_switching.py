"""Optimal time split of the time-switching relaying benchmark.

A block of duration ``T`` is split into an energy phase ``alpha T`` and
two information phases of ``(1 - alpha) T / 2``. The relay spends all
harvested energy in the forwarding phase through ``v_r = g / |g|``, so
the rate is

    R(alpha) = (1 - alpha)/2 log2(1 + gamma1 alpha / (alpha + C (1 - alpha)))

with ``C = (1 + gamma1) sigma_d^2 / (2 eta P_s |h|^2 |g|^2)``. ``R`` is
concave on ``(0, 1)``; its maximizer is obtained from the unique root
``z*`` of a monotone auxiliary function on ``(1, 1 + gamma1)``.
"""

from __future__ import annotations

import logging
import math

from typing import Union

import numpy as np
import numpy.typing as npt

from wprelay.link_model import first_hop_snr, link_budget, throughput
from wprelay.schema.solutions import TsrSolution
from wprelay.schema.system import SystemParams
from wprelay.schema.types import ComplexArray

logger = logging.getLogger(__name__)

MAX_BISECTION_STEPS = 200
DEFAULT_TOL = 1e-12

ArrayOrFloat = Union[float, npt.NDArray[np.float64]]


class TimeSwitchingError(ValueError):
    """Base class for time-switching optimizer errors."""

    ...


class BracketError(TimeSwitchingError):
    """The auxiliary function does not change sign over its interval."""

    ...


class DegenerateChannelError(TimeSwitchingError):
    """A channel or the source power is zero, so ``C`` is undefined."""

    ...


def tsr_constant(
    params: SystemParams, h: ComplexArray, g: ComplexArray
) -> float:
    """Return ``C = (1 + gamma1) sigma_d^2 / (2 eta P_s |h|^2 |g|^2)``.

    Raises
    ------
    DegenerateChannelError
        If ``h`` or ``g`` is zero or the source is silent.
    """
    harvest = link_budget(params, h).harvest_scale
    g_gain = float(np.vdot(g, g).real)
    if harvest == 0.0:
        raise DegenerateChannelError('eta P_s |h|^2 is zero')
    if g_gain == 0.0:
        raise DegenerateChannelError('destination channel g is zero')
    gamma1 = first_hop_snr(params, h)
    return (1.0 + gamma1) * params.sigma_d2 / (2.0 * harvest * g_gain)


def _f_shifted(
    w: Union[float, np.longdouble], gamma1: float, c: float
) -> np.longdouble:
    # f(1 + w) regrouped around z = 1 so that f(1) = -gamma1^2 exactly
    w_ = np.longdouble(w)
    g_ = np.longdouble(gamma1)
    c_ = np.longdouble(c)
    return (
        g_ * c_ * (1 + w_) * np.log1p(w_)
        + g_ * (2 - c_) * w_
        + (c_ - 1) * w_ * w_
        - g_ * g_
    )


def f_z(z: float, gamma1: float, c: float) -> float:
    """Evaluate the root function of the optimal time split.

    ``f(z) = gamma1 C z ln z + (C - 1) z^2 - z (gamma1 C + 2C - 2 gamma1 - 2)
    - (gamma1 + 1)(gamma1 + 1 - C)``, computed in extended precision after
    substituting ``z = 1 + w``.
    """
    if z <= 0:
        raise TimeSwitchingError(f'f(z) needs z > 0, got {z}')
    w = np.longdouble(z) - 1
    return float(_f_shifted(w, gamma1, c))


def _check_inputs(gamma1: float, c: float, tol: float) -> None:
    if gamma1 <= 0 or c <= 0 or tol <= 0:
        raise TimeSwitchingError(
            f'gamma1, C and tol must be positive, got {gamma1}, {c}, {tol}'
        )


def _bracket_shift(
    gamma1: float, c: float, tol: float
) -> tuple[float, float]:
    """Bisect ``f(1 + w)`` over ``w in (0, gamma1)``."""
    lo, hi = 0.0, gamma1
    if not (_f_shifted(lo, gamma1, c) < 0 < _f_shifted(hi, gamma1, c)):
        raise BracketError(
            f'f(z) has no sign change on (1, 1 + gamma1) for '
            f'gamma1={gamma1}, C={c}'
        )
    for _ in range(MAX_BISECTION_STEPS):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _f_shifted(mid, gamma1, c) < 0:
            lo = mid
        else:
            hi = mid
    else:
        logger.warning(
            'bisection stopped after %d steps with width %.3e.',
            MAX_BISECTION_STEPS,
            hi - lo,
        )
    return lo, hi


def bracket_z_star(
    gamma1: float, c: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """Return the final bisection bracket ``(z_lo, z_hi)`` around ``z*``."""
    _check_inputs(gamma1, c, tol)
    lo, hi = _bracket_shift(gamma1, c, tol)
    return 1.0 + lo, 1.0 + hi


def solve_z_star(gamma1: float, c: float, tol: float = DEFAULT_TOL) -> float:
    """Return the unique root of :func:`f_z` in ``(1, 1 + gamma1)``.

    Raises
    ------
    BracketError
        If the endpoint signs are not ``f(1) < 0 < f(1 + gamma1)``.
    """
    _check_inputs(gamma1, c, tol)
    lo, hi = _bracket_shift(gamma1, c, tol)
    return 1.0 + 0.5 * (lo + hi)


def _alpha_from_shift(w: float, gamma1: float, c: float) -> float:
    return w * c / (w * c + gamma1 - w)


def alpha_from_z(z: float, gamma1: float, c: float) -> float:
    """Map ``z`` to ``alpha = (z-1) C / ((z-1) C + 1 + gamma1 - z)``."""
    return _alpha_from_shift(z - 1.0, gamma1, c)


def z_from_alpha(alpha: float, gamma1: float, c: float) -> float:
    """Inverse change of variables ``z = 1 + gamma_d(alpha)``."""
    return 1.0 + float(tsr_snr(alpha, gamma1, c))


def tsr_snr(alpha: ArrayOrFloat, gamma1: float, c: float) -> ArrayOrFloat:
    """Destination SNR ``gamma1 alpha / (alpha + C (1 - alpha))``."""
    return gamma1 * alpha / (alpha + c * (1.0 - alpha))


def tsr_rate(alpha: ArrayOrFloat, gamma1: float, c: float) -> ArrayOrFloat:
    """Throughput in bps/Hz for time split ``alpha`` in ``[0, 1]``.

    Accepts scalars or arrays.
    """
    snr = tsr_snr(alpha, gamma1, c)
    return 0.5 * (1.0 - alpha) * np.log1p(snr) / math.log(2.0)


def stationarity_residual(alpha: float, gamma1: float, c: float) -> float:
    """Residual of the first-order optimality condition at ``alpha``.

    ``gamma1 C (1-alpha) / ((D + gamma1 alpha) D) - ln(1 + gamma1 alpha / D)``
    with ``D = alpha + C (1 - alpha)``; zero at the optimum.
    """
    d = alpha + c * (1.0 - alpha)
    e = d + gamma1 * alpha
    return gamma1 * c * (1.0 - alpha) / (e * d) - math.log1p(
        gamma1 * alpha / d
    )


def tsr_rate_curvature(alpha: float, gamma1: float, c: float) -> float:
    """Analytic second derivative of :func:`tsr_rate`; negative on (0, 1)."""
    d = alpha + c * (1.0 - alpha)
    e = d + gamma1 * alpha
    numerator = gamma1 * c * (
        c * (1.0 - alpha) * (gamma1 + 2.0) + 2.0 * alpha * (1.0 + gamma1)
    )
    return -numerator / (2.0 * math.log(2.0) * (e * d) ** 2)


def solve_tsr(
    params: SystemParams,
    h: ComplexArray,
    g: ComplexArray,
    tol: float = DEFAULT_TOL,
) -> TsrSolution:
    """Solve for the rate-optimal time split.

    Returns
    -------
    TsrSolution
        ``alpha*``, ``z*``, ``C``, the relay power
        ``2 alpha* eta P_s |h|^2 / (1 - alpha*)`` and the optimal rate.
    """
    c = tsr_constant(params, h, g)
    gamma1 = first_hop_snr(params, h)
    _check_inputs(gamma1, c, tol)
    lo, hi = _bracket_shift(gamma1, c, tol)
    w_star = 0.5 * (lo + hi)
    alpha = _alpha_from_shift(w_star, gamma1, c)
    harvest = link_budget(params, h).harvest_scale
    gamma_d = float(tsr_snr(alpha, gamma1, c))
    solution = TsrSolution(
        alpha_star=alpha,
        z_star=1.0 + w_star,
        c_const=c,
        gamma1=gamma1,
        pr=2.0 * alpha * harvest / (1.0 - alpha),
        gamma_d=gamma_d,
        rate=(1.0 - alpha) * throughput(gamma_d),
    )
    logger.debug(
        'tsr: C=%.6g z*=%.12g alpha*=%.9g R=%.6g',
        c,
        solution.z_star,
        alpha,
        solution.rate,
    )
    return solution
