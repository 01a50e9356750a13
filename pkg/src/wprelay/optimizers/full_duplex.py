"""Joint relay power and beamforming for the full-duplex protocol.

The relay forwards with power ``P_r`` and unit beamformer ``v_r`` while
it harvests ``eta P_s |h|^2`` from the source plus part of its own
transmission through the loop channel ``f``. Energy causality reads::

    P_r <= a (1 + sqrt(P_r / A) |f^H v_r|)^2,   a = eta P_s |h|^2

and the second-hop SNR ``P_r |g^H v_r|^2 / sigma_d^2`` is maximized over
that set. Two independent constructions are provided:

* :func:`solve_closed_form` evaluates the optimal mixing of ``g`` and
  ``f`` directly (production path, no matrix algebra);
* :func:`solve_matrix_path` rewrites the constraint as the ellipsoid
  ``|F^{1/2} v - b|^2 <= beta`` with ``F = I - a f_hat f_hat^H`` and
  maximizes over it (verification path).

Both return a :data:`SolveOutcome`; an energy loop that can sustain any
power is reported as :class:`UnboundedPower`, never clamped.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from wprelay.channels import effective_angle_cos
from wprelay.link_model import (
    end_to_end_snr,
    energy_waveform_phase,
    first_hop_snr,
    harvested_energy_bound,
    link_budget,
    mrt_vector,
    second_hop_snr,
    throughput,
)
from wprelay.schema.solutions import (
    DegenerateChannel,
    FdSolution,
    MatrixIntermediates,
    OptimumCoefficients,
    SisoSolution,
    Solved,
    SolveOutcome,
    UnboundedPower,
)
from wprelay.schema.system import ChannelSet, SystemParams
from wprelay.schema.types import ComplexArray

logger = logging.getLogger(__name__)

NEAR_SINGULAR_EPS = 1e-12
# below this 1 - cos(theta), g and f are treated as collinear
COLLINEAR_TOL = 1e-12


def loop_margin(
    params: SystemParams, h: ComplexArray, f: ComplexArray
) -> float:
    """Return ``1 + 1/gamma1 - eta |f|^2``; positive iff bounded.

    A silent source (``gamma1 = 0``) has an infinite margin.
    """
    gamma1 = first_hop_snr(params, h)
    if gamma1 == 0.0:
        return math.inf
    return 1.0 + 1.0 / gamma1 - params.eta * float(np.vdot(f, f).real)


def _loop_load(
    params: SystemParams, h: ComplexArray, f: ComplexArray
) -> float:
    # a |f_hat|^2 = eta |f|^2 / (1 + 1/gamma1)
    budget = link_budget(params, h)
    return budget.harvest_scale * float(np.vdot(f, f).real) / budget.a_power


def _degenerate(ch: ChannelSet) -> DegenerateChannel | None:
    if np.linalg.norm(ch.h) == 0.0:
        return DegenerateChannel(diagnostic='source channel h is zero')
    if np.linalg.norm(ch.g) == 0.0:
        return DegenerateChannel(diagnostic='destination channel g is zero')
    return None


def _unbounded(margin: float) -> UnboundedPower:
    diagnostic = (
        f'1 + 1/gamma1 - eta|f|^2 = {margin:.6g} <= 0: the energy loop is '
        'non-contractive and the relay power has no finite optimum'
    )
    logger.warning(diagnostic)
    return UnboundedPower(diagnostic=diagnostic)


def _is_near_singular(margin: float) -> bool:
    if margin < NEAR_SINGULAR_EPS:
        logger.warning(
            'loop margin %.3e is below %.0e; the optimum is near-singular.',
            margin,
            NEAR_SINGULAR_EPS,
        )
        return True
    return False


def _align_phase(
    v_r: ComplexArray, f: ComplexArray, g: ComplexArray
) -> ComplexArray:
    # rotate so f^H v_r (or g^H v_r without a loop) is real non-negative
    reference = np.vdot(f, v_r)
    if np.linalg.norm(f) == 0.0 or reference == 0:
        reference = np.vdot(g, v_r)
    if reference == 0:
        return v_r
    return v_r * np.exp(-1j * np.angle(reference))


def optimum_coefficients(
    params: SystemParams, ch: ChannelSet
) -> OptimumCoefficients:
    """Return the weights of ``v* = alpha1 e^{j angle(g^H f)} g + alpha2 f``.

    With ``k = 1 + 1/gamma1``::

        alpha1 = |h| sqrt(k eta P_s)
                 / (|g| sqrt(k - eta |f|^2 sin^2 theta))
        alpha2 = eta |h| sqrt(k P_s) / (k - eta |f|^2)
                 * (1 + sqrt(eta) |f| cos theta
                    / sqrt(k - eta |f|^2 sin^2 theta))

    evaluated after dividing through by ``k``, which keeps them finite
    for a silent source. Only valid in the bounded regime.
    """
    budget = link_budget(params, ch.h)
    a = budget.harvest_scale
    load = _loop_load(params, ch.h, ch.f)
    cos_theta = effective_angle_cos(ch.f, ch.g)
    sin2 = max(0.0, 1.0 - cos_theta**2)
    root = math.sqrt(1.0 - load * sin2)
    alpha1 = math.sqrt(a) / (float(np.linalg.norm(ch.g)) * root)
    alpha2 = (
        a
        / (math.sqrt(budget.a_power) * (1.0 - load))
        * (1.0 + math.sqrt(load) * cos_theta / root)
    )
    return OptimumCoefficients(
        alpha1=alpha1,
        alpha2=alpha2,
        cos_theta=cos_theta,
        phase_gf=float(np.angle(np.vdot(ch.g, ch.f))),
    )


def optimal_gamma2(params: SystemParams, ch: ChannelSet) -> float:
    """Evaluate the optimal second-hop SNR in closed form.

    ``k eta P_s |h|^2 |g|^2 / (sigma_d^2 (k - eta|f|^2)^2)
    * (sqrt(eta)|f| cos theta + sqrt(k - eta|f|^2 sin^2 theta))^2``,
    or ``inf`` outside the bounded regime.
    """
    if loop_margin(params, ch.h, ch.f) <= 0.0:
        return math.inf
    load = _loop_load(params, ch.h, ch.f)
    a = link_budget(params, ch.h).harvest_scale
    cos_theta = effective_angle_cos(ch.f, ch.g)
    sin2 = max(0.0, 1.0 - cos_theta**2)
    g_gain = float(np.vdot(ch.g, ch.g).real)
    mix = math.sqrt(load) * cos_theta + math.sqrt(1.0 - load * sin2)
    return a * g_gain * mix**2 / (params.sigma_d2 * (1.0 - load) ** 2)


def _assemble(
    params: SystemParams,
    ch: ChannelSet,
    v_unscaled: ComplexArray,
    *,
    alpha1: float,
    alpha2: float,
    near_singular: bool,
    pr_star: float | None = None,
) -> FdSolution:
    norm = float(np.linalg.norm(v_unscaled))
    if pr_star is None:
        pr_star = norm**2
    v_r = mrt_vector(ch.g) if norm == 0.0 else v_unscaled / norm
    v_r = _align_phase(v_r, ch.f, ch.g)

    gamma1 = first_hop_snr(params, ch.h)
    gamma2 = second_hop_snr(pr_star, v_r, ch.g, params.sigma_d2)
    gamma_d = end_to_end_snr(gamma1, gamma2)
    solution = FdSolution(
        pr_star=pr_star,
        v_r_star=v_r,
        gamma1=gamma1,
        gamma2_star=gamma2,
        gamma_d=gamma_d,
        rate=throughput(gamma_d),
        alpha1=alpha1,
        alpha2=alpha2,
        cos_theta=effective_angle_cos(ch.f, ch.g),
        harvested_energy=harvested_energy_bound(
            params, ch.h, ch.f, pr_star, v_r
        ),
        energy_waveform_phase=energy_waveform_phase(ch.f, v_r),
        near_singular=near_singular,
    )
    logger.debug(
        'solved: P_r*=%.6g gamma2*=%.6g R*=%.6g',
        solution.pr_star,
        solution.gamma2_star,
        solution.rate,
    )
    return solution


def solve_closed_form(params: SystemParams, ch: ChannelSet) -> SolveOutcome:
    """Solve the full-duplex power/beamforming problem in closed form.

    Returns
    -------
    SolveOutcome
        ``Solved`` with ``P_r* = |v*|^2`` and ``v_r* = v*/|v*|``;
        ``UnboundedPower`` when ``1 + 1/gamma1 - eta|f|^2 <= 0``;
        ``DegenerateChannel`` when ``h`` or ``g`` is zero.
    """
    degenerate = _degenerate(ch)
    if degenerate is not None:
        return degenerate
    margin = loop_margin(params, ch.h, ch.f)
    if margin <= 0.0:
        return _unbounded(margin)
    near_singular = _is_near_singular(margin)

    if np.linalg.norm(ch.f) == 0.0:
        # no recycling: MRT towards g with the directly harvested power
        a = link_budget(params, ch.h).harvest_scale
        g_norm = float(np.linalg.norm(ch.g))
        return Solved(
            solution=_assemble(
                params,
                ch,
                math.sqrt(a) * ch.g / g_norm,
                alpha1=math.sqrt(a) / g_norm,
                alpha2=0.0,
                near_singular=near_singular,
                pr_star=a,
            )
        )

    coeffs = optimum_coefficients(params, ch)
    v_star = (
        coeffs.alpha1 * np.exp(1j * coeffs.phase_gf) * ch.g
        + coeffs.alpha2 * ch.f
    )
    return Solved(
        solution=_assemble(
            params,
            ch,
            v_star,
            alpha1=coeffs.alpha1,
            alpha2=coeffs.alpha2,
            near_singular=near_singular,
        )
    )


def matrix_intermediates(
    params: SystemParams, ch: ChannelSet
) -> MatrixIntermediates:
    """Build ``F``, ``b``, ``beta``, ``psi`` and the unnormalized optimum.

    ``F^p = I + ((1 - a|f_hat|^2)^p - 1) f_hat f_hat^H / |f_hat|^2`` for the
    rank-one update, so no eigendecomposition is needed.

    Raises
    ------
    ValueError
        If ``F`` is not positive definite (loop margin ``<= 0``).
    """
    margin = loop_margin(params, ch.h, ch.f)
    if margin <= 0.0:
        raise ValueError(f'F is not positive definite: loop margin {margin}')
    budget = link_budget(params, ch.h)
    a = budget.harvest_scale
    f_hat = ch.f / math.sqrt(budget.a_power)
    norm2 = float(np.vdot(f_hat, f_hat).real)
    load = a * norm2

    outer = np.outer(f_hat, np.conj(f_hat))
    eye = np.eye(ch.num_relay_tx_antennas, dtype=np.complex128)
    if norm2 == 0.0:
        c_plus = c_minus = 0.0
    else:
        log_eig = math.log1p(-load)
        c_plus = math.expm1(0.5 * log_eig) / norm2
        c_minus = math.expm1(-0.5 * log_eig) / norm2
    f_matrix = eye - a * outer
    f_sqrt = eye + c_plus * outer
    f_inv_sqrt = eye + c_minus * outer
    f_inv = eye + (a / (1.0 - load)) * outer

    b_vec = a * (f_inv_sqrt @ f_hat)
    beta = a + float(np.vdot(b_vec, b_vec).real)
    whitened_g = f_inv_sqrt @ ch.g
    psi = float(np.angle(np.vdot(whitened_g, b_vec)))
    v_unscaled = a * (f_inv @ f_hat) + math.sqrt(beta) * (
        f_inv @ ch.g
    ) * np.exp(1j * psi) / float(np.linalg.norm(whitened_g))
    return MatrixIntermediates(
        f_hat=f_hat,
        loop_load=load,
        f_matrix=f_matrix,
        f_sqrt=f_sqrt,
        f_inv_sqrt=f_inv_sqrt,
        f_inv=f_inv,
        b_vec=b_vec,
        beta_scalar=beta,
        psi=psi,
        v_unscaled=v_unscaled,
    )


def _mixing_weights(
    ch: ChannelSet, v_star: ComplexArray
) -> tuple[float, float]:
    # express v* in the {e^{j angle(g^H f)} g, f} pair when it is a basis
    cos_theta = effective_angle_cos(ch.f, ch.g)
    if np.linalg.norm(ch.f) == 0.0 or cos_theta > 1.0 - COLLINEAR_TOL:
        return float(np.linalg.norm(v_star) / np.linalg.norm(ch.g)), 0.0
    rotated_g = np.exp(1j * np.angle(np.vdot(ch.g, ch.f))) * ch.g
    basis = np.column_stack([rotated_g, ch.f])
    weights, *_ = np.linalg.lstsq(basis, v_star, rcond=None)
    return float(weights[0].real), float(weights[1].real)


def solve_matrix_path(params: SystemParams, ch: ChannelSet) -> SolveOutcome:
    """Solve the same problem through the quadratic-form reformulation.

    Returns the same contract as :func:`solve_closed_form`.
    """
    degenerate = _degenerate(ch)
    if degenerate is not None:
        return degenerate
    margin = loop_margin(params, ch.h, ch.f)
    if margin <= 0.0:
        return _unbounded(margin)
    near_singular = _is_near_singular(margin)

    inter = matrix_intermediates(params, ch)
    alpha1, alpha2 = _mixing_weights(ch, inter.v_unscaled)
    return Solved(
        solution=_assemble(
            params,
            ch,
            inter.v_unscaled,
            alpha1=alpha1,
            alpha2=alpha2,
            near_singular=near_singular,
        )
    )


def siso_optimal_power(
    params: SystemParams, h: ComplexArray, f_scalar: complex
) -> SolveOutcome:
    """Optimal relay power with a single transmit antenna.

    ``P_r* = eta P_s |h|^2 / (1 - sqrt(eta)|f| / sqrt(1 + 1/gamma1))^2``,
    finite only while ``sqrt(eta)|f| < sqrt(1 + 1/gamma1)``.
    """
    if np.linalg.norm(h) == 0.0:
        return DegenerateChannel(diagnostic='source channel h is zero')
    budget = link_budget(params, h)
    ratio = math.sqrt(budget.harvest_scale / budget.a_power) * abs(f_scalar)
    if ratio >= 1.0:
        return _unbounded(loop_margin(params, h, np.array([f_scalar])))
    return Solved(
        solution=SisoSolution(
            pr_star=budget.harvest_scale / (1.0 - ratio) ** 2,
            loop_ratio=ratio,
            gamma1=budget.gamma1,
        )
    )
