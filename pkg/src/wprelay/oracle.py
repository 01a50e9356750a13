"""Brute-force oracles for both relay optimizers.

``grid_search_p1`` enumerates unit beamformers
``v = cos(t) u1 + sin(t) e^{j phi} u2`` over an orthonormal basis
``{u1, u2}`` of ``span{g, f}`` (or of the whole plane for ``N = 2``),
pairs each with its tight relay power and prunes cells whose SNR upper
bound cannot beat the incumbent. ``scan_p2`` scans the time-switching
rate over ``(0, 1)``. Both report a gap bound instead of assuming grid
optimality.
"""

from __future__ import annotations

import logging
import math

from typing import Optional

import numpy as np
import numpy.typing as npt

from wprelay.link_model import link_budget, tight_power_profile
from wprelay.optimizers.time_switching import tsr_rate
from wprelay.schema.system import ChannelSet, SystemParams
from wprelay.schema.types import ComplexArray
from wprelay.schema.verification import GridSpec, OracleResult

logger = logging.getLogger(__name__)

SPAN_RANK_TOL = 1e-12
REFINE_HALF_WIDTH = 10
MIN_SCAN_POINTS = 100


class OracleError(RuntimeError):
    """Base class for oracle errors."""

    ...


class OracleUnboundedError(OracleError):
    """A grid beamformer admits unbounded relay power."""

    ...


def span_basis(
    g: ComplexArray, f: ComplexArray, full_sphere: bool = False
) -> tuple[ComplexArray, Optional[ComplexArray]]:
    """Return an orthonormal basis of the search plane.

    ``u1 = g / |g|`` and ``u2`` is the part of ``f`` orthogonal to ``g``,
    or ``None`` when ``span{g, f}`` is one-dimensional. With
    ``full_sphere`` the standard basis of ``C^2`` is returned instead.
    """
    n = g.size
    if full_sphere:
        if n != 2:
            raise OracleError(f'full-sphere search needs N = 2, got {n}')
        eye = np.eye(2, dtype=np.complex128)
        return eye[0], eye[1]
    g_norm = float(np.linalg.norm(g))
    if g_norm == 0.0:
        raise OracleError('g must be nonzero')
    u1 = np.asarray(g, dtype=np.complex128) / g_norm
    residual = f - np.vdot(u1, f) * u1
    r_norm = float(np.linalg.norm(residual))
    if r_norm <= SPAN_RANK_TOL * max(float(np.linalg.norm(f)), 1e-300):
        return u1, None
    return u1, residual / r_norm


class _P1Objective:
    """Second-hop SNR at the tight power over ``(t, phi)`` cells."""

    def __init__(
        self,
        params: SystemParams,
        ch: ChannelSet,
        u1: ComplexArray,
        u2: Optional[ComplexArray],
    ) -> None:
        self.params = params
        self.ch = ch
        self.u1 = u1
        self.u2 = np.zeros_like(u1) if u2 is None else u2
        self.evaluations = 0
        budget = link_budget(params, ch.h)
        self._scale = budget.harvest_scale
        self._loop_gain = math.sqrt(budget.harvest_scale / budget.a_power)
        self._f_norm = float(np.linalg.norm(ch.f))
        self._g_norm = float(np.linalg.norm(ch.g))

    def beamformers(
        self, t: npt.NDArray[np.float64], phi: npt.NDArray[np.float64]
    ) -> npt.NDArray[np.complex128]:
        return (
            np.cos(t)[:, None] * self.u1
            + (np.sin(t) * np.exp(1j * phi))[:, None] * self.u2
        )

    def __call__(
        self, rows: npt.NDArray[np.complex128]
    ) -> npt.NDArray[np.float64]:
        power = tight_power_profile(self.params, self.ch.h, self.ch.f, rows)
        self.evaluations += power.size
        if np.isinf(power).any():
            raise OracleUnboundedError(
                'a grid beamformer admits unbounded relay power; the '
                'instance is outside the bounded regime'
            )
        gain = np.abs(rows @ np.conj(self.ch.g)) ** 2
        return power * gain / self.params.sigma_d2

    def upper_bounds(
        self,
        rows: npt.NDArray[np.complex128],
        radius: npt.NDArray[np.float64],
    ) -> npt.NDArray[np.float64]:
        """Bound the SNR over every beamformer within ``radius`` of a row."""
        loop = self._loop_gain * (
            np.abs(rows @ np.conj(self.ch.f)) + self._f_norm * radius
        )
        reach = np.abs(rows @ np.conj(self.ch.g)) + self._g_norm * radius
        bound = np.full(loop.shape, np.inf)
        bounded = loop < 1.0
        bound[bounded] = (
            self._scale
            / (1.0 - loop[bounded]) ** 2
            * reach[bounded] ** 2
            / self.params.sigma_d2
        )
        return bound


class _CellSet:
    """Cells ``[t +- ht] x [phi +- hphi]`` of the search rectangle.

    Every beamformer in a cell lies within ``ht + sin(t) hphi`` of the
    beamformer at its center.
    """

    def __init__(
        self,
        t: npt.NDArray[np.float64],
        phi: npt.NDArray[np.float64],
        ht: float,
        hphi: npt.NDArray[np.float64],
    ) -> None:
        self.t = t
        self.phi = phi
        self.ht = ht
        self.hphi = hphi

    @classmethod
    def coarse(cls, dt: float, dphi: float) -> _CellSet:
        n_t = math.ceil(0.5 * np.pi / dt)
        n_phi = math.ceil(2.0 * np.pi / dphi)
        ht = 0.25 * np.pi / n_t
        hphi = np.pi / n_phi
        t, phi = np.meshgrid(
            (2 * np.arange(n_t) + 1) * ht,
            (2 * np.arange(n_phi) + 1) * hphi,
            indexing='ij',
        )
        return cls(t.ravel(), phi.ravel(), ht, np.full(t.size, hphi))

    @property
    def radius(self) -> npt.NDArray[np.float64]:
        return self.ht + np.sin(self.t) * self.hphi

    def subset(self, keep: npt.NDArray[np.bool_]) -> _CellSet:
        return _CellSet(self.t[keep], self.phi[keep], self.ht, self.hphi[keep])

    def split(self, ht_final: float, hphi_final: float) -> Optional[_CellSet]:
        """Bisect the cells, or return ``None`` once none needs it.

        The phase is only bisected where its share of the radius is at
        least half the ``t`` share.
        """
        split_t = self.ht > ht_final
        split_phi = (self.hphi > hphi_final) & (
            np.sin(self.t) * self.hphi >= 0.5 * self.ht
        )
        if not self.t.size or (not split_t and not split_phi.any()):
            return None
        t, phi, hphi, ht = self.t, self.phi, self.hphi, self.ht
        if split_t:
            ht = 0.5 * ht
            t = np.concatenate([t - ht, t + ht])
            phi = np.tile(phi, 2)
            hphi = np.tile(hphi, 2)
            split_phi = np.tile(split_phi, 2)
        half = 0.5 * hphi[split_phi]
        return _CellSet(
            np.concatenate([t[~split_phi], t[split_phi], t[split_phi]]),
            np.concatenate(
                [phi[~split_phi], phi[split_phi] - half, phi[split_phi] + half]
            ),
            ht,
            np.concatenate([hphi[~split_phi], half, half]),
        )


def grid_search_p1(
    params: SystemParams,
    ch: ChannelSet,
    spec: Optional[GridSpec] = None,
    full_sphere: bool = False,
) -> OracleResult:
    """Maximize the second-hop SNR by branch and bound over beamformer cells.

    The coarse grid spacing is the final resolution times
    ``10**refine_rounds``. Each cell carries an upper bound on the SNR of
    every beamformer inside it; cells whose bound does not exceed the
    incumbent are discarded and the rest are bisected until the spacing
    reaches the requested resolution. The gap bound is the largest upper
    bound among the surviving cells minus the incumbent, so it covers the
    whole search set.

    Raises
    ------
    OracleUnboundedError
        If any evaluated beamformer admits unbounded relay power.
    """
    if ch.is_degenerate:
        raise OracleError('h and g must be nonzero')
    spec = spec or GridSpec()
    u1, u2 = span_basis(ch.g, ch.f, full_sphere=full_sphere)
    objective = _P1Objective(params, ch, u1, u2)

    if u2 is None:
        best = float(objective(u1[None, :])[0])
        return OracleResult(
            best_value=best,
            best_beamformer=u1,
            certified_gap_bound=0.0,
            evaluations=objective.evaluations,
        )

    scale = 10.0**spec.refine_rounds
    cells: Optional[_CellSet] = _CellSet.coarse(
        spec.angular_resolution * scale, spec.phase_resolution * scale
    )
    ht_final = 0.5 * spec.angular_resolution
    hphi_final = 0.5 * spec.phase_resolution
    best = -math.inf
    v0 = u1
    upper = np.zeros(0)
    while cells is not None:
        rows = objective.beamformers(cells.t, cells.phi)
        values = objective(rows)
        k = int(np.argmax(values))
        if values[k] > best:
            best, v0 = float(values[k]), rows[k]
        upper = objective.upper_bounds(rows, cells.radius)
        keep = upper > best
        upper = upper[keep]
        cells = cells.subset(keep).split(ht_final, hphi_final)

    gap = max(0.0, float(upper.max()) - best) if upper.size else 0.0
    logger.debug(
        'grid search: best=%.9g gap<=%.3g after %d evaluations',
        best,
        gap,
        objective.evaluations,
    )
    return OracleResult(
        best_value=best,
        best_beamformer=v0,
        certified_gap_bound=gap,
        evaluations=objective.evaluations,
    )


def _concave_gap(
    alphas: npt.NDArray[np.float64], values: npt.NDArray[np.float64], k: int
) -> float:
    # secants through the incumbent over-estimate a concave function beyond it
    slopes = [0.0]
    if k > 0:
        slopes.append(
            (values[k] - values[k - 1]) / (alphas[k] - alphas[k - 1])
        )
    if k < alphas.size - 1:
        slopes.append(
            -(values[k + 1] - values[k]) / (alphas[k + 1] - alphas[k])
        )
    spacing = float(np.max(np.diff(alphas))) if alphas.size > 1 else 0.0
    return spacing * max(slopes)


def scan_p2(gamma1: float, c: float, num_points: int) -> OracleResult:
    """Scan the time-switching rate on ``alpha_i = i / (n + 1)``.

    One refinement round of the same density covers the two grid cells
    around the incumbent.
    """
    if num_points < MIN_SCAN_POINTS:
        raise OracleError(
            f'num_points must be at least {MIN_SCAN_POINTS}, got {num_points}'
        )
    step = 1.0 / (num_points + 1)
    alphas = np.arange(1, num_points + 1) * step
    values = tsr_rate(alphas, gamma1, c)
    k = int(np.argmax(values))

    fine = alphas[k] + step * np.linspace(-1.0, 1.0, 2 * REFINE_HALF_WIDTH + 1)
    fine = fine[(fine > 0.0) & (fine < 1.0)]
    fine_values = tsr_rate(fine, gamma1, c)
    j = int(np.argmax(fine_values))
    return OracleResult(
        best_value=float(fine_values[j]),
        best_alpha=float(fine[j]),
        certified_gap_bound=_concave_gap(fine, fine_values, j),
        evaluations=int(alphas.size + fine.size),
    )
