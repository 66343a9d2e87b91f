"""Exact solution of the abelian (single phase) loop through its dynamical invariant.

Phases follow the return-amplitude convention: for an initial recurrent state
the total phase is the unwrapped argument of <psi0(0)|Psi(T)>, which equals
-E0 * T.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import models
from .config import TOL
from .errors import DegenerateMiddleRoot, NonCyclic
from .models import R_G3, LoopParams
from .numerics import MonicRealCubic, fix_phase, solve_monic_real_cubic, unitary_exp

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InvariantSpectrum:
    x_minus: float
    x0: float
    x_plus: float
    omega: float = 1.0

    @property
    def roots(self) -> tuple[float, float, float]:
        return (self.x_minus, self.x0, self.x_plus)

    @property
    def energies(self) -> tuple[float, float, float]:
        return tuple(self.omega * x for x in self.roots)


@dataclass(frozen=True)
class AdiabaticLimit:
    """Extrapolated g -> 0 limit of the total phase with two candidate references.

    The references are written in the return-amplitude sign convention, so
    ``ref_two_pi = -2 pi sin^2(theta)`` and ``ref_four_pi = -4 pi sin^2(theta)``.
    """

    theta: float
    value: float
    ref_two_pi: float
    ref_four_pi: float

    @property
    def deviation_two_pi(self) -> float:
        return abs(self.value - self.ref_two_pi)

    @property
    def deviation_four_pi(self) -> float:
        return abs(self.value - self.ref_four_pi)


@dataclass(frozen=True)
class AbelianCycleResult:
    eta: float
    phi_total: float
    phi_adiabatic_ref: float
    spectrum: InvariantSpectrum


def characteristic_cubic(theta: float, g: float) -> MonicRealCubic:
    return MonicRealCubic(-g, -1.0, g * math.sin(theta) ** 2)


def characteristic_roots(p: LoopParams) -> InvariantSpectrum:
    """Roots of x^3 - g x^2 - x + g sin^2(theta) = 0 with g = gamma/omega."""
    g = p.g
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"gamma/omega = {g} outside [0, 1]")
    lo, mid, hi = solve_monic_real_cubic(characteristic_cubic(p.theta, g))
    if min(mid - lo, hi - mid) < TOL.degenerate_root:
        raise DegenerateMiddleRoot(
            f"middle root {mid!r} within {TOL.degenerate_root} of a neighbour "
            f"(theta={p.theta}, g={g})"
        )
    # the cubic is >= 0 at x = 0 and <= 0 at x = g, so the middle root sits in [0, g]
    slack = 1e-12
    if not -slack <= mid <= g + slack:
        raise ArithmeticError(f"middle root {mid} escaped its bracket [0, {g}]")
    return InvariantSpectrum(lo, mid, hi, p.omega)


def _null_vector_3(m: np.ndarray) -> np.ndarray:
    """Unit null vector of a rank-2 real symmetric 3x3 matrix via row cross products."""
    rows = (m[0], m[1], m[2])
    candidates = [np.cross(rows[i], rows[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    best = max(candidates, key=lambda v: float(np.dot(v, v)))
    return best / np.linalg.norm(best)


def invariant_eigenvector(p: LoopParams, spectrum: InvariantSpectrum | None = None) -> np.ndarray:
    """Eigenvector of I(0) for the middle root, built from the root itself."""
    spectrum = spectrum or characteristic_roots(p)
    s, c = math.sin(p.theta), math.cos(p.theta)
    x = spectrum.x0
    shifted = np.array([[-x, 0.0, s], [0.0, p.g - x, c], [s, c, -x]])
    return fix_phase(_null_vector_3(shifted).astype(complex))


def recurrent_basis(p: LoopParams, t: float) -> np.ndarray:
    """|psi0(t)> = exp(i gamma t sigma_33) |phi0>; exactly periodic in T."""
    return models.crank_abelian(p.gamma, t) @ invariant_eigenvector(p)


def closed_form_propagator(p: LoopParams, t: float) -> np.ndarray:
    """U(t) = exp(i gamma t sigma_33) exp(-i (H0 + gamma sigma_33) t) on (g2, g3, e)."""
    if t == 0:
        return np.eye(3, dtype=complex)
    rotating = models.h0_abelian(p)
    rotating[R_G3, R_G3] += p.gamma
    return models.crank_abelian(p.gamma, t) @ unitary_exp(rotating, t)


def leakage_overlap(p: LoopParams) -> float:
    """eta = |<psi0(0)|D(0)>|^2."""
    phi0 = invariant_eigenvector(p)
    dark = models.dark_state_abelian(p.theta, 0.0)
    return float(min(1.0, abs(np.vdot(phi0, dark)) ** 2))


def total_phase(p: LoopParams) -> float:
    """Unwrapped cyclic phase -E0 * 2 pi / gamma of the recurrent state."""
    if p.gamma <= 0:
        raise NonCyclic("total phase needs gamma > 0")
    spectrum = characteristic_roots(p)
    return -TWO_PI * spectrum.x0 / p.g


def _phase_over_ratio(theta: float, g: float) -> float:
    return total_phase(LoopParams(1.0, theta, g))


def adiabatic_phase_limit(theta: float, g_start: float = 1e-2) -> AdiabaticLimit:
    """Richardson extrapolation of the total phase to g -> 0.

    The phase is even in g to leading order, so two levels in h^2 are used
    over g in {g_start, g_start/2, g_start/4}.
    """
    if not 0.0 <= theta <= math.pi + 1e-12:
        raise ValueError(f"theta={theta} outside [0, pi]")
    f = [_phase_over_ratio(theta, g_start / 2**k) for k in range(3)]
    r1 = [(4.0 * f[k + 1] - f[k]) / 3.0 for k in range(2)]
    value = (16.0 * r1[1] - r1[0]) / 15.0
    s2 = math.sin(theta) ** 2
    return AdiabaticLimit(theta, value, -TWO_PI * s2, -2.0 * TWO_PI * s2)


def cycle_result(p: LoopParams) -> AbelianCycleResult:
    spectrum = characteristic_roots(p)
    return AbelianCycleResult(
        eta=leakage_overlap(p),
        phi_total=total_phase(p),
        phi_adiabatic_ref=adiabatic_phase_limit(p.theta).value,
        spectrum=spectrum,
    )


@dataclass(frozen=True)
class Fig1Row:
    theta: float
    gamma_ratio: float
    eta: float
    phi_total: float
    phi_adiabatic_ref: float
    flag: str = ""


def fig1_row(theta: float, g: float) -> Fig1Row:
    ref = adiabatic_phase_limit(theta).value
    p = LoopParams(1.0, theta, g)
    try:
        eta = leakage_overlap(p)
        phi = total_phase(p) if g > 0 else ref
    except DegenerateMiddleRoot:
        return Fig1Row(theta, g, math.nan, math.nan, ref, "degenerate")
    return Fig1Row(theta, g, eta, phi, ref)


def sweep_fig1(theta_grid, g_grid, workers: int = 1) -> list[Fig1Row]:
    """Evaluate (eta, Phi) on the product grid, rows ordered by (theta, g) index."""
    points = [(float(th), float(g)) for th in theta_grid for g in g_grid]
    if workers <= 1:
        return [fig1_row(th, g) for th, g in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(fig1_row, *zip(*points), chunksize=max(1, len(points) // (4 * workers)))
        )
