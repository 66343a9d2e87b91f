"""Exact solution of the non-abelian loop through a (g1, g2) gauge rotation.

In the rotated frame the Hamiltonian is time independent, so the cyclic
operator over one period is U_g(T) exp(-i H_g T) with U_g(T) = 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import models
from .errors import NonCyclic
from .models import G1, G2, G3, LoopParams
from .numerics import hermitian_eigensystem, unitary_exp

SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class GaugedSystem:
    h_g: np.ndarray
    omega_bar: float
    cos_theta_bar: float
    eigenvalues: tuple[float, float, float, float]
    # columns ordered to match ``eigenvalues``
    eigenvectors: np.ndarray

    @property
    def theta_bar(self) -> float:
        return math.acos(self.cos_theta_bar)


@dataclass(frozen=True)
class DarkFrame:
    d1: np.ndarray
    d2: np.ndarray
    d_y: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        """4x2 matrix whose columns are |D1>, |D2>."""
        return np.column_stack([self.d1, self.d2])


@dataclass(frozen=True)
class GateReport:
    projected: np.ndarray
    ideal: np.ndarray
    leakage_by_state: dict[str, float]
    fidelity: float
    pop_d1: float
    pop_d2: float

    @property
    def eta(self) -> float:
        return self.leakage_by_state["D2"]


def gauge_rotation(gamma: float, t: float) -> np.ndarray:
    """U_g(t) = exp(-gamma t (s12 - s21)): rotation by gamma*t in the (g1, g2) plane."""
    c, s = math.cos(gamma * t), math.sin(gamma * t)
    u = np.eye(4, dtype=complex)
    u[G1, G1], u[G1, G2] = c, -s
    u[G2, G1], u[G2, G2] = s, c
    return u


def gauged_matrix(p: LoopParams) -> np.ndarray:
    h = models.h_nonabelian(p, 0.0)
    h[G1, G2] += 1j * p.gamma
    h[G2, G1] -= 1j * p.gamma
    return h


def eigenvalues_closed_form(p: LoopParams) -> tuple[float, float, float, float]:
    """(E1, E2, E3, E4) with E2 = -E1, E4 = -E3 and |E1| <= |E3|."""
    g2 = p.g**2
    omega_bar = p.omega * math.sqrt(1.0 + g2)
    cos_bar = math.cos(p.theta) / (1.0 + g2)
    eps = 4.0 * g2 * cos_bar**2
    root = math.sqrt(max(0.0, 1.0 - eps))
    # 1 - sqrt(1 - eps) written without cancellation
    small = eps / (1.0 + root)
    e1 = SQRT_HALF * omega_bar * math.sqrt(small)
    e3 = SQRT_HALF * omega_bar * math.sqrt(1.0 + root)
    return (e1, -e1, e3, -e3)


def gauged_hamiltonian(p: LoopParams) -> GaugedSystem:
    h_g = gauged_matrix(p)
    energies = eigenvalues_closed_form(p)
    _, vecs = hermitian_eigensystem(h_g)
    # numerical order is ascending: (E4, E2, E1, E3)
    ordered = vecs[:, [2, 1, 3, 0]]
    return GaugedSystem(
        h_g=h_g,
        omega_bar=p.omega * math.sqrt(1.0 + p.g**2),
        cos_theta_bar=math.cos(p.theta) / (1.0 + p.g**2),
        eigenvalues=energies,
        eigenvectors=ordered,
    )


def exact_propagator(p: LoopParams, t: float) -> np.ndarray:
    """U(t) = U_g(t) exp(-i H_g t)."""
    if t == 0:
        return np.eye(4, dtype=complex)
    return gauge_rotation(p.gamma, t) @ unitary_exp(gauged_matrix(p), t)


def cyclic_operator(p: LoopParams) -> np.ndarray:
    if p.gamma <= 0:
        raise NonCyclic("cyclic operator needs gamma > 0")
    # U_g(T) is the identity, so only the gauged exponential remains
    return unitary_exp(gauged_matrix(p), p.period)


def cyclic_operator_spectral(p: LoopParams) -> np.ndarray:
    """Cross-check form: sum_n exp(-i E_n T) |Psi_n(0)><Psi_n(0)|."""
    if p.gamma <= 0:
        raise NonCyclic("cyclic operator needs gamma > 0")
    system = gauged_hamiltonian(p)
    phases = np.exp(-1j * np.asarray(system.eigenvalues) * p.period)
    v = system.eigenvectors
    return (v * phases) @ v.conj().T


def dark_frame(theta: float) -> DarkFrame:
    d1, d2 = models.dark_states_nonabelian(theta)
    d_y = np.array([[0.0, -1j], [1j, 0.0]])
    return DarkFrame(d1, d2, d_y)


def holonomy_ideal(theta: float) -> np.ndarray:
    """u_C = exp(i 2 pi cos(theta) D_y) in the (D1, D2) basis."""
    a = 2.0 * math.pi * math.cos(theta)
    return math.cos(a) * np.eye(2, dtype=complex) + 1j * math.sin(a) * dark_frame(theta).d_y


def dark_dynamical_states(p: LoopParams, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Adiabatic dark solutions carrying their Berry phases exp(-/+ i gamma t cos theta).

    The second state uses the +i cos(gamma t) coefficient on |g2>, which is the
    one that stays in the null space of H(t) and reduces to (D1 + i D2)/sqrt 2.
    """
    s, c = math.sin(p.theta), math.cos(p.theta)
    gt = p.gamma * t
    cg, sg = math.cos(gt), math.sin(gt)
    psi1 = np.zeros(4, dtype=complex)
    psi2 = np.zeros(4, dtype=complex)
    psi1[[G1, G2, G3]] = (c * cg + 1j * sg, c * sg - 1j * cg, -s)
    psi2[[G1, G2, G3]] = (c * cg - 1j * sg, c * sg + 1j * cg, -s)
    psi1 *= SQRT_HALF * np.exp(-1j * gt * c)
    psi2 *= SQRT_HALF * np.exp(1j * gt * c)
    return psi1, psi2


def strip_berry_phases(p: LoopParams, t: float) -> tuple[np.ndarray, np.ndarray]:
    psi1, psi2 = dark_dynamical_states(p, t)
    c = math.cos(p.theta)
    return psi1 * np.exp(1j * p.gamma * t * c), psi2 * np.exp(-1j * p.gamma * t * c)


def restricted_holonomy(p: LoopParams) -> np.ndarray:
    """sum_n |Psi_n(T)><Psi_n(0)| projected on the (D1, D2) frame."""
    if p.gamma <= 0:
        raise NonCyclic("restricted holonomy needs gamma > 0")
    start = dark_dynamical_states(p, 0.0)
    end = dark_dynamical_states(p, p.period)
    u = sum(np.outer(b, a.conj()) for a, b in zip(start, end))
    frame = dark_frame(p.theta).basis
    return frame.conj().T @ u @ frame


def projected_gate(p: LoopParams) -> GateReport:
    """Cyclic operator restricted to the dark frame, with leakage and fidelity."""
    u_c = cyclic_operator(p)
    frame = dark_frame(p.theta).basis
    m = frame.conj().T @ u_c @ frame
    ideal = holonomy_ideal(p.theta)
    col_pops = np.sum(np.abs(m) ** 2, axis=0)
    pop_d1 = float(abs(m[0, 1]) ** 2)
    pop_d2 = float(abs(m[1, 1]) ** 2)
    return GateReport(
        projected=m,
        ideal=ideal,
        leakage_by_state={"D1": float(col_pops[0]), "D2": pop_d1 + pop_d2},
        fidelity=float(abs(np.trace(m.conj().T @ ideal)) / 2.0),
        pop_d1=pop_d1,
        pop_d2=pop_d2,
    )


@dataclass(frozen=True)
class Fig2Row:
    gamma_ratio: float
    one_minus_cos_theta: float
    pop_d1: float
    pop_d2: float
    eta: float
    flag: str = ""


def fig2_theta_grid(n: int = 200) -> np.ndarray:
    """Angles whose 1 - cos(theta) is evenly spaced over [0, 1]."""
    return np.arccos(1.0 - np.linspace(0.0, 1.0, n))


def fig2_row(g: float, theta: float) -> Fig2Row:
    x = 1.0 - math.cos(theta)
    try:
        r = projected_gate(LoopParams(1.0, theta, g))
    except NonCyclic:
        return Fig2Row(g, x, math.nan, math.nan, math.nan, "noncyclic")
    return Fig2Row(g, x, r.pop_d1, r.pop_d2, r.pop_d1 + r.pop_d2)


def sweep_fig2(g_values, theta_grid, workers: int = 1) -> list[Fig2Row]:
    """One block per g value; rows inside a block ordered by 1 - cos(theta)."""
    thetas = sorted(float(th) for th in theta_grid)
    points = [(float(g), th) for g in g_values for th in thetas]
    if workers <= 1:
        return [fig2_row(g, th) for g, th in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(fig2_row, *zip(*points), chunksize=max(1, len(points) // (4 * workers)))
        )

