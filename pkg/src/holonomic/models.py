"""Level bases, parameter records and the Hamiltonians of the Lambda system.

Four-level basis ordering is (g1, g2, g3, e). The abelian loop lives on the
reduced basis (g2, g3, e) because g1 never couples there; ``lift_abelian``
embeds reduced operators back into the four-level space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDrive, TimeOutOfRange

G1, G2, G3, E = 0, 1, 2, 3
LEVELS = ("g1", "g2", "g3", "e")
# reduced abelian basis (g2, g3, e)
R_G2, R_G3, R_E = 0, 1, 2
REDUCED_LEVELS = ("g2", "g3", "e")


def sigma(mu: int, nu: int, dim: int = 4) -> np.ndarray:
    """|mu><nu| on a ``dim``-level basis."""
    s = np.zeros((dim, dim), dtype=complex)
    s[mu, nu] = 1.0
    return s


def lift_abelian(op: np.ndarray, g1_entry: complex = 0.0) -> np.ndarray:
    """Embed a (g2, g3, e) operator into (g1, g2, g3, e).

    Pass ``g1_entry=1`` for propagators so the decoupled g1 level is untouched.
    """
    out = np.zeros((4, 4), dtype=complex)
    out[G1, G1] = g1_entry
    out[1:, 1:] = op
    return out


def lift_state(psi: np.ndarray) -> np.ndarray:
    out = np.zeros(4, dtype=complex)
    out[1:] = psi
    return out


@dataclass(frozen=True)
class LoopParams:
    """Rabi strength ``omega``, mixing angle ``theta`` and loop rate ``gamma``."""

    omega: float
    theta: float
    gamma: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if not (math.isfinite(self.theta) and math.isfinite(self.gamma)):
            raise ValueError("theta and gamma must be finite")

    @classmethod
    def from_ratio(cls, theta: float, gamma_ratio: float, omega: float = 1.0):
        return cls(omega=omega, theta=theta, gamma=gamma_ratio * omega)

    @property
    def g(self) -> float:
        return self.gamma / self.omega

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.gamma if self.gamma > 0 else math.inf


class AbelianParams(LoopParams):
    pass


class NonAbelianParams(LoopParams):
    pass


# -- abelian loop -----------------------------------------------------------


def h_abelian(p: LoopParams, t: float) -> np.ndarray:
    s, c = math.sin(p.theta), math.cos(p.theta)
    ph = complex(math.cos(p.gamma * t), math.sin(p.gamma * t))
    h = np.zeros((3, 3), dtype=complex)
    h[R_G2, R_E] = h[R_E, R_G2] = p.omega * s
    h[R_G3, R_E] = p.omega * c * ph
    h[R_E, R_G3] = p.omega * c * ph.conjugate()
    return h


def h0_abelian(p: LoopParams) -> np.ndarray:
    """Time-independent core of the cranked abelian Hamiltonian."""
    return h_abelian(p, 0.0)


def crank_abelian(gamma: float, t: float) -> np.ndarray:
    """exp(i gamma t sigma_33) on the reduced basis."""
    return np.diag([1.0, np.exp(1j * gamma * t), 1.0]).astype(complex)


def invariant_abelian(p: LoopParams, t: float) -> np.ndarray:
    inv = h_abelian(p, t)
    inv[R_G3, R_G3] += p.gamma
    return inv


def dark_state_abelian(theta: float, phase: float) -> np.ndarray:
    return np.array(
        [math.cos(theta), -math.sin(theta) * np.exp(1j * phase), 0.0], dtype=complex
    )


# -- non-abelian loop -------------------------------------------------------


def h_nonabelian(p: LoopParams, t: float) -> np.ndarray:
    s, c = math.sin(p.theta), math.cos(p.theta)
    gt = p.gamma * t
    h = np.zeros((4, 4), dtype=complex)
    h[G1, E] = h[E, G1] = p.omega * s * math.cos(gt)
    h[G2, E] = h[E, G2] = p.omega * s * math.sin(gt)
    h[G3, E] = h[E, G3] = p.omega * c
    return h


def dark_states_nonabelian(theta: float) -> tuple[np.ndarray, np.ndarray]:
    d1 = np.array([math.cos(theta), 0.0, -math.sin(theta), 0.0], dtype=complex)
    d2 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
    return d1, d2


# -- parameter ramps and matching terms -------------------------------------


@dataclass(frozen=True)
class RampProfile:
    """theta(t) from ``theta_start`` to ``theta_end`` over ``duration``."""

    theta_start: float
    theta_end: float
    duration: float
    shape: str = "linear"

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"ramp duration must be positive, got {self.duration}")
        if self.shape not in ("linear", "smoothstep"):
            raise ValueError(f"unknown ramp shape {self.shape!r}")

    def _tau(self, t: float) -> float:
        slack = 1e-12 * self.duration
        if t < -slack or t > self.duration + slack:
            raise TimeOutOfRange(f"t={t} outside [0, {self.duration}]")
        return min(1.0, max(0.0, t / self.duration))

    def theta(self, t: float) -> float:
        tau = self._tau(t)
        w = tau if self.shape == "linear" else tau * tau * (3.0 - 2.0 * tau)
        return self.theta_start + (self.theta_end - self.theta_start) * w

    def theta_dot(self, t: float) -> float:
        tau = self._tau(t)
        rate = (self.theta_end - self.theta_start) / self.duration
        return rate if self.shape == "linear" else rate * 6.0 * tau * (1.0 - tau)

    def summary(self) -> dict:
        return {
            "shape": self.shape,
            "theta_start": self.theta_start,
            "theta_end": self.theta_end,
            "duration": self.duration,
        }


def h_ramp_abelian(ramp: RampProfile, t: float, omega: float) -> np.ndarray:
    """Abelian Hamiltonian at phi = 0 with theta following the ramp."""
    return h_abelian(LoopParams(omega, ramp.theta(t), 0.0), 0.0)


def h_ramp_nonabelian(ramp: RampProfile, t: float, omega: float) -> np.ndarray:
    return h_nonabelian(LoopParams(omega, ramp.theta(t), 0.0), 0.0)


def h_matching_abelian(ramp: RampProfile, t: float, omega: float) -> np.ndarray:
    """Ramp Hamiltonian plus the i*theta_dot*(s23 - s32) matching term."""
    h = h_ramp_abelian(ramp, t, omega)
    rate = ramp.theta_dot(t)
    h[R_G2, R_G3] += 1j * rate
    h[R_G3, R_G2] -= 1j * rate
    return h


def h_matching_nonabelian(ramp: RampProfile, t: float, omega: float) -> np.ndarray:
    """Ramp Hamiltonian plus the i*theta_dot*(s13 - s31) matching term."""
    h = h_ramp_nonabelian(ramp, t, omega)
    rate = ramp.theta_dot(t)
    h[G1, G3] += 1j * rate
    h[G3, G1] -= 1j * rate
    return h


# -- two-qubit effective system --------------------------------------------

# basis of the enclosed space: (g2g2, g3g3, ee)
TQ_G2G2, TQ_G3G3, TQ_EE = 0, 1, 2


@dataclass(frozen=True)
class TwoQubitDriveParams:
    amp1: float
    amp2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if self.amp1 < 0 or self.amp2 < 0:
            raise ValueError("drive amplitudes are magnitudes and must be >= 0")
        if self.amp1 == 0 and self.amp2 == 0:
            raise DegenerateDrive("both drive amplitudes are zero")


@dataclass(frozen=True)
class EffectiveParams:
    """Coupling ``kappa``, angle ``theta_eff`` and loop phase ``phi_eff``.

    ``theta_eff`` takes the branch sin <= 0, cos >= 0.
    """

    kappa: float
    theta_eff: float
    phi_eff: float
    sin_theta: float = field(repr=False, default=math.nan)
    cos_theta: float = field(repr=False, default=math.nan)


def effective_params(d: TwoQubitDriveParams) -> EffectiveParams:
    a1, a2 = d.amp1**2, d.amp2**2
    kappa = math.hypot(a1, a2)
    if kappa == 0:
        raise DegenerateDrive("effective coupling vanishes")
    sin_t, cos_t = -a1 / kappa, a2 / kappa
    return EffectiveParams(
        kappa=kappa,
        theta_eff=math.atan2(sin_t, cos_t),
        phi_eff=2.0 * (d.phi1 - d.phi2),
        sin_theta=sin_t,
        cos_theta=cos_t,
    )


def two_qubit_effective(d: TwoQubitDriveParams) -> tuple[np.ndarray, EffectiveParams]:
    """Effective Hamiltonian on (g2g2, g3g3, ee) and its su(3) parameters.

    Built from the su(3) generators A_e2 = e^{2i phi1}|ee><g2g2| and
    A_e3 = e^{2i phi1}|ee><g3g3|.
    """
    ep = effective_params(d)
    carrier = np.exp(2j * d.phi1)
    a_e2 = carrier * sigma(TQ_EE, TQ_G2G2, 3)
    a_e3 = carrier * sigma(TQ_EE, TQ_G3G3, 3)
    loop = np.exp(1j * ep.phi_eff)
    h = ep.kappa * ep.sin_theta * (a_e2 + a_e2.conj().T) + ep.kappa * ep.cos_theta * (
        a_e3.conj().T * loop + a_e3 * np.conj(loop)
    )
    return h, ep


def drive_matrix(d: TwoQubitDriveParams) -> np.ndarray:
    """The two-qubit Hamiltonian written directly in drive amplitudes and phases."""
    h = np.zeros((3, 3), dtype=complex)
    h[TQ_EE, TQ_G2G2] = -(d.amp1**2) * np.exp(2j * d.phi1)
    h[TQ_EE, TQ_G3G3] = d.amp2**2 * np.exp(2j * d.phi2)
    return h + h.conj().T


def effective_params_from_matrix(h: np.ndarray) -> EffectiveParams:
    """Recover (kappa, theta_eff, phi_eff) from an effective Hamiltonian."""
    e2 = h[TQ_EE, TQ_G2G2]
    e3 = h[TQ_EE, TQ_G3G3]
    a1, a2 = abs(e2), abs(e3)
    kappa = math.hypot(a1, a2)
    if kappa == 0:
        raise DegenerateDrive("effective coupling vanishes")
    if a1 > 0 and a2 > 0:
        phi_eff = float(np.angle(-e2 * np.conj(e3)))
    else:
        phi_eff = 0.0
    sin_t, cos_t = -a1 / kappa, a2 / kappa
    return EffectiveParams(kappa, math.atan2(sin_t, cos_t), phi_eff, sin_t, cos_t)
