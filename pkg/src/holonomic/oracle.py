"""Fixed-step RK4 integration of i dpsi/dt = H(t) psi.

This is the brute-force referee for the closed-form solutions, so it only
uses the Hamiltonian constructors and never the exact propagators.
States are not renormalised; norm drift is reported as the error signal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import models
from .config import TOL
from .errors import NonCyclic, NormDriftExceeded
from .models import LoopParams
from .numerics import check_hermitian, hermitian_eigensystem, spectral_norm

Hamiltonian = Callable[[float], np.ndarray]

DEFAULT_STEPS = 20_000


@dataclass(frozen=True)
class IntegrationSpec:
    t_start: float
    t_end: float
    steps: int = DEFAULT_STEPS
    method: str = "rk4"
    unitarity_tolerance: float = TOL.unitarity
    strict: bool = True

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    accumulated_phase: float
    max_norm_drift: float
    failed: bool = False
    spec: IntegrationSpec | None = field(default=None, repr=False)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True)
class NumericPropagator:
    matrix: np.ndarray
    error_estimate: float | None
    max_norm_drift: float


def _checked(hamiltonian: Hamiltonian, t: float) -> np.ndarray:
    h = hamiltonian(t)
    check_hermitian(h)
    return h


def _rk4(hamiltonian: Hamiltonian, y0: np.ndarray, spec: IntegrationSpec, on_step=None):
    """Advance ``y0`` (vector or matrix of column states); returns the final array."""
    dt = spec.dt
    y = np.array(y0, dtype=complex)
    t = spec.t_start
    h_now = _checked(hamiltonian, t)
    for k in range(spec.steps):
        t_mid = t + 0.5 * dt
        t_next = spec.t_start + (k + 1) * dt
        h_mid = _checked(hamiltonian, t_mid)
        h_next = _checked(hamiltonian, t_next)
        k1 = -1j * (h_now @ y)
        k2 = -1j * (h_mid @ (y + 0.5 * dt * k1))
        k3 = -1j * (h_mid @ (y + 0.5 * dt * k2))
        k4 = -1j * (h_next @ (y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t, h_now = t_next, h_next
        if on_step is not None:
            on_step(k + 1, t, y)
    return y


def integrate(
    hamiltonian: Hamiltonian,
    psi0: np.ndarray,
    spec: IntegrationSpec,
    reference: Callable[[float], np.ndarray] | None = None,
    sample_every: int = 1,
) -> Trajectory:
    """Integrate one state and track its unwrapped phase.

    Without ``reference`` the phase increments are arg<psi_k|psi_k+1>. With a
    reference path r(t) they are arg(<r_k+1|psi_k+1> / <r_k|psi_k>), which
    unwraps the phase of the state relative to that path.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > TOL.unit_norm:
        raise ValueError("initial state must have unit norm")

    times = [spec.t_start]
    states = [psi0.copy()]
    acc = {"phase": 0.0, "drift": 0.0, "prev": psi0.copy(), "ref": None}
    if reference is not None:
        acc["ref"] = complex(np.vdot(reference(spec.t_start), psi0))

    def on_step(k, t, y):
        if reference is None:
            acc["phase"] += float(np.angle(np.vdot(acc["prev"], y)))
            acc["prev"] = y
        else:
            amp = complex(np.vdot(reference(t), y))
            acc["phase"] += float(np.angle(amp * np.conj(acc["ref"])))
            acc["ref"] = amp
        acc["drift"] = max(acc["drift"], abs(float(np.linalg.norm(y)) - 1.0))
        if k % sample_every == 0 or k == spec.steps:
            times.append(t)
            states.append(y)

    _rk4(hamiltonian, psi0, spec, on_step)
    failed = acc["drift"] > spec.unitarity_tolerance
    if failed and spec.strict:
        raise NormDriftExceeded(
            f"norm drift {acc['drift']:.3e} > {spec.unitarity_tolerance:.1e} "
            f"with {spec.steps} steps"
        )
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        accumulated_phase=acc["phase"],
        max_norm_drift=acc["drift"],
        failed=failed,
        spec=spec,
    )


def numeric_propagator(
    hamiltonian: Hamiltonian,
    t_end: float,
    steps: int = DEFAULT_STEPS,
    dim: int | None = None,
    estimate_error: bool = False,
    strict: bool = True,
    t_start: float = 0.0,
) -> NumericPropagator:
    """Columns are the RK4-evolved basis states.

    With ``estimate_error`` the run is repeated at twice the steps and the
    spectral-norm difference is reported (the finer result is returned).
    """
    if dim is None:
        dim = hamiltonian(t_start).shape[0]
    if t_end == t_start:
        return NumericPropagator(np.eye(dim, dtype=complex), 0.0, 0.0)

    def run(n):
        spec = IntegrationSpec(t_start, t_end, n)
        u = _rk4(hamiltonian, np.eye(dim, dtype=complex), spec)
        return u, spectral_norm(u.conj().T @ u - np.eye(dim))

    u, drift = run(steps)
    estimate = None
    if estimate_error:
        u_fine, drift = run(2 * steps)
        estimate = spectral_norm(u_fine - u)
        u = u_fine
    if strict and drift > 10 * TOL.unitarity:
        raise NormDriftExceeded(f"propagator unitarity defect {drift:.3e}")
    return NumericPropagator(u, estimate, drift)


def cyclic_phase_numeric(p: LoopParams, steps: int = DEFAULT_STEPS) -> float:
    """Unwrapped phase picked up by the middle invariant eigenstate over one period.

    The initial state comes from a numerical eigensolve of I(0); the phase is
    unwrapped against the co-rotating path exp(i gamma t s33)|phi0>.
    """
    if p.gamma <= 0:
        raise NonCyclic("cyclic phase needs gamma > 0")
    _, vecs = hermitian_eigensystem(models.invariant_abelian(p, 0.0))
    phi0 = vecs[:, 1]

    def reference(t):
        return models.crank_abelian(p.gamma, t) @ phi0

    traj = integrate(
        lambda t: models.h_abelian(p, t),
        phi0,
        IntegrationSpec(0.0, p.period, steps),
        reference=reference,
        sample_every=steps,
    )
    return traj.accumulated_phase


