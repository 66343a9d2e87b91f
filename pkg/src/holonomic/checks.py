"""Cross-checks between the closed-form solutions and the numerical referee.

``run_all`` drives the ``verify`` command. Every check returns a CheckResult
carrying the measured worst-case residual and the tolerance it was held to.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import abelian, experiments, models, nonabelian, oracle
from .errors import HolonomicError
from .models import LoopParams, RampProfile, TwoQubitDriveParams
from .numerics import hermitian_eigensystem, spectral_norm, unitarity_defect

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e}"
        return text + (f" ({self.detail})" if self.detail else "")

    def as_dict(self) -> dict:
        return asdict(self)


def _result(name, measured, tol, detail="") -> CheckResult:
    measured = float(measured)
    return CheckResult(name, bool(measured < tol), measured, tol, detail)


def open_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n interior points of (lo, hi)."""
    return lo + (hi - lo) * np.arange(1, n + 1) / (n + 1)


def check_cubic_spectrum(n: int = 20) -> CheckResult:
    worst = 0.0
    for th in open_grid(0.0, HALF_PI, n):
        for g in np.linspace(0.0, 0.95, n):
            p = LoopParams(1.0, th, g)
            closed = np.array(abelian.characteristic_roots(p).energies)
            numeric = hermitian_eigensystem(models.invariant_abelian(p, 0.0))[0]
            worst = max(worst, np.max(np.abs(closed - numeric)))
    anchors = [
        (abelian.characteristic_roots(LoopParams(1.0, 0.7, 0.0)).roots, (-1.0, 0.0, 1.0)),
        (abelian.characteristic_roots(LoopParams(1.0, HALF_PI, 0.5)).roots, (-1.0, 0.5, 1.0)),
    ]
    worst = max([worst] + [np.max(np.abs(np.subtract(a, b))) for a, b in anchors])
    return _result("cubic roots vs invariant spectrum", worst, 1e-9, f"{n}x{n} grid + anchors")


def check_invariant_equation(points: int = 5, times: int = 20, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for th, g in zip(rng.uniform(0, math.pi, points), rng.uniform(0.05, 1.0, points)):
        p = LoopParams(1.0, th, g)
        h = 1e-6 / p.gamma
        for t in rng.uniform(0, p.period, times):
            d_inv = (models.invariant_abelian(p, t + h) - models.invariant_abelian(p, t - h)) / (2 * h)
            inv, ham = models.invariant_abelian(p, t), models.h_abelian(p, t)
            worst = max(worst, spectral_norm(d_inv - 1j * (inv @ ham - ham @ inv)))
    return _result("invariant equation residual", worst, 1e-9)


def _grid_points(n: int) -> list[tuple[float, float]]:
    thetas = open_grid(0.0, HALF_PI, n)
    ratios = np.linspace(0.1, 0.9, n)
    return [(float(th), float(g)) for th in thetas for g in ratios]


def check_abelian_propagator(n: int = 3, steps: int = oracle.DEFAULT_STEPS) -> CheckResult:
    worst = 0.0
    for th, g in _grid_points(n):
        p = LoopParams(1.0, th, g)
        num = oracle.numeric_propagator(lambda t: models.h_abelian(p, t), p.period, steps, strict=False)
        worst = max(worst, spectral_norm(num.matrix - abelian.closed_form_propagator(p, p.period)))
    return _result("abelian propagator vs RK4", worst, 1e-6, f"{n}x{n} grid, {steps} steps")


def check_nonabelian_propagator(n: int = 3, steps: int = oracle.DEFAULT_STEPS) -> CheckResult:
    worst = 0.0
    for th, g in _grid_points(n):
        p = LoopParams(1.0, th, g)
        num = oracle.numeric_propagator(lambda t: models.h_nonabelian(p, t), p.period, steps, strict=False)
        worst = max(worst, spectral_norm(num.matrix - nonabelian.exact_propagator(p, p.period)))
    return _result("non-abelian propagator vs RK4", worst, 1e-6, f"{n}x{n} grid, {steps} steps")


def check_cyclic_phase(n: int = 3, steps: int = oracle.DEFAULT_STEPS) -> CheckResult:
    worst = 0.0
    for th, g in _grid_points(n):
        p = LoopParams(1.0, th, g)
        try:
            numeric = oracle.cyclic_phase_numeric(p, steps)
        except HolonomicError:
            return CheckResult("total phase vs RK4", False, math.inf, 1e-5, "integration failed")
        worst = max(worst, abs(numeric - abelian.total_phase(p)))
    return _result("total phase vs RK4", worst, 1e-5, f"{n}x{n} grid, unwrapped")


def check_nonabelian_spectrum(n: int = 20) -> CheckResult:
    worst = 0.0
    for th in open_grid(0.0, HALF_PI, n):
        for g in np.linspace(0.05, 1.0, n):
            p = LoopParams(1.0, th, g)
            closed = np.sort(nonabelian.eigenvalues_closed_form(p))
            numeric = hermitian_eigensystem(nonabelian.gauged_matrix(p))[0]
            worst = max(worst, np.max(np.abs(closed - numeric)))
    return _result("gauged spectrum closed form vs numeric", worst, 1e-9, f"{n}x{n} grid")


def check_gauge_covariance(samples: int = 50, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = LoopParams(1.0, rng.uniform(0, math.pi), rng.uniform(0.01, 1.0))
        t = rng.uniform(0, p.period)
        u = nonabelian.gauge_rotation(p.gamma, t)
        h = 1e-6 / p.gamma
        du = (nonabelian.gauge_rotation(p.gamma, t + h) - nonabelian.gauge_rotation(p.gamma, t - h)) / (2 * h)
        gauged = u.conj().T @ models.h_nonabelian(p, t) @ u - 1j * u.conj().T @ du
        worst = max(worst, spectral_norm(gauged - nonabelian.gauged_matrix(p)))
    return _result("gauge covariance", worst, 1e-9)


def check_holonomy_recovery() -> CheckResult:
    worst = 0.0
    ordered = True
    for th in (0.3, 0.7, 1.1, 1.5):
        ideal = nonabelian.holonomy_ideal(th)
        near = spectral_norm(nonabelian.projected_gate(LoopParams(1.0, th, 0.01)).projected - ideal)
        far = spectral_norm(nonabelian.projected_gate(LoopParams(1.0, th, 0.5)).projected - ideal)
        worst = max(worst, near)
        ordered &= near < far
    res = _result("holonomy recovery at g=0.01", worst, 0.05)
    if not ordered:
        return CheckResult(res.name, False, res.measured, res.tolerance, "g=0.5 closer than g=0.01")
    return res


def check_nonabelian_adiabatic() -> CheckResult:
    worst_e = max(
        abs(nonabelian.eigenvalues_closed_form(LoopParams(1.0, th, 1e-3))[0] / 1e-3 - math.cos(th))
        for th in (0.3, 0.7, 1.1, 1.5)
    )
    rows = nonabelian.sweep_fig2([0.01], nonabelian.fig2_theta_grid(200))
    sup = max(abs(r.pop_d1 - math.sin(2 * math.pi * (1 - r.one_minus_cos_theta)) ** 2) for r in rows)
    fid = min(
        nonabelian.projected_gate(LoopParams(1.0, th, 0.01)).fidelity
        for th in nonabelian.fig2_theta_grid(200)
    )
    passed = worst_e < 1e-4 and sup < 0.02 and fid > 0.99
    detail = f"|E1/gamma - cos|={worst_e:.2e}, pop_D1 sup={sup:.2e}, min fidelity={fid:.5f}"
    return CheckResult("non-abelian adiabatic limit", passed, sup, 0.02, detail)


def check_abelian_adiabatic() -> CheckResult:
    g = 1e-3
    worst = 0.0
    for th in np.linspace(0.0, math.pi, 13):
        p = LoopParams(1.0, float(th), g)
        x0 = -abelian.total_phase(p) * g / (2 * math.pi)
        worst = max(worst, abs(x0 - g * math.sin(th) ** 2) / g**3)
    return _result("abelian small-g root |x0 - g sin^2| / g^3", worst, 1.0)


def check_leakage_anchors() -> CheckResult:
    devs = [1.0 - abelian.leakage_overlap(LoopParams(1.0, 1e-9, g)) for g in (0.1, 0.5, 0.9)]
    devs += [1.0 - abelian.leakage_overlap(LoopParams(1.0, HALF_PI, g)) for g in (0.1, 0.5, 0.99)]
    devs += [1.0 - abelian.leakage_overlap(LoopParams(1.0, th, 0.0)) for th in (0.2, 0.8, 1.4)]
    return _result("leakage anchors", max(abs(d) for d in devs), 1e-9)


def check_dark_states() -> CheckResult:
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        p = LoopParams(1.0, rng.uniform(0, math.pi), rng.uniform(0.01, 1.0))
        t = rng.uniform(0, p.period)
        dark = models.dark_state_abelian(p.theta, p.gamma * t)
        worst = max(worst, np.linalg.norm(models.h_abelian(p, t) @ dark))
        for psi in nonabelian.strip_berry_phases(p, t):
            worst = max(worst, np.linalg.norm(models.h_nonabelian(p, t) @ psi))
    return _result("dark states are null vectors", worst, 1e-11)


def check_matching(steps_per_unit: int = 200) -> CheckResult:
    worst = 0.0
    for system in ("abelian", "nonabelian"):
        for duration in (1.0, 10.0, 100.0):
            ramp = RampProfile(0.0, math.pi / 3, duration)
            steps = max(100, int(steps_per_unit * duration))
            rep = experiments.prepare_dark_state(ramp, True, steps, system=system)
            worst = max(worst, rep.final_infidelity)
    return _result("matching-term preparation infidelity", worst, 1e-8, "durations 1, 10, 100")


def check_matching_identity() -> CheckResult:
    worst = max(
        experiments.invariant_identity_check(RampProfile(0.0, math.pi / 3, 1.0, shape), system=s)
        for shape in ("linear", "smoothstep")
        for s in ("abelian", "nonabelian")
    )
    return _result("matching identity dH/dt = i[H, H_ad]", worst, 1e-8)


def check_two_qubit() -> CheckResult:
    rep = experiments.two_qubit_gate(TwoQubitDriveParams(1.0, 1.0), 0.2 * math.sqrt(2.0))
    ref = LoopParams(1.0, math.pi / 4, 0.2)
    dev = max(
        abs(rep.phase_on_11 - abelian.total_phase(ref)),
        abs(rep.leakage_from_11 - (1.0 - abelian.leakage_overlap(ref))),
        unitarity_defect(rep.gate),
    )
    return _result("two-qubit isomorphism", dev, 1e-10)


def eq10_report(thetas=(0.3, math.pi / 4, 1.0, HALF_PI)) -> list[dict]:
    out = []
    for th in thetas:
        lim = abelian.adiabatic_phase_limit(th)
        out.append(
            {
                "theta": th,
                "extrapolated": lim.value,
                "ref_two_pi_sin2": lim.ref_two_pi,
                "ref_four_pi_sin2": lim.ref_four_pi,
                "dev_two_pi": lim.deviation_two_pi,
                "dev_four_pi": lim.deviation_four_pi,
            }
        )
    return out


def all_checks(steps: int = oracle.DEFAULT_STEPS, grid: int = 3) -> list[Callable[[], CheckResult]]:
    return [
        check_cubic_spectrum,
        check_invariant_equation,
        lambda: check_abelian_propagator(grid, steps),
        lambda: check_nonabelian_propagator(grid, steps),
        lambda: check_cyclic_phase(grid, steps),
        check_nonabelian_spectrum,
        check_gauge_covariance,
        check_holonomy_recovery,
        check_nonabelian_adiabatic,
        check_abelian_adiabatic,
        check_leakage_anchors,
        check_dark_states,
        check_matching,
        check_matching_identity,
        check_two_qubit,
    ]


def run_all(steps: int = oracle.DEFAULT_STEPS, grid: int = 3) -> list[CheckResult]:
    return [check() for check in all_checks(steps, grid)]
