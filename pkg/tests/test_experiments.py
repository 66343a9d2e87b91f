import math

import numpy as np
import pytest

from holonomic import abelian, experiments
from holonomic.errors import DegenerateDrive, NonCyclic
from holonomic.models import LoopParams, RampProfile, TwoQubitDriveParams
from holonomic.numerics import unitarity_defect

SYSTEMS = ["abelian", "nonabelian"]


@pytest.mark.parametrize("system", SYSTEMS)
def test_static_ramp_is_trivial(system):
    rep = experiments.prepare_dark_state(RampProfile(0.0, 0.0, 2.0), True, 200, system=system)
    assert rep.final_infidelity == 0.0


@pytest.mark.parametrize("system", SYSTEMS)
@pytest.mark.parametrize("duration", [1.0, 10.0, 100.0])
def test_matching_is_exact(system, duration):
    ramp = RampProfile(0.0, math.pi / 3, duration)
    rep = experiments.prepare_dark_state(ramp, True, int(200 * duration), system=system)
    assert 0 <= rep.final_infidelity < 1e-8
    assert rep.with_matching and rep.system == system and rep.ramp["duration"] == duration


@pytest.mark.parametrize("system", SYSTEMS)
def test_without_matching_follows_adiabatic_trend(system):
    fast = experiments.prepare_dark_state(RampProfile(0.0, math.pi / 3, 1.0), False, 200, system=system)
    slow = experiments.prepare_dark_state(RampProfile(0.0, math.pi / 3, 100.0), False, 20_000, system=system)
    assert fast.final_infidelity > 1e-3
    assert fast.final_infidelity > slow.final_infidelity


def test_nonabelian_wrapper():
    ramp = RampProfile(0.0, 0.9, 1.0, "smoothstep")
    a = experiments.prepare_dark_state_nonabelian(ramp, True, 400)
    b = experiments.prepare_dark_state(ramp, True, 400, system="nonabelian")
    assert a == b


def test_matching_error_is_integrator_limited():
    ramp = RampProfile(0.0, math.pi / 3, 1.0)
    reps = [experiments.prepare_dark_state(ramp, True, n) for n in (10, 20, 40)]
    for coarse, fine in zip(reps, reps[1:]):
        assert coarse.final_infidelity / fine.final_infidelity >= 16
        assert 8 < coarse.final_state_error / fine.final_state_error < 32


def test_prep_rejects_bad_input():
    with pytest.raises(ValueError):
        experiments.prepare_dark_state(RampProfile(0.2, 1.0, 1.0), True, 100)
    with pytest.raises(ValueError):
        experiments.prepare_dark_state(RampProfile(0.0, 1.0, 1.0), True, 100, system="qutrit")


@pytest.mark.parametrize("system", SYSTEMS)
@pytest.mark.parametrize("shape", ["linear", "smoothstep"])
def test_identity_check(system, shape):
    assert experiments.invariant_identity_check(RampProfile(0.0, math.pi / 3, 1.0, shape), system=system) < 1e-8
    assert experiments.invariant_identity_check(RampProfile(0.0, 0.0, 1.0, shape), system=system) == 0.0


def test_two_qubit_matches_abelian():
    drive = TwoQubitDriveParams(1.0, 1.0, 0.3, -0.2)
    rep = experiments.two_qubit_gate(drive, 0.2 * math.sqrt(2))
    ref = LoopParams(1.0, math.pi / 4, 0.2)
    assert abs(rep.phase_on_11 - abelian.total_phase(ref)) < 1e-10
    assert abs(rep.leakage_from_11 - (1 - abelian.leakage_overlap(ref))) < 1e-10
    assert rep.effective.sin_theta**2 == pytest.approx(0.5)


def test_two_qubit_gate_structure():
    rep = experiments.two_qubit_gate(TwoQubitDriveParams(0.7, 1.3, 0.1, 0.4), 0.3)
    assert np.array_equal(np.diag(rep.gate)[:3], [1, 1, 1])
    assert np.count_nonzero(rep.gate - np.diag(np.diag(rep.gate))) == 0
    assert rep.gate[3, 3] == pytest.approx(np.exp(1j * rep.phase_on_11))
    assert unitarity_defect(rep.gate) < 1e-10
    assert 0 <= rep.leakage_from_11 <= 1


def test_two_qubit_single_drive_trivial():
    rep = experiments.two_qubit_gate(TwoQubitDriveParams(0.0, 1.0), 0.2)
    assert rep.phase_on_11 == 0.0 and rep.leakage_from_11 == pytest.approx(0.0, abs=1e-12)


def test_two_qubit_errors():
    with pytest.raises(NonCyclic):
        experiments.two_qubit_gate(TwoQubitDriveParams(1.0, 1.0), 0.0)
    with pytest.raises(DegenerateDrive):
        experiments.two_qubit_gate(TwoQubitDriveParams(0.0, 0.0), 0.2)


def test_mapped_params():
    p, ep = experiments.mapped_params(TwoQubitDriveParams(1.0, 2.0), 0.5)
    assert p.omega == ep.kappa == pytest.approx(math.sqrt(17))
    assert p.theta == ep.theta_eff and p.gamma == 0.5
