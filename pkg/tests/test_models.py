import math

import numpy as np
import pytest

from holonomic import models
from holonomic.errors import DegenerateDrive, TimeOutOfRange
from holonomic.models import (
    E,
    G1,
    G2,
    G3,
    R_E,
    R_G2,
    R_G3,
    LoopParams,
    RampProfile,
    TwoQubitDriveParams,
)
from holonomic.numerics import is_hermitian
from oracles import central_difference


def test_params_derived_quantities():
    p = LoopParams.from_ratio(0.3, 0.25, omega=2.0)
    assert p.gamma == 0.5 and p.g == 0.25
    assert p.period == pytest.approx(4 * math.pi)
    with pytest.raises(ValueError):
        LoopParams(0.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        LoopParams(1.0, 0.1, -0.1)


def test_all_hamiltonians_hermitian(rng):
    for _ in range(100):
        p = LoopParams(rng.uniform(0.1, 3), rng.uniform(-4, 4), rng.uniform(0, 2))
        t = rng.uniform(-10, 10)
        ramp = RampProfile(0.0, rng.uniform(-2, 2), rng.uniform(0.5, 5), rng.choice(["linear", "smoothstep"]))
        tr = rng.uniform(0, ramp.duration)
        for h in (
            models.h_abelian(p, t),
            models.h0_abelian(p),
            models.invariant_abelian(p, t),
            models.h_nonabelian(p, t),
            models.h_matching_abelian(ramp, tr, p.omega),
            models.h_matching_nonabelian(ramp, tr, p.omega),
        ):
            assert is_hermitian(h)
        d = TwoQubitDriveParams(*rng.uniform(0.1, 2, 2), *rng.uniform(-3, 3, 2))
        assert is_hermitian(models.two_qubit_effective(d)[0])


def test_abelian_pure_g2_coupling_at_half_pi():
    h = models.h_abelian(LoopParams(1.3, math.pi / 2, 0.4), 2.7)
    expected = np.zeros((3, 3))
    expected[R_G2, R_E] = expected[R_E, R_G2] = 1.3
    assert np.allclose(h, expected, atol=1e-15)


def test_abelian_entry_direct_evaluation():
    p = LoopParams(1.0, math.pi / 4, 1.0)
    h = models.h_abelian(p, math.pi / 2)
    assert h[R_G3, R_E] == pytest.approx(1j / math.sqrt(2), abs=1e-15)


def test_h0_is_t0_and_real():
    p = LoopParams(1.0, 0.9, 0.3)
    assert np.array_equal(models.h0_abelian(p), models.h_abelian(p, 0.0))
    assert np.all(models.h0_abelian(p).imag == 0)
    h0 = models.h0_abelian(LoopParams(1.0, 0.0, 0.3))
    assert h0[R_G2, R_E] == 0 and h0[R_G3, R_E] == 1


@pytest.mark.parametrize("phase", [0.3, 1.7, 5.0])
def test_cranking_identity(phase):
    p = LoopParams(1.2, 0.7, 0.5)
    t = phase / p.gamma
    v = models.crank_abelian(p.gamma, t)
    assert np.linalg.norm(models.h_abelian(p, t) - v @ models.h0_abelian(p) @ v.conj().T) < 1e-12


def test_invariant_at_zero():
    p = LoopParams(1.0, 0.6, 0.3)
    s, c = math.sin(0.6), math.cos(0.6)
    expected = np.array([[0, 0, s], [0, 0.3, c], [s, c, 0]])
    assert np.allclose(models.invariant_abelian(p, 0.0), expected, atol=1e-15)
    assert np.array_equal(models.invariant_abelian(LoopParams(1.0, 0.6, 0.0), 0.0), models.h0_abelian(p))


def test_invariant_equation_residual(rng):
    p = LoopParams(1.0, 0.8, 0.4)
    h = 1e-6 / p.gamma
    for t in rng.uniform(0, p.period, 20):
        d_inv = central_difference(lambda s: models.invariant_abelian(p, s), t, h)
        inv, ham = models.invariant_abelian(p, t), models.h_abelian(p, t)
        assert np.linalg.norm(d_inv - 1j * (inv @ ham - ham @ inv), 2) < 1e-9


def test_invariant_eigenvalues_are_cubic_roots():
    p = LoopParams(1.0, math.pi / 4, 0.2)
    evals = np.linalg.eigvalsh(models.invariant_abelian(p, 0.0))
    cubic = [x**3 - 0.2 * x**2 - x + 0.2 * 0.5 for x in evals]
    assert np.max(np.abs(cubic)) < 1e-12


def test_nonabelian_couplings():
    h = models.h_nonabelian(LoopParams(1.0, 0.0, 0.5), 1.1)
    assert np.count_nonzero(h) == 2 and h[G3, E] == 1
    p = LoopParams(1.0, 0.7, 0.5)
    h = models.h_nonabelian(p, p.period / 4)
    assert abs(h[G1, E]) < 1e-15
    assert h[G2, E] == pytest.approx(math.sin(0.7))


def test_dark_state_abelian():
    assert np.allclose(models.dark_state_abelian(0.0, 1.0), [1, 0, 0])
    assert np.allclose(models.dark_state_abelian(math.pi / 2, 0.0), [0, -1, 0])
    p = LoopParams(1.0, 0.7, 1.0)
    d = models.dark_state_abelian(0.7, 2.1)
    assert np.linalg.norm(d) == pytest.approx(1.0)
    assert np.linalg.norm(models.h_abelian(p, 2.1) @ d) < 1e-12


def test_dark_states_nonabelian():
    d1, d2 = models.dark_states_nonabelian(0.0)
    assert np.allclose(d1, [1, 0, 0, 0]) and np.allclose(d2, [0, 1, 0, 0])
    d1, d2 = models.dark_states_nonabelian(1.1)
    gram = np.array([[np.vdot(a, b) for b in (d1, d2)] for a in (d1, d2)])
    assert np.allclose(gram, np.eye(2), atol=1e-15)
    h = models.h_nonabelian(LoopParams(1.0, 0.4, 0.3), 0.0)
    for d in models.dark_states_nonabelian(0.4):
        assert np.linalg.norm(h @ d) < 1e-12


def test_ramp_derivative_matches_finite_difference():
    for shape in ("linear", "smoothstep"):
        ramp = RampProfile(0.0, 1.2, 3.0, shape)
        for t in np.linspace(0.01, 2.99, 100):
            fd = central_difference(ramp.theta, t, 1e-5)
            assert abs(fd - ramp.theta_dot(t)) < 1e-6


def test_ramp_out_of_range():
    ramp = RampProfile(0.0, 1.0, 2.0)
    with pytest.raises(TimeOutOfRange):
        ramp.theta(2.1)
    with pytest.raises(TimeOutOfRange):
        models.h_matching_abelian(ramp, -0.5, 1.0)


def test_matching_without_rate_is_bare():
    ramp = RampProfile(0.0, 0.0, 1.0)
    assert np.array_equal(models.h_matching_abelian(ramp, 0.4, 1.0), models.h_ramp_abelian(ramp, 0.4, 1.0))
    assert np.array_equal(
        models.h_matching_nonabelian(ramp, 0.4, 1.0), models.h_ramp_nonabelian(ramp, 0.4, 1.0)
    )


def test_linear_ramp_matching_amplitude():
    ramp = RampProfile(0.0, math.pi / 3, 1.0)
    for t in (0.0, 0.3, 1.0):
        extra = models.h_matching_abelian(ramp, t, 1.0) - models.h_ramp_abelian(ramp, t, 1.0)
        assert extra[R_G2, R_G3] == pytest.approx(1j * math.pi / 3)
        assert extra[R_G3, R_G2] == pytest.approx(-1j * math.pi / 3)
        extra4 = models.h_matching_nonabelian(ramp, t, 1.0) - models.h_ramp_nonabelian(ramp, t, 1.0)
        assert extra4[G1, G3] == pytest.approx(1j * math.pi / 3)
        assert np.count_nonzero(extra4) == 2


@pytest.mark.parametrize("shape", ["linear", "smoothstep"])
@pytest.mark.parametrize(
    "bare,total",
    [
        (models.h_ramp_abelian, models.h_matching_abelian),
        (models.h_ramp_nonabelian, models.h_matching_nonabelian),
    ],
)
def test_matching_commutator_identity(shape, bare, total):
    ramp = RampProfile(0.0, math.pi / 3, 1.0, shape)
    for t in np.linspace(0.01, 0.99, 50):
        dh = central_difference(lambda s: bare(ramp, s, 1.0), t, 1e-5)
        h = bare(ramp, t, 1.0)
        h_ad = total(ramp, t, 1.0) - h
        assert np.linalg.norm(dh - 1j * (h @ h_ad - h_ad @ h), 2) < 1e-9


def test_two_qubit_single_drive():
    h, ep = models.two_qubit_effective(TwoQubitDriveParams(0.0, 1.3))
    assert ep.sin_theta == 0.0
    assert np.count_nonzero(h[:, models.TQ_G2G2]) == 0
    assert abs(h[models.TQ_EE, models.TQ_G3G3]) == pytest.approx(1.3**2)


def test_two_qubit_equal_drive():
    _, ep = models.two_qubit_effective(TwoQubitDriveParams(1.0, 1.0, 0.4, 0.4))
    assert ep.kappa == pytest.approx(math.sqrt(2))
    assert math.tan(ep.theta_eff) == pytest.approx(-1.0)
    assert ep.phi_eff == 0.0
    assert ep.sin_theta**2 + ep.cos_theta**2 == pytest.approx(1.0, abs=1e-12)


def test_two_qubit_matches_drive_form(rng):
    for _ in range(50):
        d = TwoQubitDriveParams(*rng.uniform(0.1, 2, 2), *rng.uniform(-3, 3, 2))
        h, _ = models.two_qubit_effective(d)
        assert np.max(np.abs(h - models.drive_matrix(d))) < 1e-12


def test_two_qubit_round_trip(rng):
    for _ in range(50):
        d = TwoQubitDriveParams(*rng.uniform(0.1, 2, 2), *rng.uniform(-1.5, 1.5, 2))
        h, ep = models.two_qubit_effective(d)
        back = models.effective_params_from_matrix(h)
        assert back.kappa == pytest.approx(ep.kappa, abs=1e-12)
        assert back.theta_eff == pytest.approx(ep.theta_eff, abs=1e-12)
        wrapped = math.remainder(back.phi_eff - ep.phi_eff, 2 * math.pi)
        assert abs(wrapped) < 1e-12


def test_two_qubit_degenerate_drive():
    with pytest.raises(DegenerateDrive):
        TwoQubitDriveParams(0.0, 0.0)


def test_lift_abelian_keeps_g1():
    u = models.lift_abelian(np.eye(3), g1_entry=1.0)
    assert np.array_equal(u, np.eye(4))
    assert models.lift_state(np.array([1, 0, 0]))[G2] == 1
    assert G3 == 2
