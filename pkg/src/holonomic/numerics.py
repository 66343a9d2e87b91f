"""Small dense linear algebra: cubic roots, Hermitian eigensystems, unitary exponentials.

Everything here works on numpy arrays of dimension 2 to 4 and is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import ComplexRootsDetected, NotHermitian


@dataclass(frozen=True)
class MonicRealCubic:
    """x**3 + c2*x**2 + c1*x + c0."""

    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.c2, self.c1, self.c0)):
            raise ValueError(f"non-finite cubic coefficients: {self}")

    def __call__(self, x):
        return ((x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3.0 * x + 2.0 * self.c2) * x + self.c1

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(self.c2), abs(self.c1), abs(self.c0))

    def discriminant(self) -> float:
        a, b, c = self.c2, self.c1, self.c0
        return 18 * a * b * c - 4 * a**3 * c + a**2 * b**2 - 4 * b**3 - 27 * c**2


def _newton_polish(p: MonicRealCubic, x: float, iterations: int = 3) -> float:
    fx = p(x)
    for _ in range(iterations):
        d = p.derivative(x)
        if d == 0.0 or fx == 0.0:
            break
        trial = x - fx / d
        ft = p(trial)
        if abs(ft) >= abs(fx):
            break
        x, fx = trial, ft
    return x


def solve_monic_real_cubic(p: MonicRealCubic) -> tuple[float, float, float]:
    """Three real roots of a monic cubic in ascending order.

    Uses the trigonometric (Viete) form on the depressed cubic followed by a
    guarded Newton polish. Raises ComplexRootsDetected when the discriminant
    is negative beyond tolerance.
    """
    disc = p.discriminant()
    if disc < -TOL.cubic_discriminant * max(1.0, p.scale - 1.0) ** 6:
        raise ComplexRootsDetected(f"discriminant {disc:.3e} < 0 for {p}")

    a, b, c = p.c2, p.c1, p.c0
    shift = -a / 3.0
    q_lin = b - a * a / 3.0
    q_const = 2.0 * a**3 / 27.0 - a * b / 3.0 + c

    if q_lin >= 0.0:
        # three real roots with p >= 0 only happens at a (near) triple root
        ys = [-math.copysign(abs(q_const) ** (1.0 / 3.0), q_const)] * 3
    else:
        m = 2.0 * math.sqrt(-q_lin / 3.0)
        denom = q_lin * m
        arg = 3.0 * q_const / denom if denom != 0.0 else 0.0
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        ys = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]

    roots = sorted(_newton_polish(p, y + shift) for y in ys)
    return roots[0], roots[1], roots[2]


def is_hermitian(h: np.ndarray, tol: float = TOL.hermitian) -> bool:
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) < tol)


def check_hermitian(h: np.ndarray, tol: float = TOL.hermitian) -> None:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise NotHermitian("matrix has non-finite entries")
    if not is_hermitian(h, tol):
        dev = np.max(np.abs(h - h.conj().T))
        raise NotHermitian(f"max |H - H^dagger| = {dev:.3e} exceeds {tol:.1e}")


def fix_phase(v: np.ndarray, tie_tol: float = TOL.phase_tie) -> np.ndarray:
    """Rotate a vector so its largest component is real and positive.

    Ties (within ``tie_tol``) resolve to the lowest index.
    """
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - tie_tol)[0])
    if mags[k] == 0.0:
        return v.copy()
    out = v * (mags[k] / v[k])
    out[k] = mags[k]
    return out


def hermitian_eigensystem(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns).

    Each eigenvector carries the ``fix_phase`` convention so repeated calls
    give identical output.
    """
    h = np.asarray(h, dtype=complex)
    check_hermitian(h)
    evals, evecs = np.linalg.eigh(h)
    for k in range(evecs.shape[1]):
        evecs[:, k] = fix_phase(evecs[:, k])
    return evals, evecs


def unitary_exp(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H."""
    h = np.asarray(h, dtype=complex)
    check_hermitian(h)
    if t == 0:
        return np.eye(h.shape[0], dtype=complex)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def spectral_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def unitarity_defect(u: np.ndarray) -> float:
    return spectral_norm(u.conj().T @ u - np.eye(u.shape[0]))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a
