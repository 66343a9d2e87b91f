"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    unit_norm: float = 1e-9
    cubic_discriminant: float = 1e-12
    degenerate_root: float = 1e-10
    eigen_residual: float = 1e-10
    phase_tie: float = 1e-12
    unitarity: float = 1e-8


TOL = Tolerances()
