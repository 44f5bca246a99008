"""Numerical tolerances shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-9
    geometry: float = 1e-9
    reconstruction: float = 1e-8
    region: float = 1e-6
    synthesis: float = 1e-8
    leakage: float = 0.05


TOL = Tolerances()
