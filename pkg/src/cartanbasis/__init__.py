"""Basis-gate selection on nonstandard two-qubit Cartan trajectories."""

__version__ = "0.1.0"
