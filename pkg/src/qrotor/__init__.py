"""Spin-1 quantum rotor in one site of a spin-dependent optical lattice."""

__version__ = "0.1.0"
