"""Atomic data, unit system, and dimensionless coupling constants.

All downstream modules work in lattice units: lengths in the laser wavelength
lambda_l, energies in the single-photon recoil E_rec = (2 pi hbar)^2 / (2 m
lambda_l^2).  This module is the only place raw SI constants appear; everything
else consumes the dimensionless numbers produced here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants as _sc

HBAR = _sc.hbar
SPEED_OF_LIGHT = _sc.c
EPSILON_0 = _sc.epsilon_0
BOHR_MAGNETON = _sc.physical_constants["Bohr magneton"][0]
BOHR_RADIUS = _sc.physical_constants["Bohr radius"][0]
ELEMENTARY_CHARGE = _sc.e
ATOMIC_MASS = _sc.physical_constants["atomic mass constant"][0]

# atomic unit of polarizability, e^2 a0^2 / E_h, in SI C^2 m^2 / J
POLARIZABILITY_AU = (ELEMENTARY_CHARGE**2 * BOHR_RADIUS**2
                     / _sc.physical_constants["Hartree energy"][0])


@dataclass(frozen=True)
class AtomSpec:
    """Ground-state alkali data needed by the field and interaction modules.

    Dipole moments are reduced matrix elements in SI (C m); line frequencies are
    angular (rad/s).  Scattering lengths are in meters.
    """

    mass: float
    nuclear_spin: float
    g_factor: float
    a0_scatter: float
    a2_scatter: float
    d_half: float
    d_threehalf: float
    omega_half: float
    omega_threehalf: float

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.omega_half <= 0 or self.omega_threehalf <= 0:
            raise ValueError("line frequencies must be positive")


def rb87(a0_scatter: float = 5.387e-9, a2_scatter: float = 5.313e-9,
         g_factor: float = 0.5) -> AtomSpec:
    """87Rb with the D1/D2 line data used throughout.

    The hyperfine g factor is 1/2 (F = 1 manifold) and the nuclear spin 3/2.
    Scattering lengths may be overridden, e.g. a0 = a2 to switch off the
    spin-dependent interaction.
    """
    d_unit = ELEMENTARY_CHARGE * BOHR_RADIUS
    return AtomSpec(
        mass=86.909180531 * ATOMIC_MASS,
        nuclear_spin=1.5,
        g_factor=g_factor,
        a0_scatter=a0_scatter,
        a2_scatter=a2_scatter,
        d_half=2.992 * d_unit,
        d_threehalf=4.227 * d_unit,
        omega_half=2 * np.pi * SPEED_OF_LIGHT / 794.979e-9,
        omega_threehalf=2 * np.pi * SPEED_OF_LIGHT / 780.241e-9,
    )


@dataclass(frozen=True)
class UnitSystem:
    """Recoil units for a given lattice wavelength and atomic mass."""

    lambda_l: float  # m
    mass: float      # kg

    def __post_init__(self):
        if self.lambda_l <= 0 or self.mass <= 0:
            raise ValueError("wavelength and mass must be positive")

    @property
    def recoil_energy(self) -> float:
        """E_rec in joules, (2 pi hbar)^2 / (2 m lambda^2)."""
        return (2 * np.pi * HBAR) ** 2 / (2 * self.mass * self.lambda_l**2)

    def energy_to_recoil(self, energy_si: float) -> float:
        return energy_si / self.recoil_energy

    def recoil_to_si(self, energy_recoil: float) -> float:
        return energy_recoil * self.recoil_energy

    def length_to_lattice(self, length_si: float) -> float:
        return length_si / self.lambda_l

    def lattice_to_si(self, length_lattice: float) -> float:
        return length_lattice * self.lambda_l


def units_for(atom: AtomSpec, lambda_l: float) -> UnitSystem:
    return UnitSystem(lambda_l=lambda_l, mass=atom.mass)


def zeeman_energy_per_mG(atom: AtomSpec, units: UnitSystem) -> float:
    """Linear Zeeman energy g mu_B * (1 mG) in recoil units.

    1 mG = 1e-7 T.  For 87Rb at lambda_l = 795.456 nm this is 0.19289 recoil
    per milligauss.
    """
    return atom.g_factor * BOHR_MAGNETON * 1e-7 / units.recoil_energy


@dataclass(frozen=True)
class CouplingConstants:
    """Dimensionless 2D contact couplings, recoil * lambda_l^2 units."""

    c0: float
    c2: float


def contact_couplings(atom: AtomSpec, units: UnitSystem) -> CouplingConstants:
    """Spin-independent and spin-dependent 2D couplings.

    3D couplings c0 = 4 pi hbar^2 (a0 + 2 a2) / 3m and
    c2 = 4 pi hbar^2 (a2 - a0) / 3m, reduced to 2D by dividing by the vertical
    extent of the cloud, taken to be lambda_l.
    """
    pref = 4 * np.pi * HBAR**2 / (3 * atom.mass)
    c0_3d = pref * (atom.a0_scatter + 2 * atom.a2_scatter)
    c2_3d = pref * (atom.a2_scatter - atom.a0_scatter)
    scale = units.recoil_energy * units.lambda_l**3
    return CouplingConstants(c0=c0_3d / scale, c2=c2_3d / scale)
