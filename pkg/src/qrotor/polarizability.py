"""Dynamic scalar and vector polarizabilities of the F = 1 ground state.

Two-line model (D1 at omega_1/2, D2 at omega_3/2) with reduced dipole moments
d_1/2 and d_3/2:

    alpha0(w) = d12^2 / (6 hbar (w12 - w)) + d32^2 / (6 hbar (w32 - w))
    alpha1(w) = d12^2 / (3 hbar (w12 - w)) - d32^2 / (6 hbar (w32 - w))

Between the lines alpha1/alpha0 -> 2 approaching D1 and the ratio stays O(1)
across the red-detuned operating window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR, POLARIZABILITY_AU, AtomSpec

# relative detuning below which we refuse to evaluate the perturbative formula
_RESONANCE_EPS = 1e-9


class ResonanceError(ValueError):
    """Raised when the drive frequency sits on one of the atomic lines."""


def _check_resonance(omega, atom: AtomSpec):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("drive frequency must be positive")
    for name, line in (("D1", atom.omega_half), ("D2", atom.omega_threehalf)):
        if np.any(np.abs(omega - line) < _RESONANCE_EPS * line):
            raise ResonanceError(f"drive frequency on the {name} line ({line:.6e} rad/s)")


def alpha0(omega, atom: AtomSpec):
    """Scalar polarizability in SI (C^2 m^2 / J)."""
    _check_resonance(omega, atom)
    omega = np.asarray(omega, dtype=float)
    out = (atom.d_half**2 / (6 * HBAR * (atom.omega_half - omega))
           + atom.d_threehalf**2 / (6 * HBAR * (atom.omega_threehalf - omega)))
    return out if out.ndim else float(out)


def alpha1(omega, atom: AtomSpec):
    """Vector polarizability in SI (C^2 m^2 / J)."""
    _check_resonance(omega, atom)
    omega = np.asarray(omega, dtype=float)
    out = (atom.d_half**2 / (3 * HBAR * (atom.omega_half - omega))
           - atom.d_threehalf**2 / (6 * HBAR * (atom.omega_threehalf - omega)))
    return out if out.ndim else float(out)


def polarizability_ratio(omega, atom: AtomSpec):
    """alpha1 / alpha0 at the given angular frequency."""
    return alpha1(omega, atom) / alpha0(omega, atom)


@dataclass(frozen=True)
class Polarizabilities:
    """Evaluated polarizabilities at one drive frequency."""

    omega: float
    alpha0_si: float
    alpha1_si: float

    @property
    def ratio(self) -> float:
        return self.alpha1_si / self.alpha0_si

    @property
    def alpha0_au(self) -> float:
        """Dimensionless scalar polarizability in atomic units."""
        return self.alpha0_si / POLARIZABILITY_AU

    @property
    def alpha1_au(self) -> float:
        return self.alpha1_si / POLARIZABILITY_AU


def evaluate(omega: float, atom: AtomSpec) -> Polarizabilities:
    return Polarizabilities(omega=float(omega),
                            alpha0_si=alpha0(omega, atom),
                            alpha1_si=alpha1(omega, atom))


def scan(omegas, atom: AtomSpec) -> np.ndarray:
    """Columns (omega, alpha0, alpha1, ratio) for each frequency in omegas."""
    omegas = np.asarray(omegas, dtype=float)
    a0 = np.asarray(alpha0(omegas, atom))
    a1 = np.asarray(alpha1(omegas, atom))
    return np.column_stack([omegas, a0, a1, a1 / a0])
