"""Spin-1 operators and the radial dressed basis.

Component order is m_F = (+1, 0, -1) everywhere.  The chi basis diagonalizes
the radial spin projection F_r = cos(phi) F_x + sin(phi) F_y; chi_{+1}, chi_0,
chi_{-1} are its eigenvectors with eigenvalues +1, 0, -1.
"""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)

FX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQRT2
FY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQRT2
FZ = np.diag([1.0, 0.0, -1.0]).astype(complex)

# F_z expressed in the chi basis: the off-diagonal 1/sqrt2 structure used by the
# radial solver's external-Zeeman coupling.  Conjugation is verified against a
# symbolic oracle in the tests.
FZ_CHI = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQRT2


def chi_vectors(phi):
    """Eigenvectors of F_r at azimuth phi, rows (chi_+1, chi_0, chi_-1).

    Returns shape (3, 3) for scalar phi, or (..., 3, 3) broadcasting over phi.
    """
    phi = np.asarray(phi, dtype=float)
    em = np.exp(-1j * phi)
    ep = np.exp(1j * phi)
    one = np.ones_like(em)
    rows = np.stack([
        np.stack([0.5 * em, one / _SQRT2, 0.5 * ep], axis=-1),
        np.stack([em / _SQRT2, 0 * one, -ep / _SQRT2], axis=-1),
        np.stack([0.5 * em, -one / _SQRT2, 0.5 * ep], axis=-1),
    ], axis=-2)
    return rows


def to_chi_basis(spinor, phi):
    """m_F components -> chi components, a_c = <chi_c | psi>."""
    u = chi_vectors(phi)
    return np.einsum("...cj,...j->...c", np.conj(u), spinor)


def from_chi_basis(coeffs, phi):
    """chi components -> m_F components, psi = sum_c a_c chi_c."""
    u = chi_vectors(phi)
    return np.einsum("...cj,...c->...j", u, coeffs)


def local_spin_expectation(spinor):
    """(Re psi^dag F_x psi, ..., F_z ...) for a single 3-spinor or stack.

    For a normalized spinor this is the local spin direction scaled by its
    length; unnormalized input returns the corresponding spin density.
    """
    spinor = np.asarray(spinor, dtype=complex)
    s1, s0, sm = spinor[..., 0], spinor[..., 1], spinor[..., 2]
    sx = _SQRT2 * np.real(np.conj(s0) * (s1 + sm))
    sy = -_SQRT2 * np.imag(np.conj(s0) * (s1 - sm))
    sz = np.abs(s1) ** 2 - np.abs(sm) ** 2
    return np.stack([sx, sy, sz], axis=-1)
