"""Diagnostics of spinor fields: populations, angular momenta, windings.

The rotation charge of a state splits into an orbital part, measured
spectrally per component, and the spin part from the component populations;
their sum per atom is the conserved sector label zeta.  Phase windings are
read off a small loop around the site center and are defined only where the
component amplitude on the loop is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .gpe import SpinorField


class UndefinedWindingError(RuntimeError):
    """Component amplitude vanishes on the sampling loop."""


def populations(field: SpinorField) -> np.ndarray:
    """Atoms per component, order m_F = (+1, 0, -1)."""
    da = field.grid.area_element
    return np.sum(np.abs(field.psi) ** 2, axis=(1, 2)) * da


def fz_mean(field: SpinorField) -> float:
    """Spin projection per atom along the site axis."""
    n = populations(field)
    return float((n[0] - n[2]) / n.sum())


def _gradient_spectral(comp: np.ndarray, grid) -> tuple[np.ndarray, np.ndarray]:
    f = np.fft.fftfreq(grid.n, d=grid.spacing)
    ck = np.fft.fft2(comp)
    dx = np.fft.ifft2(2j * np.pi * f[:, None] * ck)
    dy = np.fft.ifft2(2j * np.pi * f[None, :] * ck)
    return dx, dy


def orbital_lz(field: SpinorField) -> np.ndarray:
    """Per-component <L_z> per atom of that component (nan if empty).

    L_z = -i (x d/dy - y d/dx), derivatives evaluated spectrally.
    """
    grid = field.grid
    xx, yy = grid.xy
    da = grid.area_element
    out = np.empty(3)
    for c in range(3):
        comp = field.psi[c]
        norm = np.sum(np.abs(comp) ** 2) * da
        if norm <= 0:
            out[c] = np.nan
            continue
        dx, dy = _gradient_spectral(comp, grid)
        lz = np.sum(np.conj(comp) * (-1j) * (xx * dy - yy * dx)) * da
        out[c] = lz.real / norm
    return out


def zeta_measured(field: SpinorField) -> float:
    """Combined charge <L_z + F_z> per atom; the conserved sector label."""
    n = populations(field)
    lz = np.where(n > 0, np.nan_to_num(orbital_lz(field)), 0.0)
    m_f = np.array([1.0, 0.0, -1.0])
    return float(np.sum(n * (lz + m_f)) / n.sum())


def abs_orbital_lz(field: SpinorField) -> float:
    """Population-weighted modulus of the component angular momenta."""
    n = populations(field)
    lz = np.where(n > 0, np.nan_to_num(orbital_lz(field)), 0.0)
    return float(np.sum(n * np.abs(lz)) / n.sum())


def winding_number(field: SpinorField, component: int, radius: float = 0.05,
                   n_samples: int = 720,
                   threshold: float = 1e-6) -> int:
    """Phase winding of one component around the site center.

    Samples the component on a loop of the given radius (bilinear
    interpolation) and accumulates wrapped phase differences.  Raises
    UndefinedWindingError if the amplitude anywhere on the loop falls below
    threshold times the component peak.
    """
    grid = field.grid
    comp = field.psi[component]
    theta = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    ix = radius * np.cos(theta) / grid.spacing + grid.n // 2
    iy = radius * np.sin(theta) / grid.spacing + grid.n // 2
    vals = (ndimage.map_coordinates(comp.real, [ix, iy], order=1)
            + 1j * ndimage.map_coordinates(comp.imag, [ix, iy], order=1))
    peak = np.abs(comp).max()
    if peak == 0 or np.abs(vals).min() < threshold * peak:
        raise UndefinedWindingError(
            f"component {component} amplitude vanishes on the r = {radius} "
            f"loop; winding undefined")
    steps = np.angle(np.roll(vals, -1) / vals)
    total = steps.sum() / (2.0 * np.pi)
    wind = int(np.round(total))
    if abs(total - wind) > 0.05:
        raise UndefinedWindingError(
            f"non-integer accumulated phase {total:.3f} on the r = {radius} "
            f"loop for component {component}")
    return wind


def windings(field: SpinorField, radius: float = 0.05) -> tuple:
    """Winding of each component, None where undefined."""
    out = []
    for c in range(3):
        try:
            out.append(winding_number(field, c, radius))
        except UndefinedWindingError:
            out.append(None)
    return tuple(out)


def spin_texture(field: SpinorField, extent: float = 0.077):
    """Local spin direction and density records on [0, extent]^2.

    Returns (m, 6) rows x, y, Fx, Fy, Fz, density with the spin components
    normalized by the local density (zero where the density vanishes).
    """
    grid = field.grid
    xx, yy = grid.xy
    mask = (xx >= 0) & (xx <= extent) & (yy >= 0) & (yy <= extent)
    rho = field.density()
    s = field.spin_density()
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(rho > 0, s / rho, 0.0)
    cols = [xx[mask], yy[mask], direction[0][mask], direction[1][mask],
            direction[2][mask], rho[mask]]
    return np.column_stack(cols)


@dataclass(frozen=True)
class ObservableBundle:
    """Standard diagnostics of one relaxed state."""

    populations: np.ndarray
    fz_mean: float
    orbital_lz: np.ndarray
    abs_orbital_lz: float
    zeta: float
    windings: tuple

    @classmethod
    def from_field(cls, field: SpinorField,
                   winding_radius: float = 0.05) -> "ObservableBundle":
        return cls(populations=populations(field), fz_mean=fz_mean(field),
                   orbital_lz=orbital_lz(field),
                   abs_orbital_lz=abs_orbital_lz(field),
                   zeta=zeta_measured(field),
                   windings=windings(field, winding_radius))
