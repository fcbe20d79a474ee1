"""Six-beam spin-dependent lattice fields for a single site.

Six linearly polarized beams propagate in the x-y plane at 60 degree spacing,
each polarization tilted out of plane, giving the positive-frequency envelope

    E(r) = (E_0/3) sum_n (e_z + qhat_n x e_z) exp(i q_n . r),
    qhat_n = -(cos(n pi/3), sin(n pi/3), 0),  |q_n| = 2 pi / lambda_l.

The scalar light shift is V = -(alpha0/4) E* . E and the fictitious magnetic
field couples as -g mu_B B_fic . F with g mu_B B_fic given by the vector-shift
combination of alpha1 and i E* x E.  The z component of B_fic cancels exactly
by the hexagonal symmetry.  Near the center the field is radial; we orient it
outward for alpha1 > 0, which matches the closed-form radial profile below.
(The raw combination i E* x E evaluates to the inward orientation; the two
differ by a global spin rotation exp(-i pi F_z) and give identical spectra and
m_F-resolved observables.)

Angular averages have closed forms in Bessel functions (r in lambda_l):

    V(r)  = -(alpha0 E0^2 / 6) [2 + 3 J0(2 pi r) + J0(2 sqrt3 pi r)]
    B(r)  = (alpha1 E0^2 / (3 (2I+1))) [J1(2 pi r) + J1(4 pi r)
                                        + sqrt3 J1(2 sqrt3 pi r)]

All returned energies are in recoil units, lengths in lambda_l.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import j0, j1

from .constants import EPSILON_0, SPEED_OF_LIGHT, AtomSpec, UnitSystem

# residues of the construction (imaginary part of B, z component) must stay
# below this fraction of the field scale
_RESIDUE_TOL = 1e-12

# one lattice cell: neighboring sites sit 2/sqrt(3) lambda_l apart
CELL_PERIOD = 2.0 / np.sqrt(3.0)

_N_BEAMS = 6
_THETAS = np.arange(1, _N_BEAMS + 1) * np.pi / 3.0
# propagation directions (unit) and transverse polarization components
QHAT = -np.stack([np.cos(_THETAS), np.sin(_THETAS)], axis=1)
_POL = np.stack([-np.sin(_THETAS), np.cos(_THETAS), np.ones(_N_BEAMS)], axis=1)


class FieldConsistencyError(RuntimeError):
    """Internal symmetry residue of the field construction too large."""


@dataclass(frozen=True)
class BeamConfig:
    """Lattice drive: intensity per beam direction and wavelength."""

    intensity_w_cm2: float = 70.0
    lambda_l: float = 795.456e-9

    def __post_init__(self):
        if self.intensity_w_cm2 < 0:
            raise ValueError("intensity must be nonnegative")
        if self.lambda_l <= 0:
            raise ValueError("wavelength must be positive")

    @property
    def e0_squared(self) -> float:
        """Single-beam field strength squared, E0^2 = 2 I / (c eps0), SI."""
        return 2.0 * self.intensity_w_cm2 * 1e4 / (SPEED_OF_LIGHT * EPSILON_0)


@dataclass(frozen=True)
class GridSpec:
    """Square periodic box, side length in lambda_l, n x n points.

    Coordinates are cell-centered on the site: x_i = (i - n//2) h with
    h = length / n, so the origin is a grid point for even n.
    """

    length: float = 0.75
    n: int = 256

    def __post_init__(self):
        if self.length <= 0 or self.n < 8:
            raise ValueError("need positive box length and n >= 8")

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @cached_property
    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.spacing

    @cached_property
    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    @cached_property
    def kinetic_recoil(self) -> np.ndarray:
        """Spectral kinetic energy: a plane wave with f cycles per lambda_l
        carries f^2 recoil, so the multiplier is fx^2 + fy^2."""
        f = np.fft.fftfreq(self.n, d=self.spacing)
        return f[:, None] ** 2 + f[None, :] ** 2

    @property
    def area_element(self) -> float:
        return self.spacing**2


def envelope(r, cfg: BeamConfig) -> np.ndarray:
    """Complex field envelope in units of E_0 at positions r (..., 2)."""
    r = np.asarray(r, dtype=float)
    phases = np.exp(2j * np.pi * np.tensordot(r, QHAT.T, axes=([-1], [0])))
    return np.tensordot(phases, _POL, axes=([-1], [0])) / 3.0


def scalar_potential(r, cfg: BeamConfig, alpha0_si: float, units: UnitSystem):
    """Scalar light shift -(alpha0/4) |E|^2 in recoil units."""
    e = envelope(r, cfg)
    intensity = np.sum(np.abs(e) ** 2, axis=-1)
    return -(alpha0_si / 4.0) * cfg.e0_squared * intensity / units.recoil_energy


def fictitious_field(r, cfg: BeamConfig, alpha1_si: float, atom: AtomSpec,
                     units: UnitSystem) -> np.ndarray:
    """In-plane g mu_B B_fic as energy, recoil units, shape (..., 2).

    Oriented radially outward near the center for alpha1 > 0.  Raises
    FieldConsistencyError if the z component or the imaginary residue of the
    construction exceeds 1e-12 of the field scale.
    """
    e = envelope(r, cfg)
    w = np.cross(np.conj(e), e)  # purely imaginary 3-vector
    coupling = alpha1_si * cfg.e0_squared / (4.0 * (2 * atom.nuclear_spin + 1))
    scale = abs(coupling) / units.recoil_energy + 1e-300
    b = np.imag(w) * coupling / units.recoil_energy
    residue = np.max(np.abs(np.real(w))) * abs(coupling) / units.recoil_energy
    if residue > _RESIDUE_TOL * scale:
        raise FieldConsistencyError(f"real residue of E* x E: {residue:.3e}")
    if np.max(np.abs(b[..., 2])) > _RESIDUE_TOL * scale:
        raise FieldConsistencyError("fictitious field acquired a z component")
    return b[..., :2]


def isotropic_profiles(r, cfg: BeamConfig, alpha0_si: float, alpha1_si: float,
                       atom: AtomSpec, units: UnitSystem):
    """Angular-average closed forms (V(r), B(r)) in recoil units."""
    r = np.asarray(r, dtype=float)
    x = 2 * np.pi * r
    depth = alpha0_si * cfg.e0_squared / units.recoil_energy
    v = -(depth / 6.0) * (2.0 + 3.0 * j0(x) + j0(np.sqrt(3.0) * x))
    bpref = alpha1_si * cfg.e0_squared / (3.0 * (2 * atom.nuclear_spin + 1))
    b = (bpref / units.recoil_energy) * (
        j1(x) + j1(2.0 * x) + np.sqrt(3.0) * j1(np.sqrt(3.0) * x))
    return v, b


def characteristic_fictitious_field(cfg: BeamConfig, alpha1_si: float,
                                    atom: AtomSpec, units: UnitSystem) -> float:
    """Coupling scale g mu_B B_fic = alpha1 E0^2 / (4 (2I+1)), recoil units.

    This is the scale against which the critical external field is compared;
    it is proportional to the drive intensity.
    """
    return (alpha1_si * cfg.e0_squared / (4.0 * (2 * atom.nuclear_spin + 1))
            / units.recoil_energy)


def max_fictitious_field(cfg: BeamConfig, alpha1_si: float, atom: AtomSpec,
                         units: UnitSystem) -> tuple[float, float]:
    """(max_r B(r), argmax r) of the isotropic radial profile inside the cell."""

    def neg_b(rr):
        return -isotropic_profiles(rr, cfg, 1.0, alpha1_si, atom, units)[1]

    res = minimize_scalar(neg_b, bounds=(1e-4, CELL_PERIOD / 2), method="bounded",
                          options={"xatol": 1e-10})
    return -res.fun, res.x


def trap_frequency(cfg: BeamConfig, alpha0_si: float, units: UnitSystem) -> float:
    """Harmonic level spacing of the site bottom, recoil units.

    Expanding the isotropic well, V(r) - V(0) = (alpha0 E0^2) pi^2 r^2, which
    makes hbar*omega = sqrt(alpha0 E0^2) in recoil units.
    """
    depth = alpha0_si * cfg.e0_squared / units.recoil_energy
    return float(np.sqrt(depth))


def harmonic_length(cfg: BeamConfig, alpha0_si: float, units: UnitSystem) -> float:
    """Ground-state Gaussian width sigma in lambda_l for the harmonic bottom."""
    # omega in natural units (hbar = m = lambda_l = 1) is 2 pi^2 * (spacing in
    # recoil); sigma = 1/sqrt(omega)
    omega_nat = 2 * np.pi**2 * trap_frequency(cfg, alpha0_si, units)
    return float(1.0 / np.sqrt(omega_nat))


@dataclass(frozen=True)
class FieldMaps:
    """Stark potential and fictitious field sampled on a grid.

    v has shape (n, n); b has shape (n, n, 2), both recoil units, indexed
    [ix, iy] with coordinates grid.axis.
    """

    grid: GridSpec
    v: np.ndarray
    b: np.ndarray
    cfg: BeamConfig = field(default=None)

    @property
    def depth(self) -> float:
        return float(-np.min(self.v))


def render_field_maps(cfg: BeamConfig, grid: GridSpec, alpha0_si: float,
                      alpha1_si: float, atom: AtomSpec,
                      units: UnitSystem) -> FieldMaps:
    """Sample V and B_fic on the grid.  Warns if the box spans more than one
    lattice cell."""
    if grid.length > CELL_PERIOD:
        warnings.warn("grid covers more than one lattice cell; the single-site "
                      "treatment is questionable", stacklevel=2)
    xx, yy = grid.xy
    r = np.stack([xx, yy], axis=-1)
    v = scalar_potential(r, cfg, alpha0_si, units)
    b = fictitious_field(r, cfg, alpha1_si, atom, units)
    return FieldMaps(grid=grid, v=v, b=b, cfg=cfg)


def write_field_maps(path, maps: FieldMaps, header_lines=()):
    """Text dump, one record per grid point: x y V Bx By."""
    xx, yy = maps.grid.xy
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("# columns: x y V Bx By\n")
        cols = np.column_stack([xx.ravel(), yy.ravel(), maps.v.ravel(),
                                maps.b[..., 0].ravel(), maps.b[..., 1].ravel()])
        np.savetxt(fh, cols, fmt="%.12g")


def read_field_maps(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of write_field_maps: (xy (m,2), V (m,), B (m,2)) records."""
    data = np.loadtxt(path)
    return data[:, :2], data[:, 2], data[:, 3:5]
