"""Single-atom spectra in one lattice site.

Good quantum number: zeta = m_F + m_l (total phase winding).  In the radial
dressed basis (chi_+1, chi_0, chi_-1) the sector-zeta Hamiltonian reduces to
three coupled radial channels (hbar = m = lambda_l = 1 internally, energies
converted to recoil units at the interface):

    [-1/2 d^2/dr^2 + 1/(8 r^2) + zeta^2/(2 r^2) + V(r) - B(r)] u1
        + [-zeta/(sqrt2 r^2) - p/sqrt2] u2 + 1/(4 r^2) u3 = E u1
    [-1/2 d^2/dr^2 + 3/(8 r^2) + zeta^2/(2 r^2) + V(r)] u2
        + [-zeta/(sqrt2 r^2) - p/sqrt2] (u1 + u3) = E u2
    [-1/2 d^2/dr^2 + 1/(8 r^2) + zeta^2/(2 r^2) + V(r) + B(r)] u3
        + [-zeta/(sqrt2 r^2) - p/sqrt2] u2 + 1/(4 r^2) u1 = E u3

with B(r) the outward fictitious field and p = g mu_B B_ext the external
Zeeman energy; the p coupling is F_z conjugated into the chi basis.  The sign
pairing of the zeta cross term and the p term fixes the sector label so that
p > 0 favors zeta = +1 (its large-p limit is pure m_F = +1 with no vortex).
The grid is staggered off r = 0 (r_j = (j + 1/2) h) with a Dirichlet wall at
r_max; the 1/r^2 barriers regularize the origin.

A dense 2D Cartesian three-channel oracle on the full hexagonal maps provides
an independent route to the same spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq
from scipy.sparse.linalg import eigsh

from . import lattice
from .constants import AtomSpec, UnitSystem
from .lattice import BeamConfig, FieldMaps
from .spin1 import FX, FY, FZ

_SQRT2 = np.sqrt(2.0)
# natural energy unit (hbar^2 / m lambda^2) per recoil
_NAT_PER_RECOIL = 2 * np.pi**2


@dataclass(frozen=True)
class RadialGrid:
    """Staggered radial grid on (0, r_max], lengths in lambda_l."""

    r_max: float = 0.4
    n: int = 640

    def __post_init__(self):
        if self.r_max <= 0 or self.n < 16:
            raise ValueError("need positive r_max and n >= 16")

    @property
    def spacing(self) -> float:
        return self.r_max / self.n

    @cached_property
    def r(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.spacing


@dataclass(frozen=True)
class SpectrumResult:
    """Sector eigenlevels: energies ascending in recoil units, radial spinors
    normalized to sum_c int |u_c|^2 dr = 1, shape (3, n, k)."""

    zeta: int
    b_ext_mg: float
    energies: np.ndarray
    vectors: np.ndarray

    def n_labels(self) -> np.ndarray:
        """Oscillator-shell labels n = |zeta| + 2 j for sector-internal j."""
        return abs(self.zeta) + 2 * np.arange(len(self.energies))


def radial_hamiltonian(zeta: int, grid: RadialGrid, v_recoil, b_recoil,
                       b_ext_mg: float, zeeman_per_mg: float) -> sp.csc_matrix:
    """Assemble the three-channel sector Hamiltonian (natural units)."""
    r = grid.r
    h = grid.spacing
    inv_r2 = 1.0 / r**2
    v = np.asarray(v_recoil, dtype=float) * _NAT_PER_RECOIL
    b = np.asarray(b_recoil, dtype=float) * _NAT_PER_RECOIL
    p = b_ext_mg * zeeman_per_mg * _NAT_PER_RECOIL

    # Flux-conservative radial kinetic term, symmetrized by u = sqrt(r) psi.
    # The half-integer grid puts the inner flux face exactly at r = 0, so the
    # winding-0 channel (attractive -1/(8 r^2) in the bare u equation) gets the
    # regular u ~ sqrt(r) behaviour without an explicit origin condition.  A
    # naive three-point u'' stencil silently selects a different self-adjoint
    # extension there and misplaces those levels by O(1) at any resolution.
    j = np.arange(grid.n - 1)
    main = np.full(grid.n, 1.0 / h**2)
    off = -(j + 1.0) / (2.0 * h**2 * np.sqrt((j + 0.5) * (j + 1.5)))
    kin = sp.diags([off, main, off], [-1, 0, 1])

    # Centrifugal diagonals absorb the Langer -1/(8 r^2) shift of the flux
    # form: -u''/2 + c/r^2 = kin + (c + 1/8)/r^2 acting on u.
    d_edge = 0.25 * inv_r2 + 0.5 * zeta**2 * inv_r2 + v
    d_mid = 0.5 * inv_r2 + 0.5 * zeta**2 * inv_r2 + v
    c_cross = sp.diags(-zeta * inv_r2 / _SQRT2 - p / _SQRT2)
    c_edge = sp.diags(0.25 * inv_r2)

    h1 = kin + sp.diags(d_edge - b)
    h2 = kin + sp.diags(d_mid)
    h3 = kin + sp.diags(d_edge + b)
    return sp.bmat([[h1, c_cross, c_edge],
                    [c_cross, h2, c_cross],
                    [c_edge, c_cross, h3]], format="csc")


def solve_sector(zeta: int, grid: RadialGrid, v_recoil, b_recoil,
                 b_ext_mg: float, zeeman_per_mg: float,
                 n_levels: int = 4) -> SpectrumResult:
    """Lowest n_levels of the sector, by shift-invert Lanczos."""
    ham = radial_hamiltonian(zeta, grid, v_recoil, b_recoil, b_ext_mg,
                             zeeman_per_mg)
    p = abs(b_ext_mg * zeeman_per_mg) * _NAT_PER_RECOIL
    floor = float(np.min(np.asarray(v_recoil) * _NAT_PER_RECOIL
                         - np.abs(np.asarray(b_recoil)) * _NAT_PER_RECOIL)) - p - 10.0
    v0 = np.full(ham.shape[0], 1.0 / np.sqrt(ham.shape[0]))
    vals, vecs = eigsh(ham, k=n_levels, sigma=floor, which="LM", v0=v0,
                       tol=1e-10)
    order = np.argsort(vals)
    vals = vals[order] / _NAT_PER_RECOIL
    vecs = vecs[:, order].reshape(3, grid.n, n_levels) / np.sqrt(grid.spacing)
    # deterministic overall sign: largest-|amplitude| entry positive
    flat = vecs.reshape(-1, n_levels)
    signs = np.sign(flat[np.argmax(np.abs(flat), axis=0), np.arange(n_levels)])
    signs[signs == 0] = 1.0
    return SpectrumResult(zeta=zeta, b_ext_mg=b_ext_mg, energies=vals,
                          vectors=vecs * signs)


def fz_expectation(result: SpectrumResult, level: int, grid: RadialGrid) -> float:
    """<F_z> of one radial eigenstate (chi-basis off-diagonal form)."""
    u1, u2, u3 = result.vectors[:, :, level]
    val = _SQRT2 * np.sum(np.real(np.conj(u1) * u2 + np.conj(u2) * u3))
    return float(val * grid.spacing)


def site_profiles(grid: RadialGrid, cfg: BeamConfig, alpha0_si: float,
                  alpha1_si: float, atom: AtomSpec, units: UnitSystem):
    """(V(r), B(r)) closed-form radial profiles on the grid, recoil units."""
    return lattice.isotropic_profiles(grid.r, cfg, alpha0_si, alpha1_si, atom,
                                      units)


def level_diagram(sectors, b_values_mg, grid: RadialGrid, v_recoil, b_recoil,
                  zeeman_per_mg: float, n_levels: int = 3):
    """Rows (b_ext_mg, zeta, n_label, energy_recoil) over sectors and fields."""
    rows = []
    for b_mg in b_values_mg:
        for zeta in sectors:
            res = solve_sector(zeta, grid, v_recoil, b_recoil, b_mg,
                               zeeman_per_mg, n_levels)
            for j, e in enumerate(res.energies):
                rows.append((float(b_mg), int(zeta), int(abs(zeta) + 2 * j),
                             float(e)))
    return rows


def _sector_gap(b_mg, grid, v_recoil, b_recoil, zeeman_per_mg):
    """E0(zeta=0) minus the lowest |zeta| = 1 level."""
    e0 = solve_sector(0, grid, v_recoil, b_recoil, b_mg, zeeman_per_mg,
                      n_levels=1).energies[0]
    e_p = solve_sector(1, grid, v_recoil, b_recoil, b_mg, zeeman_per_mg,
                       n_levels=1).energies[0]
    e_m = solve_sector(-1, grid, v_recoil, b_recoil, b_mg, zeeman_per_mg,
                       n_levels=1).energies[0]
    return e0 - min(e_p, e_m), (1 if e_p <= e_m else -1)


def ground_crossing(b_lo_mg: float, b_hi_mg: float, grid: RadialGrid, v_recoil,
                    b_recoil, zeeman_per_mg: float):
    """Field where the zeta = 0 ground level meets the lowest |zeta| = 1 level.

    Returns (b_star_mg, winner_zeta).  Raises ValueError when the gap does not
    change sign over the bracket.
    """
    glo, _ = _sector_gap(b_lo_mg, grid, v_recoil, b_recoil, zeeman_per_mg)
    ghi, winner = _sector_gap(b_hi_mg, grid, v_recoil, b_recoil, zeeman_per_mg)
    if glo * ghi > 0:
        raise ValueError("no ground-level crossing inside the bracket")
    b_star = brentq(
        lambda b: _sector_gap(b, grid, v_recoil, b_recoil, zeeman_per_mg)[0],
        b_lo_mg, b_hi_mg, xtol=1e-3)
    return float(b_star), winner


def crossing_intensity_scan(b_ext_mg: float, intensities_w_cm2, lambda_l: float,
                            alpha0_si: float, alpha1_si: float, atom: AtomSpec,
                            units: UnitSystem, grid: RadialGrid,
                            zeeman_per_mg: float) -> np.ndarray:
    """Gap E(zeta=0) - E(|zeta|=1) versus drive intensity at fixed B_ext.

    Rows (intensity_w_cm2, gap_recoil); the sign change locates the drive
    strength at which the sectors swap.
    """
    rows = []
    for inten in intensities_w_cm2:
        cfg = BeamConfig(intensity_w_cm2=float(inten), lambda_l=lambda_l)
        v_r, b_r = site_profiles(grid, cfg, alpha0_si, alpha1_si, atom, units)
        gap, _ = _sector_gap(b_ext_mg, grid, v_r, b_r, zeeman_per_mg)
        rows.append((float(inten), float(gap)))
    return np.array(rows)


def cartesian_oracle(maps: FieldMaps, b_ext_mg: float, zeeman_per_mg: float,
                     n_levels: int = 6) -> np.ndarray:
    """Lowest levels of the full 2D three-channel problem, recoil units.

    Finite differences on the rendered hexagonal maps with Dirichlet walls;
    independent of the radial reduction and of the isotropic approximation.
    """
    grid = maps.grid
    n = grid.n
    h = grid.spacing
    lap1 = sp.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)],
                    [-1, 0, 1]) / h**2
    eye = sp.identity(n)
    lap2 = sp.kron(lap1, eye) + sp.kron(eye, lap1)
    kin = sp.kron(-lap2 / (4 * np.pi**2), sp.identity(3), format="csr")

    p = b_ext_mg * zeeman_per_mg
    npix = n * n
    blocks = np.zeros((npix, 3, 3), dtype=complex)
    blocks += maps.v.reshape(npix, 1, 1) * np.eye(3)
    blocks -= maps.b[..., 0].reshape(npix, 1, 1) * FX
    blocks -= maps.b[..., 1].reshape(npix, 1, 1) * FY
    blocks -= p * FZ
    local = sp.bsr_matrix((blocks, np.arange(npix), np.arange(npix + 1)),
                          shape=(3 * npix, 3 * npix))

    ham = (kin + local).tocsc()
    floor = float(np.min(maps.v) - np.max(np.abs(maps.b)) - abs(p)) - 5.0
    v0 = np.full(ham.shape[0], 1.0 / np.sqrt(ham.shape[0]), dtype=complex)
    vals = eigsh(ham, k=n_levels, sigma=floor, which="LM", v0=v0, tol=1e-9,
                 return_eigenvectors=False)
    return np.sort(vals.real)
