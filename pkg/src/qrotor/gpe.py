"""Spinor mean-field ground states of one lattice site by imaginary time.

Energy functional in recoil units (lengths in lambda_l), component order
m_F = (+1, 0, -1), normalization integral(rho) dA = N:

    E[psi] = integral dA [ (1/4 pi^2) sum_c |grad psi_c|^2 + V rho
             - B_fic . S - p S_z + (c0/2) rho^2 + (c2/2) |S|^2 ]

with rho the total density, S the local spin density, p the linear Zeeman
energy of the bias field along the site axis, and (c0, c2) the per-area
contact couplings.  Minimization is Strang-split imaginary-time propagation:
spectral kinetic half-steps around an exact pointwise exponential of the
frozen local term, using the spin-1 identity (F.n)^3 = F.n to close the
series, with the norm restored after every step.

A simultaneous spatial and spin rotation about the site axis commutes with
every term, so the combined charge zeta = <L_z + F_z>/N is conserved by the
flow up to grid anisotropy.  Warm-started chains therefore stay in their
sector, which lets the sweep follow metastable branches through the level
crossing instead of collapsing onto the global minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .constants import CouplingConstants
from .lattice import FieldMaps, GridSpec

_SQRT2 = np.sqrt(2.0)


class ConvergenceError(RuntimeError):
    """Relaxation ended without meeting the energy or residual targets."""


class DivergenceError(RuntimeError):
    """A non-finite value appeared during propagation."""


class StepSizeError(RuntimeError):
    """Energy rose persistently; the imaginary-time step is too large."""


@dataclass
class SpinorField:
    """Three-component complex field on the square grid."""

    grid: GridSpec
    psi: np.ndarray

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.shape != (3, self.grid.n, self.grid.n):
            raise ValueError("psi must have shape (3, n, n)")

    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.psi) ** 2, axis=0)

    def spin_density(self) -> np.ndarray:
        """Local (S_x, S_y, S_z), shape (3, n, n)."""
        s1, s0, sm = self.psi
        sx = _SQRT2 * np.real(np.conj(s0) * (s1 + sm))
        sy = -_SQRT2 * np.imag(np.conj(s0) * (s1 - sm))
        sz = np.abs(s1) ** 2 - np.abs(sm) ** 2
        return np.stack([sx, sy, sz])

    def atom_number(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.area_element)

    def normalized(self, n_atoms: float) -> "SpinorField":
        scale = np.sqrt(n_atoms / self.atom_number())
        return SpinorField(self.grid, self.psi * scale)

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.psi.copy())

    def boundary_density_ratio(self) -> float:
        """Largest edge density over peak density; box-size sanity check."""
        rho = self.density()
        edge = max(rho[0].max(), rho[-1].max(), rho[:, 0].max(),
                   rho[:, -1].max())
        return float(edge / rho.max())


def ansatz_width(maps: FieldMaps) -> float:
    """Gaussian width (lambda_l) of the harmonic bottom of the sampled well."""
    omega_nat = 2.0 * np.pi**2 * np.sqrt(maps.depth)
    return float(1.0 / np.sqrt(omega_nat))


def sector_ansatz(grid: GridSpec, zeta: int, n_atoms: float, sigma: float,
                  weights=(1.0, 1.0, 1.0)) -> SpinorField:
    """Gaussian trial state of combined rotation charge zeta.

    Component m_F carries orbital winding zeta - m_F, so every component
    contributes the same charge to <L_z + F_z>.
    """
    xx, yy = grid.xy
    zpos = xx + 1j * yy
    env = np.exp(-(xx**2 + yy**2) / (2.0 * sigma**2))
    psi = np.empty((3, grid.n, grid.n), dtype=complex)
    for row, m_f in enumerate((1, 0, -1)):
        m_l = zeta - m_f
        swirl = zpos**m_l if m_l >= 0 else np.conj(zpos) ** (-m_l)
        psi[row] = weights[row] * swirl * env
    return SpinorField(grid, psi).normalized(n_atoms)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-term energies of the functional, recoil units."""

    kinetic: float
    scalar_potential: float
    fictitious: float
    zeeman: float
    interaction_c0: float
    interaction_c2: float

    @property
    def total(self) -> float:
        return (self.kinetic + self.scalar_potential + self.fictitious
                + self.zeeman + self.interaction_c0 + self.interaction_c2)

    def as_dict(self) -> dict:
        out = {name: getattr(self, name) for name in (
            "kinetic", "scalar_potential", "fictitious", "zeeman",
            "interaction_c0", "interaction_c2")}
        out["total"] = self.total
        return out


def energy_terms(field: SpinorField, maps: FieldMaps,
                 couplings: CouplingConstants, b_ext_mg: float,
                 zeeman_per_mg: float) -> EnergyBreakdown:
    """Evaluate each term of the functional on the current field."""
    grid = field.grid
    da = grid.area_element
    psi_k = np.fft.fft2(field.psi, axes=(1, 2))
    kin = np.sum(grid.kinetic_recoil * np.abs(psi_k) ** 2) * da / grid.n**2
    rho = field.density()
    s = field.spin_density()
    p = b_ext_mg * zeeman_per_mg
    pot = np.sum(maps.v * rho) * da
    fic = -np.sum(maps.b[..., 0] * s[0] + maps.b[..., 1] * s[1]) * da
    zee = -p * np.sum(s[2]) * da
    e_c0 = 0.5 * couplings.c0 * np.sum(rho**2) * da
    e_c2 = 0.5 * couplings.c2 * np.sum(s[0] ** 2 + s[1] ** 2 + s[2] ** 2) * da
    return EnergyBreakdown(float(kin), float(pot), float(fic), float(zee),
                           float(e_c0), float(e_c2))


def _spin_matrix_apply(psi: np.ndarray, gx, gy, gz) -> np.ndarray:
    """(F . G) psi pointwise, F the spin-1 matrices in the m_F basis."""
    s1, s0, sm = psi
    gplus = (gx + 1j * gy) / _SQRT2
    gminus = (gx - 1j * gy) / _SQRT2
    out = np.empty_like(psi)
    out[0] = gz * s1 + gminus * s0
    out[1] = gplus * s1 + gminus * sm
    out[2] = gplus * s0 - gz * sm
    return out


def apply_hamiltonian(field: SpinorField, maps: FieldMaps,
                      couplings: CouplingConstants, b_ext_mg: float,
                      zeeman_per_mg: float) -> np.ndarray:
    """H[psi] psi with the mean-field terms evaluated at psi itself."""
    grid = field.grid
    psi = field.psi
    kin = np.fft.ifft2(grid.kinetic_recoil * np.fft.fft2(psi, axes=(1, 2)),
                       axes=(1, 2))
    rho = field.density()
    s = field.spin_density()
    p = b_ext_mg * zeeman_per_mg
    gx = couplings.c2 * s[0] - maps.b[..., 0]
    gy = couplings.c2 * s[1] - maps.b[..., 1]
    gz = couplings.c2 * s[2] - p
    return (kin + (maps.v + couplings.c0 * rho) * psi
            + _spin_matrix_apply(psi, gx, gy, gz))


def chemical_potential(breakdown: EnergyBreakdown, n_atoms: float) -> float:
    """mu per atom; interaction terms enter twice in <H> versus E."""
    return (breakdown.kinetic + breakdown.scalar_potential
            + breakdown.fictitious + breakdown.zeeman
            + 2.0 * breakdown.interaction_c0
            + 2.0 * breakdown.interaction_c2) / n_atoms


def gradient_residual(field: SpinorField, maps: FieldMaps,
                      couplings: CouplingConstants, b_ext_mg: float,
                      zeeman_per_mg: float) -> float:
    """Stationarity defect |H psi - mu psi| / (|mu| |psi|)."""
    hpsi = apply_hamiltonian(field, maps, couplings, b_ext_mg, zeeman_per_mg)
    breakdown = energy_terms(field, maps, couplings, b_ext_mg, zeeman_per_mg)
    mu = chemical_potential(breakdown, field.atom_number())
    num = np.sqrt(np.sum(np.abs(hpsi - mu * field.psi) ** 2))
    den = abs(mu) * np.sqrt(np.sum(np.abs(field.psi) ** 2))
    return float(num / den)


@dataclass(frozen=True)
class SolverParams:
    """Imaginary-time schedule and acceptance thresholds.

    ramp lists (dtau multiplier, max steps) stages; the final stage runs at
    dtau itself and is the only one whose energy plateau counts as
    convergence.  The plateau test is |E(t) - E(t - window)| / window <
    energy_tol * max(|E|, 1), sampled every check_every steps, followed by a
    gradient-residual check.
    """

    dtau: float = 1e-4
    ramp: tuple = ((20.0, 1500), (5.0, 1500), (1.0, 12000))
    energy_tol: float = 1e-10
    window: int = 100
    residual_tol: float = 1e-6
    check_every: int = 50
    polish_steps: int = 3000
    noise_amplitude: float = 0.0
    seed: int = 7

    def __post_init__(self):
        if self.dtau <= 0:
            raise ValueError("dtau must be positive")
        if self.window % self.check_every != 0:
            raise ValueError("window must be a multiple of check_every")
        for mult, steps in self.ramp:
            if mult <= 0 or steps <= 0:
                raise ValueError("ramp entries must be positive")


@dataclass
class RelaxResult:
    field: SpinorField
    breakdown: EnergyBreakdown
    iterations: int
    residual: float
    converged: bool
    energy_history: np.ndarray


def _local_update(psi, v, bx, by, p, couplings, dtau):
    """Exact exp(-dtau [ (V + c0 rho) + F.G ]) psi with rho, S frozen.

    G = (c2 Sx - Bx, c2 Sy - By, c2 Sz - p).  Since (F.n)^3 = F.n for any
    unit n, exp(-a F.G) = 1 - sinh(a g) (F.G)/g + (cosh(a g) - 1) (F.G)^2/g^2
    with g = |G|, which is applied with two matrix actions per point.
    """
    s1, s0, sm = psi
    d1 = np.abs(s1) ** 2
    d0 = np.abs(s0) ** 2
    dm = np.abs(sm) ** 2
    rho = d1 + d0 + dm
    gx = couplings.c2 * _SQRT2 * np.real(np.conj(s0) * (s1 + sm)) - bx
    gy = -couplings.c2 * _SQRT2 * np.imag(np.conj(s0) * (s1 - sm)) - by
    gz = couplings.c2 * (d1 - dm) - p
    g = np.sqrt(gx * gx + gy * gy + gz * gz)
    ag = dtau * g
    gsafe = np.where(g > 0, g, 1.0)
    f1 = np.where(g > 0, np.sinh(ag) / gsafe, dtau)
    f2 = np.where(g > 0, (np.cosh(ag) - 1.0) / gsafe**2, 0.5 * dtau * dtau)
    m1 = _spin_matrix_apply(psi, gx, gy, gz)
    m2 = _spin_matrix_apply(m1, gx, gy, gz)
    scal = np.exp(-dtau * (v + couplings.c0 * rho))
    return scal * (psi - f1 * m1 + f2 * m2)


def relax(field: SpinorField, maps: FieldMaps, couplings: CouplingConstants,
          b_ext_mg: float, zeeman_per_mg: float,
          params: SolverParams = SolverParams()) -> RelaxResult:
    """Propagate in imaginary time until the energy plateaus.

    Adjacent kinetic half-steps are merged inside each monitoring block;
    the block composition equals strict per-step Strang splitting because
    the renormalization is a scalar and commutes with the kinetic factor.
    """
    grid = field.grid
    n_atoms = field.atom_number()
    da = grid.area_element
    psi = field.psi.copy()
    v = maps.v
    bx = maps.b[..., 0]
    by = maps.b[..., 1]
    p = b_ext_mg * zeeman_per_mg
    kin_mult = grid.kinetic_recoil

    history = []
    total_steps = 0
    converged_energy = False
    n_stages = len(params.ramp)

    for stage, (mult, max_steps) in enumerate(params.ramp):
        final_stage = stage == n_stages - 1
        dtau = params.dtau * mult
        half = np.exp(-0.5 * dtau * kin_mult)
        full = half * half
        # non-final stages advance early on a looser plateau
        stage_tol = params.energy_tol if final_stage \
            else max(100.0 * params.energy_tol, 1e-8)
        stage_hist = []
        rises = 0
        done = 0
        while done < max_steps:
            block = min(params.check_every, max_steps - done)
            psi = np.fft.ifft2(half * np.fft.fft2(psi, axes=(1, 2)),
                               axes=(1, 2))
            for i in range(block):
                psi = _local_update(psi, v, bx, by, p, couplings, dtau)
                prop = half if i == block - 1 else full
                psi = np.fft.ifft2(prop * np.fft.fft2(psi, axes=(1, 2)),
                                   axes=(1, 2))
                norm = np.sum(np.abs(psi) ** 2) * da
                psi *= np.sqrt(n_atoms / norm)
            done += block
            total_steps += block
            fld = SpinorField(grid, psi)
            bd = energy_terms(fld, maps, couplings, b_ext_mg, zeeman_per_mg)
            energy = bd.total
            if not np.isfinite(energy):
                bad = [k for k, val in bd.as_dict().items()
                       if not np.isfinite(val)]
                raise DivergenceError(
                    f"non-finite energy terms {bad} after {total_steps} steps "
                    f"(dtau = {dtau:g})")
            history.append((total_steps, energy))
            stage_hist.append((done, energy))
            lag = params.window // params.check_every
            if len(stage_hist) > lag:
                then_done, then_e = stage_hist[-1 - lag]
                slope = abs(energy - then_e) / (done - then_done)
                scale = max(abs(energy), 1.0)
                if energy > then_e + 1e-8 * scale:
                    rises += 1
                    if rises >= 3:
                        raise StepSizeError(
                            f"energy rose over three consecutive windows at "
                            f"dtau = {dtau:g}; reduce the step")
                else:
                    rises = 0
                if slope < stage_tol * scale:
                    if final_stage:
                        converged_energy = True
                    break

    out = SpinorField(grid, psi)
    residual = gradient_residual(out, maps, couplings, b_ext_mg,
                                 zeeman_per_mg)
    if (converged_energy and residual >= params.residual_tol
            and params.polish_steps > 0):
        # the split fixed point carries an O(dtau) bias from the density
        # frozen over each step; descend on the exact gradient instead,
        # whose fixed point solves H psi = mu psi with no splitting error
        psi, n_polish, residual = _polish(
            psi, grid, maps, couplings, b_ext_mg, zeeman_per_mg, n_atoms,
            params.residual_tol, params.polish_steps)
        total_steps += n_polish
        out = SpinorField(grid, psi)
        bd = energy_terms(out, maps, couplings, b_ext_mg, zeeman_per_mg)
        history.append((total_steps, bd.total))
    breakdown = energy_terms(out, maps, couplings, b_ext_mg, zeeman_per_mg)
    converged = converged_energy and residual < params.residual_tol
    return RelaxResult(field=out, breakdown=breakdown,
                       iterations=total_steps, residual=residual,
                       converged=converged,
                       energy_history=np.array(history))


def _polish(psi, grid, maps, couplings, b_ext_mg, zeeman_per_mg, n_atoms,
            residual_tol, max_steps):
    """Preconditioned descent on H psi - mu psi down to the residual target.

    Update psi <- psi - eta (K + shift)^{-1} (H psi - mu psi), renormalized.
    The shift exceeds the local-term maximum minus mu, so every error mode
    contracts; high wavenumbers are removed in one step, and eta backtracks
    on the rare residual increase.
    """
    da = grid.area_element
    kin = grid.kinetic_recoil
    v = maps.v
    bx = maps.b[..., 0]
    by = maps.b[..., 1]
    bmag_max = float(np.sqrt(bx**2 + by**2).max())
    p = b_ext_mg * zeeman_per_mg
    eta = 1.0
    prev = np.inf
    residual = np.inf
    steps = 0
    while steps < max_steps:
        s1, s0, sm = psi
        d1 = np.abs(s1) ** 2
        d0 = np.abs(s0) ** 2
        dm = np.abs(sm) ** 2
        rho = d1 + d0 + dm
        sx = _SQRT2 * np.real(np.conj(s0) * (s1 + sm))
        sy = -_SQRT2 * np.imag(np.conj(s0) * (s1 - sm))
        sz = d1 - dm
        gx = couplings.c2 * sx - bx
        gy = couplings.c2 * sy - by
        gz = couplings.c2 * sz - p
        psi_k = np.fft.fft2(psi, axes=(1, 2))
        hpsi = (np.fft.ifft2(kin * psi_k, axes=(1, 2))
                + (v + couplings.c0 * rho) * psi
                + _spin_matrix_apply(psi, gx, gy, gz))
        e_kin = np.sum(kin * np.abs(psi_k) ** 2) * da / grid.n**2
        e_loc = np.sum((v * rho - bx * sx - by * sy - p * sz
                        + couplings.c0 * rho**2
                        + couplings.c2 * (sx**2 + sy**2 + sz**2)) * da)
        mu = (e_kin + e_loc) / n_atoms
        r = hpsi - mu * psi
        rnorm = np.sqrt(np.sum(np.abs(r) ** 2))
        residual = float(rnorm / (abs(mu) * np.sqrt(np.sum(np.abs(psi) ** 2))))
        if residual < residual_tol:
            break
        eta = eta * 0.5 if residual > prev else min(1.0, eta * 1.2)
        prev = residual
        shift = (float((v + couplings.c0 * rho).max()) + bmag_max + abs(p)
                 + abs(couplings.c2) * float(rho.max()) - mu + 1.0)
        step = np.fft.ifft2(np.fft.fft2(r, axes=(1, 2)) / (kin + shift),
                            axes=(1, 2))
        psi = psi - eta * step
        norm = np.sum(np.abs(psi) ** 2) * da
        psi = psi * np.sqrt(n_atoms / norm)
        steps += 1
    return psi, steps, residual


@dataclass
class GroundStateReport:
    b_ext_mg: float
    winner: RelaxResult
    winner_start: int
    candidates: dict
    boundary_density_ratio: float


def find_ground_state(maps: FieldMaps, couplings: CouplingConstants,
                      b_ext_mg: float, zeeman_per_mg: float,
                      n_atoms: float = 100.0,
                      params: SolverParams = SolverParams(),
                      starts=(0, 1),
                      sigma: Optional[float] = None) -> GroundStateReport:
    """Relax one trial state per rotation sector and keep the lowest.

    The flow cannot leave a sector on its own, so competing minima are
    found by seeding each candidate sector explicitly.
    """
    grid = maps.grid
    if sigma is None:
        sigma = ansatz_width(maps)
    rng = np.random.default_rng(params.seed)
    candidates = {}
    for zeta in starts:
        start = sector_ansatz(grid, zeta, n_atoms, sigma)
        if params.noise_amplitude > 0:
            env = np.exp(-(grid.xy[0] ** 2 + grid.xy[1] ** 2)
                         / (2.0 * sigma**2))
            scale = params.noise_amplitude * np.abs(start.psi).max()
            noise = (rng.standard_normal(start.psi.shape)
                     + 1j * rng.standard_normal(start.psi.shape))
            start = SpinorField(grid, start.psi + scale * noise * env)
            start = start.normalized(n_atoms)
        candidates[zeta] = relax(start, maps, couplings, b_ext_mg,
                                 zeeman_per_mg, params)
    usable = {z: r for z, r in candidates.items() if r.converged}
    if not usable:
        worst = {z: r.residual for z, r in candidates.items()}
        raise ConvergenceError(
            f"no start converged at B = {b_ext_mg} mG; residuals {worst}")
    winner_start = min(usable, key=lambda z: usable[z].breakdown.total)
    winner = usable[winner_start]
    return GroundStateReport(
        b_ext_mg=b_ext_mg, winner=winner, winner_start=winner_start,
        candidates=candidates,
        boundary_density_ratio=winner.field.boundary_density_ratio())


@dataclass
class SweepPoint:
    b_mg: float
    breakdowns: dict
    residuals: dict
    fields: dict
    winner_zeta: int


@dataclass
class SweepResult:
    points: list
    sectors: tuple
    b_star_mg: Optional[float]
    kinetic_cross_mg: Optional[float]


def _warm_params(params: SolverParams) -> SolverParams:
    steps = params.ramp[-1][1]
    return replace(params, ramp=((1.0, steps),))


def transition_sweep(maps: FieldMaps, couplings: CouplingConstants,
                     b_values, zeeman_per_mg: float, n_atoms: float = 100.0,
                     params: SolverParams = SolverParams(), sectors=(0, 1),
                     refine_mg: float = 0.5) -> SweepResult:
    """Follow each sector's branch over an ascending bias-field scan.

    Each sector chain is warm-started from its previous field, so both
    branches exist on either side of the crossing, and the ground-state
    level crossing B* is located on the energy gap between the first two
    sectors, refined by warm-started bisection down to refine_mg.
    """
    b_values = np.asarray(list(b_values), dtype=float)
    if np.any(np.diff(b_values) <= 0):
        raise ValueError("b_values must be strictly increasing")
    sigma = ansatz_width(maps)
    warm = _warm_params(params)
    chains = {}
    points = []
    for k, b_mg in enumerate(b_values):
        breakdowns = {}
        residuals = {}
        fields = {}
        for zeta in sectors:
            start = chains.get(zeta)
            if start is None:
                start = sector_ansatz(maps.grid, zeta, n_atoms, sigma)
                pars = params
            else:
                pars = warm
            res = relax(start, maps, couplings, b_mg, zeeman_per_mg, pars)
            if not res.converged:
                raise ConvergenceError(
                    f"sector {zeta} did not converge at B = {b_mg} mG "
                    f"(residual {res.residual:.3e})")
            chains[zeta] = res.field
            breakdowns[zeta] = res.breakdown
            residuals[zeta] = res.residual
            fields[zeta] = res.field
        winner = min(sectors, key=lambda z: breakdowns[z].total)
        points.append(SweepPoint(b_mg=float(b_mg), breakdowns=breakdowns,
                                 residuals=residuals, fields=fields,
                                 winner_zeta=winner))

    za, zb = sectors[0], sectors[1]
    gaps = np.array([pt.breakdowns[za].total - pt.breakdowns[zb].total
                     for pt in points])
    b_star = _refine_crossing(points, gaps, maps, couplings, zeeman_per_mg,
                              n_atoms, warm, (za, zb), refine_mg)
    kin_gaps = np.array([pt.breakdowns[za].kinetic - pt.breakdowns[zb].kinetic
                         for pt in points])
    kinetic_cross = _interp_zero(b_values, kin_gaps)
    return SweepResult(points=points, sectors=tuple(sectors),
                       b_star_mg=b_star, kinetic_cross_mg=kinetic_cross)


def _interp_zero(xs, ys) -> Optional[float]:
    """First sign-change zero of samples ys(xs), linearly interpolated."""
    for i in range(len(xs) - 1):
        if ys[i] == 0.0:
            return float(xs[i])
        if ys[i] * ys[i + 1] < 0:
            frac = ys[i] / (ys[i] - ys[i + 1])
            return float(xs[i] + frac * (xs[i + 1] - xs[i]))
    return None


def _refine_crossing(points, gaps, maps, couplings, zeeman_per_mg, n_atoms,
                     warm, pair, refine_mg) -> Optional[float]:
    za, zb = pair
    idx = None
    for i in range(len(points) - 1):
        if gaps[i] * gaps[i + 1] < 0:
            idx = i
            break
    if idx is None:
        return None
    lo_b, hi_b = points[idx].b_mg, points[idx + 1].b_mg
    lo_gap, hi_gap = gaps[idx], gaps[idx + 1]
    lo_fields = points[idx].fields
    while hi_b - lo_b > refine_mg:
        mid = 0.5 * (lo_b + hi_b)
        mid_fields = {}
        mid_bd = {}
        for zeta in (za, zb):
            res = relax(lo_fields[zeta], maps, couplings, mid, zeeman_per_mg,
                        warm)
            if not res.converged:
                raise ConvergenceError(
                    f"sector {zeta} did not converge at B = {mid} mG during "
                    f"crossing refinement (residual {res.residual:.3e})")
            mid_fields[zeta] = res.field
            mid_bd[zeta] = res.breakdown
        mid_gap = mid_bd[za].total - mid_bd[zb].total
        if mid_gap == 0.0:
            return float(mid)
        if (mid_gap > 0) == (lo_gap > 0):
            lo_b, lo_gap, lo_fields = mid, mid_gap, mid_fields
        else:
            hi_b, hi_gap = mid, mid_gap
    return float(lo_b + (hi_b - lo_b) * lo_gap / (lo_gap - hi_gap))
