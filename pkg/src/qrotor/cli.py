"""Command-line driver: config parsing, subcommands, file output.

Subcommands: potential | polarizability | single-atom | ground | sweep.
Configuration is flat INI (sections [atom] [laser] [grid] [radial] [solver]
[run]); every value has a compiled-in default, so a config file is optional.
Precedence for the output directory and thread count: command-line flag,
then environment (QROTOR_OUT, QROTOR_THREADS), then config, then default.

Every output file starts with a header carrying the tool version, the
12-hex digest of the resolved configuration, and the resolved keys
themselves.  Numbers are written with %.12g and no timestamps appear, so
reruns with the same config are byte-identical.  Exit code 0 means every
requested solve converged; convergence failures exit 1 after writing a
diagnostics file.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field

__all__ = ["main"]

_VERSION = "0.1.0"

_DEFAULTS = {
    "atom": {
        "a0_scatter_nm": "5.387",
        "a2_scatter_nm": "5.313",
        "g_factor": "0.5",
    },
    "laser": {
        "intensity_w_cm2": "70",
        "lambda_l_nm": "795.456",
    },
    "grid": {
        "length": "0.75",
        "n": "256",
    },
    "radial": {
        "r_max": "0.4",
        "n": "640",
    },
    "solver": {
        "dtau": "0.0001",
        "ramp": "20x1500,5x1500,1x12000",
        "energy_tol": "1e-10",
        "window": "100",
        "residual_tol": "1e-06",
        "check_every": "50",
        "polish_steps": "3000",
        "noise_amplitude": "0",
    },
    "run": {
        "b_mg": "0:100:5",
        "n_atoms": "100",
        "seed": "0",
        "sectors": "0,1",
        "levels": "4",
        "scan": "",
        "out": ".",
    },
}


def _parse_b_values(text: str):
    """Either 'start:stop:step' (inclusive) or a comma list, in mG."""
    text = text.strip()
    if ":" in text:
        lo, hi, step = (float(tok) for tok in text.split(":"))
        if step <= 0 or hi < lo:
            raise ValueError(f"bad field range {text!r}")
        count = int(round((hi - lo) / step))
        vals = [lo + k * step for k in range(count + 1)]
        return [v for v in vals if v <= hi + 1e-9 * max(1.0, abs(hi))]
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_ramp(text: str):
    stages = []
    for tok in text.split(","):
        mult, steps = tok.strip().split("x")
        stages.append((float(mult), int(steps)))
    return tuple(stages)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass
class RunConfig:
    """Resolved configuration; canonical text form feeds the header hash."""

    values: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path=None, overrides=()):
        values = {s: dict(kv) for s, kv in _DEFAULTS.items()}
        if path is not None:
            parser = configparser.ConfigParser()
            with open(path) as fh:
                parser.read_file(fh)
            for section in parser.sections():
                if section not in values:
                    raise ValueError(f"unknown config section [{section}]")
                for key, val in parser.items(section):
                    if key not in values[section]:
                        raise ValueError(
                            f"unknown config key {key!r} in [{section}]")
                    values[section][key] = val.strip()
        for section, key, val in overrides:
            values[section][key] = str(val)
        cfg = cls(values=values)
        cfg.validate()
        return cfg

    def get(self, section: str, key: str) -> str:
        return self.values[section][key]

    def getfloat(self, section: str, key: str) -> float:
        return float(self.get(section, key))

    def getint(self, section: str, key: str) -> int:
        return int(self.get(section, key))

    def validate(self):
        for sec, key in (("laser", "intensity_w_cm2"), ("laser", "lambda_l_nm"),
                         ("grid", "length"), ("radial", "r_max"),
                         ("run", "n_atoms"), ("atom", "a0_scatter_nm"),
                         ("atom", "a2_scatter_nm"), ("atom", "g_factor")):
            if self.getfloat(sec, key) <= 0:
                raise ValueError(f"[{sec}] {key} must be positive")
        if self.getint("grid", "n") < 8:
            raise ValueError("[grid] n must be at least 8")
        if self.getint("radial", "n") < 16:
            raise ValueError("[radial] n must be at least 16")
        if self.getint("run", "levels") < 1:
            raise ValueError("[run] levels must be at least 1")
        if self.getfloat("solver", "dtau") <= 0:
            raise ValueError("[solver] dtau must be positive")
        if self.getint("solver", "polish_steps") < 0:
            raise ValueError("[solver] polish_steps must be nonnegative")
        if self.getfloat("solver", "noise_amplitude") < 0:
            raise ValueError("[solver] noise_amplitude must be nonnegative")
        window = self.getint("solver", "window")
        check = self.getint("solver", "check_every")
        if check <= 0 or window % check != 0:
            raise ValueError("[solver] window must be a positive multiple of "
                             "check_every")
        b_vals = _parse_b_values(self.get("run", "b_mg"))
        if sorted(b_vals) != b_vals:
            raise ValueError("b_mg values must be monotone increasing")
        _parse_ramp(self.get("solver", "ramp"))

    def canonical_text(self) -> str:
        out = io.StringIO()
        for section in sorted(self.values):
            out.write(f"[{section}]\n")
            for key in sorted(self.values[section]):
                out.write(f"{key} = {self.values[section][key]}\n")
            out.write("\n")
        return out.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:12]

    def header_lines(self):
        lines = [f"qrotor {_VERSION}", f"config sha256 {self.digest()}"]
        for section in sorted(self.values):
            for key in sorted(self.values[section]):
                lines.append(f"{section}.{key} = {self.values[section][key]}")
        return lines


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrotor",
        description="Spin-1 lattice-site rotor: fields, spectra, mean-field "
                    "ground states")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="INI config file (defaults compiled in)")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (overrides QROTOR_OUT)")
    parser.add_argument("--threads", type=int, default=None,
                        help="numerical library threads "
                             "(overrides QROTOR_THREADS)")
    parser.add_argument("--seed", type=int, default=None,
                        help="noise seed (overrides [run] seed)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("potential", help="dump field maps and radial profiles")
    pol = sub.add_parser("polarizability", help="scalar/vector shift scan")
    pol.add_argument("--scan", metavar="NM_LO:NM_HI:NPTS", default=None,
                     help="wavelength scan; default single point at the "
                          "lattice wavelength")
    sub.add_parser("single-atom", help="sector level diagram over the "
                                       "field range")
    sub.add_parser("ground", help="mean-field ground states at each field")
    sub.add_parser("sweep", help="two-sector transition sweep and crossing")
    return parser


def _resolve_out_dir(args, cfg: RunConfig) -> str:
    if args.out is not None:
        return args.out
    env = os.environ.get("QROTOR_OUT")
    if env:
        return env
    return cfg.get("run", "out")


def _apply_threads(args):
    threads = args.threads
    if threads is None:
        env = os.environ.get("QROTOR_THREADS")
        threads = int(env) if env else None
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be >= 1")
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)


def _write_table(path, header_lines, columns, rows, trailer_lines=()):
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# columns: {columns}\n")
        for row in rows:
            fh.write(" ".join(_fmt(float(x)) for x in row) + "\n")
        for line in trailer_lines:
            fh.write(f"# {line}\n")


class _Workspace:
    """Physics objects shared by the subcommands, built from one config."""

    def __init__(self, cfg: RunConfig):
        import numpy as np
        from . import constants, lattice, polarizability

        self.np = np
        self.cfg = cfg
        self.atom = constants.rb87(
            a0_scatter=cfg.getfloat("atom", "a0_scatter_nm") * 1e-9,
            a2_scatter=cfg.getfloat("atom", "a2_scatter_nm") * 1e-9,
            g_factor=cfg.getfloat("atom", "g_factor"))
        self.beams = lattice.BeamConfig(
            intensity_w_cm2=cfg.getfloat("laser", "intensity_w_cm2"),
            lambda_l=cfg.getfloat("laser", "lambda_l_nm") * 1e-9)
        self.units = constants.units_for(self.atom, self.beams.lambda_l)
        self.omega_l = (2.0 * np.pi * constants.SPEED_OF_LIGHT
                        / self.beams.lambda_l)
        self.pol = polarizability.evaluate(self.omega_l, self.atom)
        self.zeeman_per_mg = constants.zeeman_energy_per_mG(self.atom,
                                                            self.units)
        self.couplings = constants.contact_couplings(self.atom, self.units)
        self.grid = lattice.GridSpec(length=cfg.getfloat("grid", "length"),
                                     n=cfg.getint("grid", "n"))
        self.b_values = _parse_b_values(cfg.get("run", "b_mg"))
        self.sectors = tuple(int(tok) for tok in
                             cfg.get("run", "sectors").split(","))

    def field_maps(self):
        from . import lattice
        return lattice.render_field_maps(self.beams, self.grid,
                                         self.pol.alpha0_si,
                                         self.pol.alpha1_si, self.atom,
                                         self.units)

    def solver_params(self, seed):
        from . import gpe
        cfg = self.cfg
        return gpe.SolverParams(
            dtau=cfg.getfloat("solver", "dtau"),
            ramp=_parse_ramp(cfg.get("solver", "ramp")),
            energy_tol=cfg.getfloat("solver", "energy_tol"),
            window=cfg.getint("solver", "window"),
            residual_tol=cfg.getfloat("solver", "residual_tol"),
            check_every=cfg.getint("solver", "check_every"),
            polish_steps=cfg.getint("solver", "polish_steps"),
            noise_amplitude=cfg.getfloat("solver", "noise_amplitude"),
            seed=seed)


def _cmd_potential(ws: _Workspace, out_dir: str, header):
    from . import lattice
    np = ws.np
    maps = ws.field_maps()
    lattice.write_field_maps(os.path.join(out_dir, "fields.dat"), maps,
                             header_lines=header)
    r = np.linspace(0.0, ws.grid.length / 2.0, 401)
    v, b = lattice.isotropic_profiles(r, ws.beams, ws.pol.alpha0_si,
                                      ws.pol.alpha1_si, ws.atom, ws.units)
    _write_table(os.path.join(out_dir, "profile.csv"), header,
                 "r_lambda v_recoil b_recoil", zip(r, v, b))
    return True


def _cmd_polarizability(ws: _Workspace, out_dir: str, header, scan):
    from . import constants, polarizability
    np = ws.np
    if scan:
        lo_nm, hi_nm, npts = scan.split(":")
        lams = np.linspace(float(lo_nm), float(hi_nm), int(npts)) * 1e-9
        omegas = 2.0 * np.pi * constants.SPEED_OF_LIGHT / lams
    else:
        omegas = np.array([ws.omega_l])
    rows = polarizability.scan(omegas, ws.atom)
    _write_table(os.path.join(out_dir, "polarizability.csv"), header,
                 "omega_rad_s alpha0_si alpha1_si ratio", rows)
    return True


def _cmd_single_atom(ws: _Workspace, out_dir: str, header):
    from . import single_atom
    cfg = ws.cfg
    grid = single_atom.RadialGrid(r_max=cfg.getfloat("radial", "r_max"),
                                  n=cfg.getint("radial", "n"))
    v, b = single_atom.site_profiles(grid, ws.beams, ws.pol.alpha0_si,
                                     ws.pol.alpha1_si, ws.atom, ws.units)
    rows = single_atom.level_diagram(
        (0, 1, -1, 2, -2, 3, -3), ws.b_values, grid, v, b,
        ws.zeeman_per_mg, n_levels=cfg.getint("run", "levels"))
    _write_table(os.path.join(out_dir, "levels.csv"), header,
                 "B_ext_mG zeta n energy_recoil", rows)
    return True


def _observable_dict(bundle):
    return {
        "populations": [float(x) for x in bundle.populations],
        "fz_mean": bundle.fz_mean,
        "orbital_lz": [float(x) for x in bundle.orbital_lz],
        "abs_orbital_lz": bundle.abs_orbital_lz,
        "zeta": bundle.zeta,
        "windings": list(bundle.windings),
    }


def _write_state(path, header, fld):
    np_cols = []
    xx, yy = fld.grid.xy
    np_cols.extend([xx.ravel(), yy.ravel()])
    for c in range(3):
        np_cols.append(fld.psi[c].real.ravel())
        np_cols.append(fld.psi[c].imag.ravel())
    rows = zip(*np_cols)
    _write_table(path, header,
                 "x y re_p1 im_p1 re_0 im_0 re_m1 im_m1", rows)


def _cmd_ground(ws: _Workspace, out_dir: str, header, seed):
    from . import gpe, observables
    maps = ws.field_maps()
    params = ws.solver_params(seed)
    n_atoms = ws.cfg.getfloat("run", "n_atoms")
    report = {"version": _VERSION, "config_sha256_12": ws.cfg.digest(),
              "points": []}
    all_converged = True
    for b_mg in ws.b_values:
        try:
            rep = gpe.find_ground_state(maps, ws.couplings, b_mg,
                                        ws.zeeman_per_mg, n_atoms=n_atoms,
                                        params=params, starts=ws.sectors)
        except gpe.ConvergenceError as err:
            all_converged = False
            report["points"].append({"b_ext_mg": b_mg, "converged": False,
                                     "error": str(err)})
            continue
        tag = f"b{_fmt(b_mg)}"
        bundle = observables.ObservableBundle.from_field(rep.winner.field)
        _write_state(os.path.join(out_dir, f"state_{tag}.dat"), header,
                     rep.winner.field)
        texture = observables.spin_texture(rep.winner.field)
        _write_table(os.path.join(out_dir, f"texture_{tag}.dat"), header,
                     "x y Fx Fy Fz density", texture)
        point = {
            "b_ext_mg": b_mg,
            "converged": all(r.converged for r in rep.candidates.values()),
            "winner_start": rep.winner_start,
            "iterations": rep.winner.iterations,
            "residual": rep.winner.residual,
            "boundary_density_ratio": rep.boundary_density_ratio,
            "energy": rep.winner.breakdown.as_dict(),
            "candidates": {str(z): {"energy_total": r.breakdown.total,
                                    "residual": r.residual,
                                    "converged": r.converged,
                                    "iterations": r.iterations}
                           for z, r in rep.candidates.items()},
            "observables": _observable_dict(bundle),
        }
        all_converged = all_converged and point["converged"]
        report["points"].append(point)
    name = "report.json" if all_converged else "diagnostics.json"
    with open(os.path.join(out_dir, name), "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return all_converged


def _cmd_sweep(ws: _Workspace, out_dir: str, header, seed):
    from . import gpe, lattice, observables
    np = ws.np
    maps = ws.field_maps()
    params = ws.solver_params(seed)
    n_atoms = ws.cfg.getfloat("run", "n_atoms")
    result = gpe.transition_sweep(maps, ws.couplings, ws.b_values,
                                  ws.zeeman_per_mg, n_atoms=n_atoms,
                                  params=params, sectors=ws.sectors[:2])
    za, zb = result.sectors
    rows = []
    for pt in result.points:
        winner_field = pt.fields[pt.winner_zeta]
        n = observables.populations(winner_field)
        lz = np.nan_to_num(observables.orbital_lz(winner_field))
        rows.append([
            pt.b_mg, pt.breakdowns[za].total, pt.breakdowns[zb].total,
            pt.breakdowns[za].kinetic, pt.breakdowns[zb].kinetic,
            pt.winner_zeta, n[0], n[1], n[2],
            observables.fz_mean(winner_field), lz[0], lz[1], lz[2],
        ])
    char_mg = (lattice.characteristic_fictitious_field(
        ws.beams, ws.pol.alpha1_si, ws.atom, ws.units) / ws.zeeman_per_mg)
    max_b, _ = lattice.max_fictitious_field(ws.beams, ws.pol.alpha1_si,
                                            ws.atom, ws.units)
    max_mg = max_b / ws.zeeman_per_mg
    trailer = []
    if result.b_star_mg is not None:
        trailer.append(f"B_star_mG = {_fmt(result.b_star_mg)}")
        trailer.append("ratio_Bstar_over_characteristic_Bfic = "
                       + _fmt(result.b_star_mg / char_mg))
        trailer.append("ratio_Bstar_over_max_Bfic = "
                       + _fmt(result.b_star_mg / max_mg))
    else:
        trailer.append("B_star_mG = none (no crossing in range)")
    if result.kinetic_cross_mg is not None:
        trailer.append(f"kinetic_cross_mG = {_fmt(result.kinetic_cross_mg)}")
    trailer.append(f"characteristic_Bfic_mG = {_fmt(char_mg)}")
    trailer.append(f"max_Bfic_mG = {_fmt(max_mg)}")
    _write_table(os.path.join(out_dir, "sweep.csv"), header,
                 "B_mG E_zeta0 E_zeta1 Ekin_zeta0 Ekin_zeta1 winner_zeta "
                 "N_p1 N_0 N_m1 Fz_mean lz_p1 lz_0 lz_m1",
                 rows, trailer)
    return True


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _apply_threads(args)
        overrides = []
        if args.seed is not None:
            overrides.append(("run", "seed", args.seed))
        cfg = RunConfig.load(args.config, overrides)
    except (OSError, ValueError) as err:
        print(f"qrotor: {err}", file=sys.stderr)
        return 2

    out_dir = _resolve_out_dir(args, cfg)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "resolved.ini"), "w") as fh:
        fh.write(cfg.canonical_text())

    ws = _Workspace(cfg)
    header = cfg.header_lines()
    seed = cfg.getint("run", "seed")
    try:
        if args.command == "potential":
            ok = _cmd_potential(ws, out_dir, header)
        elif args.command == "polarizability":
            ok = _cmd_polarizability(ws, out_dir, header, args.scan)
        elif args.command == "single-atom":
            ok = _cmd_single_atom(ws, out_dir, header)
        elif args.command == "ground":
            ok = _cmd_ground(ws, out_dir, header, seed)
        else:
            ok = _cmd_sweep(ws, out_dir, header, seed)
    except Exception as err:  # convergence or numerical failure
        from . import gpe
        if isinstance(err, (gpe.ConvergenceError, gpe.DivergenceError,
                            gpe.StepSizeError)):
            diag = {"version": _VERSION, "config_sha256_12": cfg.digest(),
                    "command": args.command, "error": str(err)}
            with open(os.path.join(out_dir, "diagnostics.json"), "w") as fh:
                json.dump(diag, fh, sort_keys=True, indent=2)
                fh.write("\n")
            print(f"qrotor: {err}", file=sys.stderr)
            return 1
        raise
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
