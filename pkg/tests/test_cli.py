"""Command-line driver: config handling, file schemas, determinism."""

import json

import numpy as np
import pytest

from qrotor import cli, polarizability
from qrotor.constants import SPEED_OF_LIGHT, rb87


def _write_config(path, text):
    path.write_text(text)
    return str(path)


def _rows(path):
    return np.loadtxt(path, ndmin=2)


SMALL_GRID = "[grid]\nlength = 0.75\nn = 64\n"


def test_b_value_parsing():
    np.testing.assert_allclose(cli._parse_b_values("0:100:25"),
                               [0, 25, 50, 75, 100])
    np.testing.assert_allclose(cli._parse_b_values("40, 100"), [40, 100])
    with pytest.raises(ValueError):
        cli._parse_b_values("10:0:5")


def test_ramp_parsing():
    assert cli._parse_ramp("20x1500,1x9000") == ((20.0, 1500), (1.0, 9000))
    with pytest.raises(ValueError):
        cli._parse_ramp("20*1500")


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = _write_config(tmp_path / "bad.ini", "[solver]\nwhat = 1\n")
    assert cli.main(["--config", cfg, "--out", str(tmp_path), "potential"]) == 2
    assert "what" in capsys.readouterr().err


def test_invalid_config_value_rejected(tmp_path):
    cfg = _write_config(tmp_path / "bad.ini", "[grid]\nn = -4\n")
    assert cli.main(["--config", cfg, "--out", str(tmp_path), "potential"]) == 2


def test_resolved_config_round_trip(tmp_path):
    cfg = _write_config(tmp_path / "run.ini",
                        "[laser]\nintensity_w_cm2 = 35\n" + SMALL_GRID)
    out = tmp_path / "out"
    assert cli.main(["--config", cfg, "--out", str(out), "potential"]) == 0
    first = cli.RunConfig.load(cfg)
    reloaded = cli.RunConfig.load(str(out / "resolved.ini"))
    assert reloaded.canonical_text() == first.canonical_text()
    assert reloaded.digest() == first.digest()
    header = (out / "fields.dat").read_text().splitlines()[:2]
    assert header[0] == f"# qrotor {cli._VERSION}"
    assert header[1] == f"# config sha256 {first.digest()}"


def test_potential_profile_and_intensity_scaling(tmp_path):
    out70 = tmp_path / "i70"
    out35 = tmp_path / "i35"
    cfg35 = _write_config(tmp_path / "i35.ini",
                          "[laser]\nintensity_w_cm2 = 35\n" + SMALL_GRID)
    cfg70 = _write_config(tmp_path / "i70.ini", SMALL_GRID)
    assert cli.main(["--config", cfg70, "--out", str(out70), "potential"]) == 0
    assert cli.main(["--config", cfg35, "--out", str(out35), "potential"]) == 0
    p70 = _rows(out70 / "profile.csv")
    p35 = _rows(out35 / "profile.csv")
    assert p70.shape == (401, 3)
    assert p70[0, 1] == pytest.approx(-166.6786, rel=1e-5)  # well depth at r=0
    # %.12g file quantization bounds the doubling identity near 1e-11
    np.testing.assert_allclose(p70[:, 1], 2 * p35[:, 1], rtol=1e-10)
    np.testing.assert_allclose(p70[:, 2], 2 * p35[:, 2], rtol=0,
                               atol=1e-10 * np.abs(p70[:, 2]).max())
    fields = _rows(out70 / "fields.dat")
    assert fields.shape == (64 * 64, 5)


def test_polarizability_point_and_scan(tmp_path):
    out = tmp_path / "pol"
    assert cli.main(["--out", str(out), "polarizability"]) == 0
    row = _rows(out / "polarizability.csv")
    assert row.shape == (1, 4)
    atom = rb87()
    omega = 2 * np.pi * SPEED_OF_LIGHT / 795.456e-9
    ref = polarizability.evaluate(omega, atom)
    assert row[0, 0] == pytest.approx(omega, rel=1e-10)
    assert row[0, 1] == pytest.approx(ref.alpha0_si, rel=1e-10)
    assert row[0, 3] == pytest.approx(ref.ratio, rel=1e-10)
    out2 = tmp_path / "scan"
    assert cli.main(["--out", str(out2), "polarizability",
                     "--scan", "790:810:5"]) == 0
    table = _rows(out2 / "polarizability.csv")
    assert table.shape == (5, 4)
    assert np.all(np.diff(table[:, 0]) < 0)  # wavelength up, frequency down


def test_single_atom_level_table(tmp_path):
    cfg = _write_config(tmp_path / "sa.ini",
                        "[radial]\nn = 320\n[run]\nb_mg = 0,40\nlevels = 2\n")
    out = tmp_path / "sa"
    assert cli.main(["--config", cfg, "--out", str(out), "single-atom"]) == 0
    table = _rows(out / "levels.csv")
    assert table.shape == (7 * 2 * 2, 4)
    at_zero = table[table[:, 0] == 0]
    e_plus = at_zero[(at_zero[:, 1] == 1) & (at_zero[:, 2] == 1), 3]
    e_minus = at_zero[(at_zero[:, 1] == -1) & (at_zero[:, 2] == 1), 3]
    assert e_plus[0] == pytest.approx(e_minus[0], rel=1e-3)
    ground = at_zero[at_zero[:, 3] == at_zero[:, 3].min()]
    assert ground[0, 1] == 0  # zeta = 0 wins at zero field


def test_ground_report_windings_and_determinism(tmp_path):
    cfg = _write_config(tmp_path / "g.ini",
                        SMALL_GRID + "[run]\nb_mg = 100\n")
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert cli.main(["--config", cfg, "--out", str(out_a), "ground"]) == 0
    assert cli.main(["--config", cfg, "--out", str(out_b), "ground"]) == 0
    report = json.loads((out_a / "report.json").read_text())
    point = report["points"][0]
    assert point["winner_start"] == 1
    assert point["observables"]["windings"] == [0, 1, 2]
    assert point["observables"]["zeta"] == pytest.approx(1.0, abs=1e-6)
    assert point["residual"] < 1e-6
    assert (out_a / "state_b100.dat").exists()
    assert (out_a / "texture_b100.dat").exists()
    # byte-identical rerun with the same seed and config
    assert (out_a / "report.json").read_bytes() == (
        out_b / "report.json").read_bytes()
    assert (out_a / "state_b100.dat").read_bytes() == (
        out_b / "state_b100.dat").read_bytes()


def test_ground_convergence_failure_exit_code(tmp_path):
    cfg = _write_config(
        tmp_path / "short.ini",
        SMALL_GRID
        + "[solver]\nramp = 1x60\npolish_steps = 0\n[run]\nb_mg = 0\n")
    out = tmp_path / "fail"
    assert cli.main(["--config", cfg, "--out", str(out), "ground"]) == 1
    diag = json.loads((out / "diagnostics.json").read_text())
    assert diag["points"][0]["converged"] is False
    assert not (out / "report.json").exists()


def test_sweep_table_and_crossing_trailer(tmp_path):
    cfg = _write_config(tmp_path / "sw.ini",
                        SMALL_GRID + "[run]\nb_mg = 65:79:7\n")
    out = tmp_path / "sw"
    assert cli.main(["--config", cfg, "--out", str(out), "sweep"]) == 0
    table = _rows(out / "sweep.csv")
    assert table.shape == (3, 13)
    assert table[0, 5] == 0 and table[-1, 5] == 1  # winner flips
    text = (out / "sweep.csv").read_text()
    star = [ln for ln in text.splitlines() if "B_star_mG" in ln]
    assert star and float(star[0].split("=")[1]) == pytest.approx(74.99,
                                                                  abs=0.5)
    assert any("kinetic_cross_mG" in ln for ln in text.splitlines())
    assert any("ratio_Bstar_over_characteristic_Bfic" in ln
               for ln in text.splitlines())


def test_seed_flag_changes_resolved_config(tmp_path):
    out = tmp_path / "s"
    assert cli.main(["--out", str(out), "--seed", "3", "polarizability"]) == 0
    text = (out / "resolved.ini").read_text()
    assert "seed = 3" in text
