"""Six-beam field construction: symmetry, closed forms, frozen scales."""

import numpy as np
import pytest

from qrotor import constants, lattice, polarizability

ATOM = constants.rb87()
UNITS = constants.units_for(ATOM, 795.456e-9)
OMEGA_L = 2 * np.pi * constants.SPEED_OF_LIGHT / 795.456e-9
POL = polarizability.evaluate(OMEGA_L, ATOM)
CFG = lattice.BeamConfig(intensity_w_cm2=70.0)

RNG = np.random.default_rng(7)


def _random_points(m):
    return RNG.uniform(-0.5, 0.5, size=(m, 2))


def test_e0_squared_frozen_value():
    assert CFG.e0_squared == pytest.approx(5.274224e8, rel=1e-6)


def test_envelope_periodicity():
    r = _random_points(40)
    base_v = lattice.scalar_potential(r, CFG, POL.alpha0_si, UNITS)
    base_b = lattice.fictitious_field(r, CFG, POL.alpha1_si, ATOM, UNITS)
    for shift in ((1.0, 1 / np.sqrt(3)), (1.0, -1 / np.sqrt(3)),
                  (0.0, 2 / np.sqrt(3))):
        v = lattice.scalar_potential(r + shift, CFG, POL.alpha0_si, UNITS)
        b = lattice.fictitious_field(r + shift, CFG, POL.alpha1_si, ATOM, UNITS)
        np.testing.assert_allclose(v, base_v, rtol=0, atol=1e-10)
        np.testing.assert_allclose(b, base_b, rtol=0, atol=1e-10)


def test_sixty_degree_rotation_covariance():
    c, s = np.cos(np.pi / 3), np.sin(np.pi / 3)
    rot = np.array([[c, -s], [s, c]])
    r = _random_points(60)
    v = lattice.scalar_potential(r, CFG, POL.alpha0_si, UNITS)
    b = lattice.fictitious_field(r, CFG, POL.alpha1_si, ATOM, UNITS)
    v_rot = lattice.scalar_potential(r @ rot.T, CFG, POL.alpha0_si, UNITS)
    b_rot = lattice.fictitious_field(r @ rot.T, CFG, POL.alpha1_si, ATOM, UNITS)
    np.testing.assert_allclose(v_rot, v, rtol=0, atol=1e-10 * np.max(np.abs(v)))
    np.testing.assert_allclose(b_rot, b @ rot.T, rtol=0,
                               atol=1e-10 * np.max(np.abs(b)))


def test_fictitious_field_is_planar_and_vanishes_at_center():
    # the z component is dropped only after an internal machine-zero check,
    # so a successful call certifies B_z = 0; the center must also be a zero
    b0 = lattice.fictitious_field(np.zeros(2), CFG, POL.alpha1_si, ATOM, UNITS)
    assert b0.shape == (2,)
    np.testing.assert_allclose(b0, 0.0, atol=1e-12)


def test_intensity_linearity():
    half = lattice.BeamConfig(intensity_w_cm2=35.0)
    r = _random_points(25)
    np.testing.assert_allclose(
        lattice.scalar_potential(r, CFG, POL.alpha0_si, UNITS),
        2 * lattice.scalar_potential(r, half, POL.alpha0_si, UNITS), rtol=1e-13)
    np.testing.assert_allclose(
        lattice.fictitious_field(r, CFG, POL.alpha1_si, ATOM, UNITS),
        2 * lattice.fictitious_field(r, half, POL.alpha1_si, ATOM, UNITS),
        rtol=0, atol=1e-13 * lattice.characteristic_fictitious_field(
            CFG, POL.alpha1_si, ATOM, UNITS))


def test_closed_forms_match_direct_fields_near_center():
    # outward-oriented direct field: radial component equals the Bessel form
    for r in (0.01, 0.02, 0.035, 0.05):
        v_iso, b_iso = lattice.isotropic_profiles(r, CFG, POL.alpha0_si,
                                                  POL.alpha1_si, ATOM, UNITS)
        for phi in np.linspace(0, 2 * np.pi, 9):
            point = np.array([r * np.cos(phi), r * np.sin(phi)])
            v = lattice.scalar_potential(point, CFG, POL.alpha0_si, UNITS)
            b = lattice.fictitious_field(point, CFG, POL.alpha1_si, ATOM, UNITS)
            assert v == pytest.approx(v_iso, rel=1e-2)
            radial = b @ point / r
            assert radial == pytest.approx(b_iso, rel=1e-2)
            # in-plane anisotropy is a higher harmonic, small near the center
            assert np.hypot(*b) == pytest.approx(abs(b_iso), rel=1e-2)


def test_potential_depth_frozen_value():
    v0, _ = lattice.isotropic_profiles(0.0, CFG, POL.alpha0_si, POL.alpha1_si,
                                       ATOM, UNITS)
    assert v0 == pytest.approx(-166.6786, rel=1e-5)
    grid = lattice.GridSpec(length=0.75, n=128)
    maps = lattice.render_field_maps(CFG, grid, POL.alpha0_si, POL.alpha1_si,
                                     ATOM, UNITS)
    assert maps.depth == pytest.approx(166.6786, rel=1e-5)


def test_characteristic_and_max_field_frozen_values():
    zee = constants.zeeman_energy_per_mG(ATOM, UNITS)
    char = lattice.characteristic_fictitious_field(CFG, POL.alpha1_si, ATOM,
                                                   UNITS)
    assert char == pytest.approx(19.0266, rel=1e-5)
    assert char / zee == pytest.approx(98.64, rel=1e-4)
    bmax, rmax = lattice.max_fictitious_field(CFG, POL.alpha1_si, ATOM, UNITS)
    assert bmax == pytest.approx(51.5970, rel=1e-5)
    assert bmax / zee == pytest.approx(267.50, rel=1e-4)
    assert rmax == pytest.approx(0.172202, abs=1e-5)
    # dimensionless bracket: max of J1(x) + J1(2x) + sqrt3 J1(sqrt3 x) at
    # x = 2 pi r, times the prefactor 4/3 of the characteristic scale
    assert bmax / char == pytest.approx(2.033878 * 4.0 / 3.0, rel=1e-5)


def test_trap_frequency_and_width_frozen_values():
    hw = lattice.trap_frequency(CFG, POL.alpha0_si, UNITS)
    assert hw == pytest.approx(12.9104, rel=1e-5)
    assert hw == pytest.approx(np.sqrt(166.6786), rel=1e-5)
    sigma = lattice.harmonic_length(CFG, POL.alpha0_si, UNITS)
    assert sigma == pytest.approx(0.06264, rel=1e-3)
    assert sigma == pytest.approx(1.0 / np.sqrt(2 * np.pi**2 * hw), rel=1e-12)


def test_grid_axis_and_kinetic_multiplier():
    grid = lattice.GridSpec(length=0.8, n=64)
    assert grid.spacing == pytest.approx(0.0125)
    assert grid.axis[grid.n // 2] == 0.0
    assert grid.area_element == pytest.approx(grid.spacing**2)
    # a plane wave on a spectral bin with f cycles/lambda_l costs f^2 recoil
    f_bins = np.fft.fftfreq(grid.n, d=grid.spacing)
    k = np.argmin(np.abs(f_bins - 5.0 / grid.length))
    assert grid.kinetic_recoil[k, 0] == pytest.approx(
        (5.0 / grid.length) ** 2, rel=1e-12)
    j = np.argmin(np.abs(f_bins + 3.0 / grid.length))
    assert grid.kinetic_recoil[k, j] == pytest.approx(
        (25.0 + 9.0) / grid.length**2, rel=1e-12)


def test_grid_rejects_bad_parameters():
    with pytest.raises(ValueError):
        lattice.GridSpec(length=-1.0, n=64)
    with pytest.raises(ValueError):
        lattice.GridSpec(length=0.75, n=4)


def test_render_warns_beyond_one_cell():
    big = lattice.GridSpec(length=1.5, n=16)
    with pytest.warns(UserWarning):
        lattice.render_field_maps(CFG, big, POL.alpha0_si, POL.alpha1_si,
                                  ATOM, UNITS)


def test_field_maps_round_trip(tmp_path):
    grid = lattice.GridSpec(length=0.75, n=16)
    maps = lattice.render_field_maps(CFG, grid, POL.alpha0_si, POL.alpha1_si,
                                     ATOM, UNITS)
    path = tmp_path / "fields.dat"
    lattice.write_field_maps(path, maps, header_lines=("demo",))
    xy, v, b = lattice.read_field_maps(path)
    xx, yy = grid.xy
    np.testing.assert_allclose(xy[:, 0], xx.ravel(), atol=1e-12)
    np.testing.assert_allclose(v, maps.v.ravel(), rtol=1e-10)
    np.testing.assert_allclose(b, maps.b.reshape(-1, 2), rtol=0, atol=1e-10)
    assert path.read_text().startswith("# demo\n")
