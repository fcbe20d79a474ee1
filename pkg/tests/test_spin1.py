"""Spin-1 algebra and the radial dressed basis."""

import numpy as np
import pytest

from qrotor import spin1

RNG = np.random.default_rng(20260814)


def test_commutation_relations():
    fx, fy, fz = spin1.FX, spin1.FY, spin1.FZ
    np.testing.assert_allclose(fx @ fy - fy @ fx, 1j * fz, atol=1e-15)
    np.testing.assert_allclose(fy @ fz - fz @ fy, 1j * fx, atol=1e-15)
    np.testing.assert_allclose(fz @ fx - fx @ fz, 1j * fy, atol=1e-15)


def test_casimir_is_two():
    f2 = spin1.FX @ spin1.FX + spin1.FY @ spin1.FY + spin1.FZ @ spin1.FZ
    np.testing.assert_allclose(f2, 2 * np.eye(3), atol=1e-15)


def test_chi_vectors_are_orthonormal_fr_eigenvectors():
    for phi in (0.0, 0.3, np.pi / 2, 2.1, -1.7):
        u = spin1.chi_vectors(phi)
        np.testing.assert_allclose(u @ np.conj(u).T, np.eye(3), atol=1e-14)
        fr = np.cos(phi) * spin1.FX + np.sin(phi) * spin1.FY
        for row, ev in zip(u, (1.0, 0.0, -1.0)):
            np.testing.assert_allclose(fr @ row, ev * row, atol=1e-14)


def test_chi_vectors_broadcast_over_phi():
    phis = np.linspace(0, 2 * np.pi, 11)
    stacked = spin1.chi_vectors(phis)
    assert stacked.shape == (11, 3, 3)
    for k, phi in enumerate(phis):
        np.testing.assert_allclose(stacked[k], spin1.chi_vectors(phi))


def test_fz_chi_matches_symbolic_conjugation():
    # symbolic oracle: FZ in the chi basis is Ubar FZ U^T with U the row matrix
    # of chi vectors, and the result must be phi independent
    sympy = pytest.importorskip("sympy")
    phi = sympy.symbols("phi", real=True)
    em = sympy.exp(-sympy.I * phi)
    ep = sympy.exp(sympy.I * phi)
    s2 = sympy.sqrt(2)
    u = sympy.Matrix([
        [em / 2, 1 / s2, ep / 2],
        [em / s2, 0, -ep / s2],
        [em / 2, -1 / s2, ep / 2],
    ])
    fz = sympy.diag(1, 0, -1)
    fz_chi = sympy.simplify(u.conjugate() * fz * u.T)
    expect = sympy.Matrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / s2
    assert sympy.simplify(fz_chi - expect) == sympy.zeros(3, 3)
    np.testing.assert_allclose(
        spin1.FZ_CHI, np.array(expect.evalf(), dtype=complex), atol=1e-15)


def test_basis_round_trip():
    for _ in range(20):
        phi = RNG.uniform(0, 2 * np.pi)
        psi = RNG.standard_normal(3) + 1j * RNG.standard_normal(3)
        coeffs = spin1.to_chi_basis(psi, phi)
        back = spin1.from_chi_basis(coeffs, phi)
        np.testing.assert_allclose(back, psi, atol=1e-13)
        # unitary change of basis preserves the norm
        assert np.linalg.norm(coeffs) == pytest.approx(np.linalg.norm(psi))


def test_basis_transform_is_numpy_adjoint_action():
    phi = 1.234
    u = spin1.chi_vectors(phi)
    psi = RNG.standard_normal(3) + 1j * RNG.standard_normal(3)
    np.testing.assert_allclose(spin1.to_chi_basis(psi, phi),
                               np.conj(u) @ psi, atol=1e-14)


def test_local_spin_expectation_on_cartesian_eigenstates():
    # eigenvector of F_y with eigenvalue +1 must point along +y
    w, v = np.linalg.eigh(spin1.FY)
    plus = v[:, np.argmax(w)]
    np.testing.assert_allclose(spin1.local_spin_expectation(plus),
                               [0, 1, 0], atol=1e-12)
    np.testing.assert_allclose(spin1.local_spin_expectation([1, 0, 0]),
                               [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(spin1.local_spin_expectation([0, 0, 1]),
                               [0, 0, -1], atol=1e-15)


def test_local_spin_expectation_matches_matrix_elements():
    for _ in range(20):
        psi = RNG.standard_normal(3) + 1j * RNG.standard_normal(3)
        got = spin1.local_spin_expectation(psi)
        for k, op in enumerate((spin1.FX, spin1.FY, spin1.FZ)):
            assert got[k] == pytest.approx(
                np.real(np.conj(psi) @ op @ psi), abs=1e-12)


def test_local_spin_expectation_trailing_axis_stack():
    stack = RNG.standard_normal((4, 5, 3)) + 1j * RNG.standard_normal((4, 5, 3))
    out = spin1.local_spin_expectation(stack)
    assert out.shape == (4, 5, 3)
    np.testing.assert_allclose(out[2, 3],
                               spin1.local_spin_expectation(stack[2, 3]))
