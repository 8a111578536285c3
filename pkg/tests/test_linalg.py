"""Spectral kernel tests, including the LAPACK-independent oracles."""

import numpy as np
import pytest

from rqcm.ensemble import i_symplectic_form
from rqcm.linalg import (
    EigenError,
    HermitianMatrix,
    NotPDError,
    NotPSDError,
    SymmetricMatrix,
    herm_eigen,
    herm_eigvals,
    log_det_spd,
    pinv_herm,
    psd_sqrt,
    real_embed,
    sym_eigen,
    sym_eigvals,
)

from conftest import spectrum_oracle


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def test_wrappers_enforce_symmetry(rng):
    a = rng.standard_normal((4, 4))
    s = SymmetricMatrix(a)
    assert np.array_equal(s.array, s.array.T)
    h = HermitianMatrix(a + 1j * rng.standard_normal((4, 4)))
    assert np.array_equal(h.array, h.array.conj().T)
    assert np.all(np.imag(np.diag(h.array)) == 0)


def test_herm_eigen_ij2():
    dec = herm_eigen(i_symplectic_form(1))
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_herm_eigen_identity():
    dec = herm_eigen(np.eye(4, dtype=complex))
    np.testing.assert_allclose(dec.eigenvalues, np.ones(4), atol=0)


def test_herm_eigen_vs_charpoly_oracle(rng):
    h = random_hermitian(rng, 6)
    got = herm_eigen(h).eigenvalues
    expected = spectrum_oracle(h)
    np.testing.assert_allclose(got, expected, atol=1e-8)


def test_herm_eigen_reconstruction_invariant(rng):
    for d in (3, 8, 20):
        h = random_hermitian(rng, d)
        dec = herm_eigen(h)
        bound = 1e-10 * (1 + np.abs(dec.eigenvalues).max())
        assert dec.reconstruction_residual(h) <= bound
        assert dec.unitarity_defect() <= 1e-10


def test_sym_eigen_small_cases():
    np.testing.assert_allclose(sym_eigen(np.diag([3.0, 1.0])).eigenvalues, [1.0, 3.0])
    np.testing.assert_allclose(
        sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]])).eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_sym_eigen_matches_complex_path(rng):
    s = rng.standard_normal((5, 5))
    s = (s + s.T) / 2
    np.testing.assert_allclose(
        sym_eigen(s).eigenvalues, herm_eigen(s.astype(complex)).eigenvalues, atol=1e-10)


def test_eigvals_only_paths_match(rng):
    s = rng.standard_normal((7, 7))
    s = (s + s.T) / 2
    np.testing.assert_allclose(sym_eigvals(s), sym_eigen(s).eigenvalues, atol=0)
    h = random_hermitian(rng, 7)
    np.testing.assert_allclose(herm_eigvals(h), herm_eigen(h).eigenvalues, atol=1e-12)


def test_psd_sqrt_trivial():
    np.testing.assert_allclose(psd_sqrt(np.eye(4)), np.eye(4), atol=1e-14)
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_psd_sqrt_multiply_back(rng):
    a = rng.standard_normal((6, 6))
    s = a @ a.T
    r = psd_sqrt(s)
    norm = np.abs(sym_eigvals(s)).max()
    assert np.abs(r @ r - s).max() <= 1e-8 * (1 + norm)


def test_psd_sqrt_scaling_homogeneity(rng):
    a = rng.standard_normal((5, 5))
    s = a @ a.T
    np.testing.assert_allclose(psd_sqrt(4.0 * s), 2.0 * psd_sqrt(s), atol=1e-10)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSDError) as err:
        psd_sqrt(np.diag([1.0, -0.5]))
    assert err.value.lambda_min == pytest.approx(-0.5)


def test_pinv_herm_rank_deficient():
    h = np.eye(2) + i_symplectic_form(1)  # eigenvalues 0 and 2
    p = pinv_herm(h)
    np.testing.assert_allclose(np.sort(herm_eigvals(p)), [0.0, 0.5], atol=1e-12)
    assert np.abs(h @ p @ h - h).max() <= 1e-8 * np.abs(h).max()


def test_pinv_herm_diagonal():
    np.testing.assert_allclose(pinv_herm(np.diag([2.0, 5.0])), np.diag([0.5, 0.2]), atol=1e-14)


def test_pinv_herm_matches_solve_oracle(rng):
    h = random_hermitian(rng, 6) + 8 * np.eye(6)  # well conditioned, full rank
    p = pinv_herm(h)
    inverse = np.linalg.solve(h, np.eye(6))
    assert np.abs(p - inverse).max() <= 1e-8 * np.abs(inverse).max()


def test_pinv_herm_involution_on_range(rng):
    h = random_hermitian(rng, 5)
    pp = pinv_herm(pinv_herm(h))
    assert np.abs(pp - h).max() <= 1e-8 * (1 + np.abs(h).max())


def test_pinv_herm_involution_rank_deficient(rng):
    # exact involution also on a singular matrix: the kernel stays the kernel
    basis = np.linalg.qr(random_hermitian(rng, 4))[0]
    h = (basis * np.array([0.0, 0.5, -2.0, 3.0])) @ basis.conj().T
    pp = pinv_herm(pinv_herm(h))
    assert np.abs(pp - h).max() <= 1e-8 * (1 + np.abs(h).max())
    v = basis[:, 0]
    assert np.abs(pinv_herm(h) @ v).max() <= 1e-10


def test_log_det_spd_values():
    assert log_det_spd(np.eye(6)) == pytest.approx(0.0, abs=1e-12)
    assert log_det_spd(np.diag([np.e, np.e ** 2])) == pytest.approx(3.0, rel=1e-12)


def test_log_det_spd_vs_lu_oracle(rng):
    a = rng.standard_normal((8, 8))
    s = a @ a.T + 0.5 * np.eye(8)
    assert log_det_spd(s) == pytest.approx(np.log(np.linalg.det(s)), abs=1e-9)


def test_log_det_spd_rejects_non_pd():
    with pytest.raises(NotPDError):
        log_det_spd(np.diag([1.0, 0.0]))


def test_real_embed_ij2():
    e = real_embed(i_symplectic_form(1))
    assert e.shape == (4, 4)
    np.testing.assert_allclose(sym_eigvals(e), [-1.0, -1.0, 1.0, 1.0], atol=1e-14)


def test_real_embed_real_input_is_block_diagonal(rng):
    s = rng.standard_normal((3, 3))
    s = (s + s.T) / 2
    e = real_embed(s.astype(complex))
    np.testing.assert_allclose(e[:3, :3], s, atol=0)
    np.testing.assert_allclose(e[3:, 3:], s, atol=0)
    assert np.all(e[:3, 3:] == 0) and np.all(e[3:, :3] == 0)


def test_real_embed_doubles_spectrum(rng):
    h = random_hermitian(rng, 5)
    doubled = np.sort(np.repeat(herm_eigvals(h), 2))
    np.testing.assert_allclose(sym_eigvals(real_embed(h)), doubled, atol=1e-10)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        sym_eigen(np.ones((2, 3)))


def test_eigen_error_is_runtime_error():
    assert issubclass(EigenError, RuntimeError)
