"""Spectral observables: ordinary/symplectic spectra, purity, PPT and QCM defects."""

import numpy as np
import pytest

from rqcm.ensemble import (
    GoeSpec,
    ModeBipartition,
    QuantumCovarianceMatrix,
    RngSeed,
    mode_rotation,
    sample_rqcm,
    swap_blocks,
)
from rqcm.freeprob import edge_R
from rqcm.linalg import NotPDError, herm_eigvals
from rqcm.spectra import (
    SpectralSample,
    log_purity,
    ppt_defect,
    ppt_form,
    purity_rate,
    qcm_defect,
    spectrum,
    symplectic_spectrum,
)

from conftest import two_mode_squeezed


def test_spectral_sample_validation():
    with pytest.raises(ValueError):
        SpectralSample(np.array([2.0, 1.0]), "ordinary")
    with pytest.raises(ValueError):
        SpectralSample(np.array([1.0]), "bogus")


def test_spectrum_identity():
    s = spectrum(QuantumCovarianceMatrix(np.eye(4)))
    np.testing.assert_array_equal(s.values, np.ones(4))
    assert s.kind == "ordinary"


def test_spectrum_edges_at_moderate_n():
    # normalized sigma=1: spectrum concentrates in [R - 2, R + 2] = [0.598, 4.598]
    qcm = sample_rqcm(GoeSpec(500, 1.0, normalized=True), RngSeed(2))
    vals = spectrum(qcm).values
    r = edge_R(1.0)
    assert vals.min() > r - 2 - 0.1 and vals.min() < r - 2 + 0.1
    assert vals.max() > r + 2 - 0.1 and vals.max() < r + 2 + 0.1


def test_spectrum_rotation_invariance(rng):
    qcm = sample_rqcm(GoeSpec(3, 1.0), RngSeed(4))
    u = mode_rotation(rng.uniform(0, 2 * np.pi, 3))
    rotated = QuantumCovarianceMatrix(u @ qcm.matrix @ u.T)
    np.testing.assert_allclose(spectrum(qcm).values, spectrum(rotated).values, atol=1e-10)


def test_symplectic_spectrum_vacuum():
    s = symplectic_spectrum(QuantumCovarianceMatrix(np.eye(6)))
    np.testing.assert_allclose(s.values, np.ones(3), atol=1e-12)
    assert len(s) == 3


def test_symplectic_spectrum_one_mode_diagonal():
    # iJS for S = diag(a, b) has eigenvalues +-sqrt(ab) = +-4
    s = symplectic_spectrum(np.diag([2.0, 8.0]))
    np.testing.assert_allclose(s.values, [4.0], atol=1e-12)
    # independent oracle: the general (non-Hermitian) eigensolver on iJS itself
    ijs = 1j * np.array([[0.0, 1.0], [-1.0, 0.0]]) @ np.diag([2.0, 8.0])
    oracle = np.sort(np.linalg.eigvals(ijs).real)
    np.testing.assert_allclose(oracle, [-4.0, 4.0], atol=1e-12)


def test_symplectic_spectrum_williamson_diagonal():
    nus = [1.0, 1.5, 3.0]
    s = np.diag(np.repeat(nus, 2))
    np.testing.assert_allclose(symplectic_spectrum(s).values, nus, atol=1e-12)


def test_symplectic_spectrum_scaling():
    qcm = sample_rqcm(GoeSpec(3, 1.0), RngSeed(6))
    base = symplectic_spectrum(qcm).values
    scaled = symplectic_spectrum(2.5 * qcm.matrix).values
    np.testing.assert_allclose(scaled, 2.5 * base, atol=1e-10)


def test_symplectic_spectrum_rotation_invariance(rng):
    qcm = sample_rqcm(GoeSpec(3, 1.0), RngSeed(8))
    u = mode_rotation(rng.uniform(0, 2 * np.pi, 3))
    a = symplectic_spectrum(qcm).values
    b = symplectic_spectrum(u @ qcm.matrix @ u.T).values
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_symplectic_spectrum_of_rqcm_is_above_one():
    for seed in range(4):
        qcm = sample_rqcm(GoeSpec(5, 1.3), RngSeed(seed))
        assert symplectic_spectrum(qcm).values.min() >= 1 - 1e-6


def test_log_purity_values():
    assert log_purity(np.eye(4)) == pytest.approx(0.0, abs=1e-12)
    assert log_purity(np.diag([2.0, 2.0])) == pytest.approx(-np.log(2.0))
    assert purity_rate(np.diag([2.0, 2.0])) == pytest.approx(np.log(2.0))


def test_log_purity_requires_pd():
    with pytest.raises(NotPDError):
        log_purity(np.diag([1.0, 0.0]))


def test_ppt_defect_identity():
    assert ppt_defect(np.eye(4), ModeBipartition(1, 1)) == pytest.approx(0.0, abs=1e-12)


def test_ppt_defect_two_mode_squeezed_violates():
    s = two_mode_squeezed(0.5)
    part = ModeBipartition(1, 1)
    assert qcm_defect(s) == pytest.approx(0.0, abs=1e-10)  # pure state saturates
    assert ppt_defect(s, part) < -0.1


def test_ppt_defect_equals_momentum_flip_route():
    # partial transpose = sign flip of the second subsystem's momenta:
    # lambda_min(S + i(J (+) -J)) == lambda_min(Lam S Lam - iJ)
    s = sample_rqcm(GoeSpec(3, 1.0), RngSeed(12)).matrix
    part = ModeBipartition(1, 2)
    lam = np.diag([1.0, 1.0] * part.m + [1.0, -1.0] * part.l)
    np.testing.assert_allclose(
        ppt_defect(s, part), qcm_defect(lam @ s @ lam), atol=1e-10)


def test_ppt_defect_partition_swap_symmetry():
    s = sample_rqcm(GoeSpec(4, 1.0), RngSeed(14)).matrix
    part = ModeBipartition(1, 3)
    swapped = swap_blocks(s, part)
    assert ppt_defect(s, part) == pytest.approx(
        ppt_defect(swapped, ModeBipartition(3, 1)), abs=1e-10)


def test_ppt_form_shape():
    f = ppt_form(ModeBipartition(2, 1))
    assert f.shape == (6, 6)
    np.testing.assert_array_equal(f[4:, 4:], -np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_ppt_defect_centered_for_normalized_ensemble():
    defects = [
        ppt_defect(sample_rqcm(GoeSpec(50, 1.0, normalized=True), RngSeed(100, i)),
                   ModeBipartition(25, 25))
        for i in range(60)
    ]
    assert abs(np.mean(defects)) <= 0.05


def test_qcm_defect_values():
    assert qcm_defect(np.eye(2)) == pytest.approx(0.0, abs=1e-12)
    assert qcm_defect(np.zeros((2, 2))) == pytest.approx(-1.0, abs=1e-12)


def test_qcm_defect_of_samples_vanishes():
    for seed in range(5):
        qcm = sample_rqcm(GoeSpec(4, 2.0), RngSeed(40, seed))
        assert abs(qcm_defect(qcm)) <= 1e-8


def test_qcm_defect_shift_equivariance():
    s = sample_rqcm(GoeSpec(3, 1.0), RngSeed(44)).matrix
    base = qcm_defect(s)
    assert qcm_defect(s + 0.37 * np.eye(6)) == pytest.approx(base + 0.37, abs=1e-10)


def test_partition_consistency_checked():
    with pytest.raises(ValueError):
        ppt_defect(np.eye(8), ModeBipartition(1, 2))
