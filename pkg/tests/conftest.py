"""Shared test utilities: LAPACK-independent spectral oracles."""

import numpy as np
import pytest


def char_poly_coeffs(h):
    """Characteristic polynomial coefficients by the Faddeev-LeVerrier recursion.

    Returns [1, c1, ..., cn] with det(lambda I - H) = sum_k c_k lambda^(n-k),
    using only matrix products and traces (no eigensolver).
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    coeffs = [1.0 + 0j]
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        hm = h @ m
        c = -np.trace(hm) / k
        coeffs.append(c)
        m = hm + c * np.eye(n)
    return np.array(coeffs)


def durand_kerner_roots(coeffs, iterations=400, tol=1e-14):
    """All complex roots of a monic polynomial by Durand-Kerner iteration."""
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / coeffs[0]
    n = len(coeffs) - 1
    radius = 1.0 + np.abs(coeffs).max()
    roots = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)

    def poly(z):
        acc = np.zeros_like(z)
        for c in coeffs:
            acc = acc * z + c
        return acc

    for _ in range(iterations):
        diffs = roots[:, None] - roots[None, :]
        np.fill_diagonal(diffs, 1.0)
        denom = diffs.prod(axis=1)
        step = poly(roots) / denom
        roots = roots - step
        if np.abs(step).max() < tol:
            break
    return roots


def spectrum_oracle(h):
    """Sorted real spectrum of a Hermitian matrix via char-poly + root finding."""
    roots = durand_kerner_roots(char_poly_coeffs(h))
    assert np.abs(roots.imag).max() < 1e-7
    return np.sort(roots.real)


def two_mode_squeezed(r):
    """Covariance of the two-mode squeezed vacuum: entangled pure state for r > 0."""
    z = np.diag([1.0, -1.0])
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
