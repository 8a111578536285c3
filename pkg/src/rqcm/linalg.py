"""Dense spectral kernel: symmetric/Hermitian eigendecomposition and matrix functions.

Everything downstream (sampling shifts, symplectic spectra, PPT defects, LMI
bounds) reduces to Hermitian eigenproblems solved here. Matrices are plain
``numpy`` arrays; the :class:`SymmetricMatrix` / :class:`HermitianMatrix`
wrappers enforce exact (anti)symmetry at construction and are accepted
interchangeably with arrays by every operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EigenError(RuntimeError):
    """Eigensolver failed to converge; carries the backend diagnostic."""


class NotPSDError(ValueError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""

    def __init__(self, lambda_min, tol):
        self.lambda_min = float(lambda_min)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not positive semidefinite: lambda_min={lambda_min:.3e} < -{tol:.1e}"
        )


class NotPDError(ValueError):
    """Matrix has a non-positive eigenvalue where positive-definite is required."""

    def __init__(self, lambda_min):
        self.lambda_min = float(lambda_min)
        super().__init__(f"matrix is not positive definite: lambda_min={lambda_min:.3e}")


def _as_matrix(a, dtype):
    m = np.asarray(getattr(a, "array", a), dtype=dtype)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def symmetrize(a) -> np.ndarray:
    """Exact symmetric part (a + a.T)/2 as a float array."""
    m = _as_matrix(a, float)
    return (m + m.T) / 2.0


def hermitize(a) -> np.ndarray:
    """Exact Hermitian part (a + a^dagger)/2 as a complex array."""
    m = _as_matrix(a, complex)
    return (m + m.conj().T) / 2.0


class SymmetricMatrix:
    """Real symmetric matrix; symmetry is enforced exactly at construction."""

    __slots__ = ("array",)

    def __init__(self, entries):
        self.array = symmetrize(entries)

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.array, dtype=dtype)

    def __repr__(self):
        return f"SymmetricMatrix(dim={self.dim})"


class HermitianMatrix:
    """Complex Hermitian matrix; Hermitian symmetry is enforced exactly.

    The diagonal is real by construction of the Hermitian part.
    """

    __slots__ = ("array",)

    def __init__(self, entries):
        self.array = hermitize(entries)

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.array, dtype=dtype)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum (ascending) with matched eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruction_residual(self, h) -> float:
        """max_k ||H v_k - lambda_k v_k||, for checking against the contract bound."""
        m = _as_matrix(h, complex)
        r = m @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.linalg.norm(r, axis=0).max())

    def unitarity_defect(self) -> float:
        v = self.eigenvectors
        return float(np.abs(v.conj().T @ v - np.eye(v.shape[1])).max())


def herm_eigen(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK (``numpy.linalg.eigh``); a convergence failure is
    re-raised as :class:`EigenError`.
    """
    m = hermitize(h)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(w, v)


def sym_eigen(s) -> EigenDecomposition:
    """Eigendecomposition of a real symmetric matrix (real arithmetic path)."""
    m = symmetrize(s)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"symmetric eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(w, v)


def herm_eigvals(h) -> np.ndarray:
    """Eigenvalues only (ascending) of a Hermitian matrix; cheaper than herm_eigen."""
    try:
        return np.linalg.eigvalsh(hermitize(h))
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"Hermitian eigensolver did not converge: {exc}") from exc


def sym_eigvals(s) -> np.ndarray:
    """Eigenvalues only (ascending) of a real symmetric matrix."""
    try:
        return np.linalg.eigvalsh(symmetrize(s))
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"symmetric eigensolver did not converge: {exc}") from exc


def psd_sqrt(s, tol: float = 1e-10) -> np.ndarray:
    """Symmetric PSD square root of a (numerically) PSD symmetric matrix.

    Eigenvalues in [-tol, 0) are clipped to zero; an eigenvalue below -tol
    raises :class:`NotPSDError`.
    """
    dec = sym_eigen(s)
    w = dec.eigenvalues
    if w[0] < -tol:
        raise NotPSDError(w[0], tol)
    root = np.sqrt(np.clip(w, 0.0, None))
    r = (dec.eigenvectors * root) @ dec.eigenvectors.T
    return (r + r.T) / 2.0


def pinv_herm(h, rel_cutoff: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a Hermitian matrix.

    Eigenvalues with |lambda| <= rel_cutoff * max|lambda| are inverted to 0.
    """
    dec = herm_eigen(h)
    w = dec.eigenvalues
    wmax = np.abs(w).max() if w.size else 0.0
    if wmax == 0.0:
        return np.zeros_like(dec.eigenvectors)
    inv = np.where(np.abs(w) <= rel_cutoff * wmax, 0.0, 1.0 / np.where(w == 0.0, 1.0, w))
    p = (dec.eigenvectors * inv) @ dec.eigenvectors.conj().T
    return (p + p.conj().T) / 2.0


def log_det_spd(s) -> float:
    """log(det S) of a symmetric positive-definite matrix as a sum of log-eigenvalues.

    Never forms the determinant itself, so it does not overflow at large
    dimension. Raises :class:`NotPDError` on any non-positive eigenvalue.
    """
    w = sym_eigvals(s)
    if w[0] <= 0.0:
        raise NotPDError(w[0])
    return float(np.sum(np.log(w)))


def real_embed(h) -> np.ndarray:
    """Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian H.

    The embedding's spectrum is the spectrum of H with every eigenvalue
    doubled in multiplicity, which reduces complex LMIs to real ones.
    """
    m = hermitize(h)
    re, im = np.real(m), np.imag(m)
    top = np.hstack([re, -im])
    bottom = np.hstack([im, re])
    return symmetrize(np.vstack([top, bottom]))
