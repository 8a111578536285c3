"""Observables of a covariance matrix: spectra, purity, PPT and QCM defects."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensemble import ModeBipartition, QuantumCovarianceMatrix, i_symplectic_form, symplectic_form
from .linalg import herm_eigvals, log_det_spd, psd_sqrt, symmetrize

SYMPLECTIC_ZERO = 1e-8

KINDS = ("ordinary", "symplectic", "ppt_defect")


@dataclass(frozen=True)
class SpectralSample:
    """Ascending spectral values of one matrix, tagged with what they are."""

    values: np.ndarray
    kind: str
    degenerate: bool = field(default=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(v) < 0):
            raise ValueError("spectral values must be ascending")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)


def _matrix_and_modes(s):
    if isinstance(s, QuantumCovarianceMatrix):
        return s.matrix, s.modes
    m = symmetrize(s)
    if m.shape[0] % 2:
        raise ValueError(f"even dimension required, got {m.shape[0]}")
    return m, m.shape[0] // 2


def spectrum(s) -> SpectralSample:
    """Ordinary eigenvalues of S, ascending."""
    m, _ = _matrix_and_modes(s)
    return SpectralSample(np.linalg.eigvalsh(m), "ordinary")


def symplectic_spectrum(s, tol: float = 1e-10) -> SpectralSample:
    """Symplectic eigenvalues: the n positive eigenvalues of sqrt(S) iJ sqrt(S).

    The Hermitian similarity keeps everything on the well-tested Hermitian
    path (valid for S >= 0); psd_sqrt clips eigenvalues within ``tol`` of
    zero, and symplectic values below 1e-8 are reported as 0 with the
    ``degenerate`` flag set.
    """
    m, n = _matrix_and_modes(s)
    root = psd_sqrt(m, tol=tol)
    k = root @ i_symplectic_form(n) @ root
    w = herm_eigvals(k)[n:]
    degenerate = bool(np.any(w < SYMPLECTIC_ZERO))
    if degenerate:
        w = np.where(w < SYMPLECTIC_ZERO, 0.0, w)
    return SpectralSample(w, "symplectic", degenerate=degenerate)


def log_purity(s) -> float:
    """log mu = -1/2 log det S, the log-purity of the Gaussian state with covariance S."""
    m, _ = _matrix_and_modes(s)
    return -0.5 * log_det_spd(m)


def purity_rate(s) -> float:
    """-log(mu)/n, the per-mode purity decay rate."""
    m, n = _matrix_and_modes(s)
    return -log_purity(m) / n


def ppt_form(part: ModeBipartition) -> np.ndarray:
    """The partial-transpose form J_2m (+) (-J_2l) for an (m, l) split.

    Sign convention: minus on the second block. (A variant with +J on both
    blocks has the same spectrum for the form alone but not for the sum
    with S; the minus convention is used everywhere here.)
    """
    d = 2 * part.n
    j = np.zeros((d, d))
    k = 2 * part.m
    j[:k, :k] = symplectic_form(part.m)
    j[k:, k:] = -symplectic_form(part.l)
    return j


def ppt_defect(s, part: ModeBipartition) -> float:
    """lambda_min(S + i(J_2m (+) -J_2l)); the state is PPT iff this is >= -1e-8."""
    m, n = _matrix_and_modes(s)
    if part.n != n:
        raise ValueError(f"partition ({part.m}, {part.l}) inconsistent with {n} modes")
    return float(herm_eigvals(m + 1j * ppt_form(part))[0])


def qcm_defect(s) -> float:
    """lambda_min(S - iJ), the (signed) distance to the Heisenberg constraint."""
    m, n = _matrix_and_modes(s)
    return float(herm_eigvals(m - i_symplectic_form(n))[0])
