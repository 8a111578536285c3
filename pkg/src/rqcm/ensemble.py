"""Seeded sampling of GOE matrices and random quantum covariance matrices.

The ensemble: draw a GOE matrix G (off-diagonal variance sigma^2, diagonal
2 sigma^2) and shift it by lambda_max(iJ - G) * I so the Heisenberg constraint
S >= iJ is exactly saturated. Streams are counter-based (Philox keyed by
(seed, stream_id)), so Monte Carlo workers never share state and every sample
is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SymmetricMatrix, herm_eigvals, symmetrize

QCM_TOL = 1e-8


@dataclass(frozen=True)
class RngSeed:
    """Identifies one reproducible random stream."""

    seed: int
    stream_id: int = 0

    def substream(self, offset: int) -> "RngSeed":
        return RngSeed(self.seed, self.stream_id + offset)


def _generator(rng: RngSeed) -> np.random.Generator:
    key = np.array([rng.seed % 2**64, rng.stream_id % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian_block(rng: RngSeed, shape) -> np.ndarray:
    """Standard normal block via Box-Muller on Philox uniforms.

    Box-Muller keeps the mapping from the counter stream to normals explicit
    and platform-stable; u1 is reflected off 0 to stay in (0, 1].
    """
    gen = _generator(rng)
    count = int(np.prod(shape))
    pairs = (count + 1) // 2
    u1 = 1.0 - gen.random(pairs)
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([radius * np.cos(2.0 * np.pi * u2), radius * np.sin(2.0 * np.pi * u2)])
    return z[:count].reshape(shape)


@dataclass(frozen=True)
class GoeSpec:
    """GOE(2n, sigma) parameters; ``normalized`` rescales sigma to sigma/sqrt(2n)."""

    n: int
    sigma: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def effective_sigma(self) -> float:
        return self.sigma / np.sqrt(self.dim) if self.normalized else self.sigma


@dataclass(frozen=True)
class ModeBipartition:
    """Split of n = m + l modes into blocks A (2m x 2m), B, C (2l x 2l)."""

    m: int
    l: int

    def __post_init__(self):
        if self.m < 1 or self.l < 1:
            raise ValueError(f"both parts must have >= 1 mode, got ({self.m}, {self.l})")

    @property
    def n(self) -> int:
        return self.m + self.l


def symplectic_form(n: int) -> np.ndarray:
    """The real antisymmetric form J_2n = [[0,1],[-1,0]] ^ (direct sum n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    j = np.zeros((2 * n, 2 * n))
    idx = np.arange(0, 2 * n, 2)
    j[idx, idx + 1] = 1.0
    j[idx + 1, idx] = -1.0
    return j


def i_symplectic_form(n: int) -> np.ndarray:
    """The Hermitian matrix iJ_2n, with spectrum {-1, +1} each of multiplicity n."""
    return 1j * symplectic_form(n)


class QuantumCovarianceMatrix:
    """2n x 2n real symmetric S certified to satisfy S >= iJ within tolerance.

    ``qcm_defect`` is recomputed at construction (never trusted from the
    caller); S >= iJ for a real S also implies S >= 0, so no separate PSD
    check is needed.
    """

    __slots__ = ("matrix", "modes", "qcm_defect", "shift", "source")

    def __init__(self, matrix, *, shift: float | None = None, source: GoeSpec | None = None,
                 tol: float = QCM_TOL):
        s = symmetrize(matrix)
        d = s.shape[0]
        if d < 2 or d % 2:
            raise ValueError(f"a covariance matrix must have even dimension >= 2, got {d}")
        self.matrix = s
        self.modes = d // 2
        self.shift = shift
        self.source = source
        defect = float(herm_eigvals(s - i_symplectic_form(self.modes))[0])
        if defect < -tol:
            raise NotQCMError(defect, tol)
        self.qcm_defect = defect

    @property
    def dim(self) -> int:
        return 2 * self.modes

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"QuantumCovarianceMatrix(modes={self.modes}, defect={self.qcm_defect:.2e})"


class NotQCMError(ValueError):
    """Heisenberg constraint S >= iJ violated beyond tolerance."""

    def __init__(self, defect, tol):
        self.defect = float(defect)
        super().__init__(
            f"lambda_min(S - iJ) = {defect:.3e} < -{tol:.1e}: not a quantum covariance matrix"
        )


def sample_goe(spec: GoeSpec, rng: RngSeed) -> SymmetricMatrix:
    """One GOE(2n, sigma) draw: G = (M + M^T)/sqrt(2) with M iid N(0, sigma_eff^2).

    This gives off-diagonal variance sigma_eff^2 and diagonal variance
    2 sigma_eff^2.
    """
    d = spec.dim
    m = gaussian_block(rng, (d, d)) * spec.effective_sigma
    return SymmetricMatrix((m + m.T) / np.sqrt(2.0))


def rqcm_shift(g) -> float:
    """The scalar lambda_max(iJ - G) that moves G onto the QCM boundary."""
    g = symmetrize(g)
    d = g.shape[0]
    if d % 2:
        raise ValueError(f"even dimension required, got {d}")
    return float(herm_eigvals(i_symplectic_form(d // 2) - g)[-1])


def rqcm_from(g, *, clamp: bool = False, source: GoeSpec | None = None) -> QuantumCovarianceMatrix:
    """Shift a symmetric G onto the quantum covariance cone: S = G + shift * I.

    By definition the shift is applied even when negative (G already a QCM);
    ``clamp=True`` selects the closest-matrix optimum max(0, shift) instead.
    """
    g = symmetrize(g)
    shift = rqcm_shift(g)
    if clamp:
        shift = max(0.0, shift)
    s = g + shift * np.eye(g.shape[0])
    return QuantumCovarianceMatrix(s, shift=shift, source=source)


def sample_rqcm(spec: GoeSpec, rng: RngSeed, *, clamp: bool = False) -> QuantumCovarianceMatrix:
    """Draw one random quantum covariance matrix from RQCM(2n, sigma)."""
    return rqcm_from(sample_goe(spec, rng), clamp=clamp, source=spec)


def marginal(s: QuantumCovarianceMatrix, m: int) -> QuantumCovarianceMatrix:
    """m-mode marginal: the top-left 2m x 2m block.

    A principal submatrix of S >= iJ_2n dominates iJ_2m, so the result is a
    valid covariance matrix again.
    """
    if not 1 <= m < s.modes:
        raise ValueError(f"marginal size must satisfy 1 <= m < {s.modes}, got {m}")
    return QuantumCovarianceMatrix(s.matrix[: 2 * m, : 2 * m])


def blocks(s, part: ModeBipartition):
    """(A, B, C) blocks of S = [[A, B], [B^T, C]] for an (m, l) mode split."""
    mat = symmetrize(s)
    d = mat.shape[0]
    if 2 * part.n != d:
        raise ValueError(f"partition ({part.m}, {part.l}) inconsistent with dimension {d}")
    k = 2 * part.m
    return mat[:k, :k].copy(), mat[:k, k:].copy(), mat[k:, k:].copy()


def mode_rotation(angles) -> np.ndarray:
    """Ortho-symplectic test element: direct sum of per-mode 2x2 rotations."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    d = 2 * len(angles)
    u = np.zeros((d, d))
    for k, t in enumerate(angles):
        c, s = np.cos(t), np.sin(t)
        u[2 * k: 2 * k + 2, 2 * k: 2 * k + 2] = [[c, s], [-s, c]]
    return u


def swap_blocks(s, part: ModeBipartition) -> np.ndarray:
    """Reorder modes so the second subsystem comes first: [[C, B^T], [B, A]]."""
    a, b, c = blocks(s, part)
    top = np.hstack([c, b.T])
    bottom = np.hstack([b, a])
    return symmetrize(np.vstack([top, bottom]))
