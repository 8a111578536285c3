"""Entanglement decisions via sandwich-LMI feasibility.

Separability is complete extendability: a state with covariance blocks
(A, B, C) is separable iff some real symmetric theta satisfies
B^T (A + iJ_2m)^- B <= theta <= C + iJ_2l, and k-extendability iff some real
symmetric Delta satisfies iJ_2l <= Delta <= k/(k-1) [C - B^T (A - iJ_2m)^- B]
- 1/(k-1) iJ_2l. Both are instances of one problem: find a real symmetric X
with L <= X <= U for Hermitian bounds L, U.

The ensemble makes every such problem degenerate: samples saturate
lambda_min(S - iJ) = 0, so U - L is singular and the feasible set has empty
interior, which stalls naive projection methods. The solver therefore
performs a facial reduction first (X = L + W Q W^dagger on the range of
U - L, turning the box into 0 <= Q <= I), eliminates the realness constraint
into an affine subspace, and then maximizes the concave feasibility margin
min(lambda_min(Q), lambda_min(I - Q)) over that subspace with a smoothed
(log-sum-exp) objective and L-BFGS. Every Feasible verdict is backed by a
witness whose constraint violations are re-checked with independent
eigendecompositions; Infeasible reports the best residual found; Undecided
marks the precision band in between, mirroring the fact that boundary labels
are only reliable up to the working tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - threadpoolctl ships with scipy installs
    from contextlib import nullcontext

    def threadpool_limits(limits=None):
        return nullcontext()

from .ensemble import (
    ModeBipartition,
    QuantumCovarianceMatrix,
    blocks,
    i_symplectic_form,
)
from .linalg import NotPSDError, herm_eigen, herm_eigvals, hermitize, pinv_herm
from .spectra import ppt_defect

DEFAULT_TOL = 1e-8
DEFAULT_MAX_EVALS = 5000
RANK_CUT = 1e-10
BETA_LADDER = (1e2, 1e3, 1e4, 1e5, 1e6, 1e7)


class Status(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class SandwichProblem:
    """Find a real symmetric X with lower <= X <= upper (Hermitian bounds)."""

    lower: np.ndarray
    upper: np.ndarray
    tol: float = DEFAULT_TOL
    max_evals: int = DEFAULT_MAX_EVALS

    def __post_init__(self):
        lo = hermitize(self.lower)
        up = hermitize(self.upper)
        if lo.shape != up.shape:
            raise ValueError(f"bound shapes differ: {lo.shape} vs {up.shape}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True)
class FeasibilityResult:
    status: Status
    witness: np.ndarray | None
    residual: float
    iterations: int
    flags: tuple[str, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def verify_witness(x, lower, upper, tol: float = DEFAULT_TOL) -> float:
    """Max constraint violation of a candidate, via independent eigendecompositions."""
    x = np.asarray(x, dtype=float)
    lo = hermitize(lower)
    up = hermitize(upper)
    v1 = herm_eigen(x - lo).eigenvalues[0]
    v2 = herm_eigen(up - x).eigenvalues[0]
    return float(max(0.0, -v1, -v2))


def _verdict(x, problem, evals, flags, exhausted):
    residual = verify_witness(x, problem.lower, problem.upper, problem.tol)
    if residual <= problem.tol:
        return FeasibilityResult(Status.FEASIBLE, x, residual, evals, flags)
    if exhausted or residual <= 10.0 * problem.tol:
        return FeasibilityResult(Status.UNDECIDED, None, residual, evals, flags)
    return FeasibilityResult(Status.INFEASIBLE, None, residual, evals, flags)


def solve_sandwich(problem: SandwichProblem) -> FeasibilityResult:
    """Decide whether a real symmetric X with lower <= X <= upper exists."""
    with threadpool_limits(limits=1):
        return _solve_sandwich_impl(problem)


def _solve_sandwich_impl(problem: SandwichProblem) -> FeasibilityResult:
    lo, up, tol = problem.lower, problem.upper, problem.tol
    d = problem.dim
    flags: list[str] = []

    diff = hermitize(up - lo)
    w, v = np.linalg.eigh(diff)
    wmax = max(float(w[-1]), 0.0)
    if w[0] < -tol:
        return FeasibilityResult(Status.INFEASIBLE, None, float(-w[0]), 1, ("empty-box",))

    keep = w > RANK_CUT * max(wmax, np.finfo(float).tiny)
    rank = int(keep.sum())
    if rank < d:
        flags.append("facial-reduction")
    if rank == 0:
        x = np.real(lo)
        x = (x + x.T) / 2.0
        return _verdict(x, problem, 1, tuple(flags), exhausted=False)

    wall = v[:, keep] * np.sqrt(w[keep])  # d x r, so that diff ~= wall wall^dagger

    # Hermitian Q parameterized by real vector q = (diag, Re upper, Im upper)
    r = rank
    iu = np.triu_indices(r, 1)
    il = np.triu_indices(d, 1)
    n_off = len(iu[0])
    nq = r + 2 * n_off

    def q_to_matrix(q):
        m = np.zeros((r, r), dtype=complex)
        m[np.diag_indices(r)] = q[:r]
        m[iu] = q[r:r + n_off] + 1j * q[r + n_off:]
        m[(iu[1], iu[0])] = q[r:r + n_off] - 1j * q[r + n_off:]
        return m

    # realness constraint Im(lo + wall Q wall^dagger) = 0 as a linear system in q
    tmat = np.empty((len(il[0]), nq))
    unit = np.zeros(nq)
    for j in range(nq):
        unit[j] = 1.0
        tmat[:, j] = np.imag(wall @ q_to_matrix(unit) @ wall.conj().T)[il]
        unit[j] = 0.0
    rhs = -np.imag(lo)[il]

    u_svd, s_svd, vt_svd = np.linalg.svd(tmat, full_matrices=True)
    s_top = s_svd[0] if s_svd.size else 0.0
    t_rank = int((s_svd > 1e-12 * max(s_top, np.finfo(float).tiny)).sum())
    q_base = vt_svd[:t_rank].T @ ((u_svd.T[:t_rank] @ rhs) / s_svd[:t_rank]) if t_rank else np.zeros(nq)
    if np.linalg.norm(tmat @ q_base - rhs) > 1e-8 * (1.0 + np.linalg.norm(rhs)):
        flags.append("realness-inconsistent")
        x = np.real(lo + wall @ q_to_matrix(q_base) @ wall.conj().T)
        x = (x + x.T) / 2.0
        return _verdict(x, problem, 1, tuple(flags), exhausted=False)
    null_basis = vt_svd[t_rank:].T  # nq x n_free
    n_free = null_basis.shape[1]

    evals = 0

    def smoothed_margin(y, beta):
        """-(margin) and gradient; margin = softmin of eig(Q) and eig(I - Q)."""
        nonlocal evals
        evals += 1
        q = q_base + (null_basis @ y if n_free else 0.0)
        mat = q_to_matrix(q)
        lam, vec = np.linalg.eigh(mat)
        terms = np.concatenate([lam, 1.0 - lam])
        lowest = terms.min()
        weights = np.exp(-beta * (terms - lowest))
        z = weights.sum()
        margin = lowest - np.log(z) / beta
        coeff = (weights[: len(lam)] - weights[len(lam):]) / z
        grad_mat = (vec * coeff) @ vec.conj().T
        grad_q = np.concatenate([
            np.real(np.diag(grad_mat)),
            2.0 * np.real(grad_mat[iu]),
            2.0 * np.imag(grad_mat[iu]),
        ])
        grad_y = null_basis.T @ grad_q if n_free else np.zeros(0)
        return -margin, -grad_y

    y = np.zeros(n_free)
    exhausted = False
    if n_free:
        for beta in BETA_LADDER:
            res = minimize(smoothed_margin, y, args=(beta,), jac=True, method="L-BFGS-B",
                           options={"maxiter": 200, "ftol": 1e-18, "gtol": 1e-14})
            y = res.x
            if evals >= problem.max_evals:
                exhausted = True
                break

    q = q_base + (null_basis @ y if n_free else 0.0)
    mat = q_to_matrix(q)
    lam, vec = np.linalg.eigh(mat)
    x_raw = np.real(lo + wall @ mat @ wall.conj().T)
    x_raw = (x_raw + x_raw.T) / 2.0
    # box-clipped companion candidate; realness may degrade slightly, keep the better one
    clipped = (vec * np.clip(lam, 0.0, 1.0)) @ vec.conj().T
    x_clip = np.real(lo + wall @ clipped @ wall.conj().T)
    x_clip = (x_clip + x_clip.T) / 2.0
    r_raw = verify_witness(x_raw, lo, up, tol)
    r_clip = verify_witness(x_clip, lo, up, tol)
    x_best = x_raw if r_raw <= r_clip else x_clip
    return _verdict(x_best, problem, max(evals, 1), tuple(flags), exhausted=exhausted)


# ---------------------------------------------------------------------------
# the two LMIs

def lower_bound_matrix(s, part: ModeBipartition, rel_cutoff: float = 1e-10) -> np.ndarray:
    """B^T (A + iJ_2m)^- B: the lower bound of the complete-extendability sandwich."""
    a, b, _ = blocks(s, part)
    form = a + i_symplectic_form(part.m)
    lam_min = float(herm_eigvals(form)[0])
    if lam_min < -1e-6:
        raise NotPSDError(lam_min, 1e-6)
    m = b.T @ pinv_herm(form, rel_cutoff) @ b
    return hermitize(m)


def upper_bound_k(s, part: ModeBipartition, k: int, rel_cutoff: float = 1e-10) -> np.ndarray:
    """k/(k-1) [C - B^T (A - iJ_2m)^- B] - 1/(k-1) iJ_2l, the k-extendability ceiling."""
    if k < 2:
        raise ValueError(f"the k-extendability bound requires k >= 2, got {k}")
    a, b, c = blocks(s, part)
    schur = c - b.T @ pinv_herm(a - i_symplectic_form(part.m), rel_cutoff) @ b
    kk = float(k)
    return hermitize(kk / (kk - 1.0) * schur - 1.0 / (kk - 1.0) * i_symplectic_form(part.l))


def _schur_singular(s, part: ModeBipartition, rel_cutoff: float = 1e-10) -> bool:
    a, _, _ = blocks(s, part)
    w = np.abs(herm_eigvals(a - i_symplectic_form(part.m)))
    return bool(w.min() <= rel_cutoff * max(w.max(), np.finfo(float).tiny))


def is_separable(s, part: ModeBipartition, tol: float = DEFAULT_TOL,
                 max_evals: int = DEFAULT_MAX_EVALS) -> FeasibilityResult:
    """Separability = complete extendability: feasibility of M <= theta <= C + iJ.

    theta >= M >= 0 holds automatically, so positivity of theta needs no
    extra constraint.
    """
    lower = lower_bound_matrix(s, part)
    _, _, c = blocks(s, part)
    upper = c + i_symplectic_form(part.l)
    return solve_sandwich(SandwichProblem(lower, upper, tol=tol, max_evals=max_evals))


def is_k_extendable(s, part: ModeBipartition, k: int, tol: float = DEFAULT_TOL,
                    max_evals: int = DEFAULT_MAX_EVALS) -> FeasibilityResult:
    """k-extendability with respect to the second subsystem.

    k = 1 is feasible by convention (every state extends trivially); the
    witness is the state's own C block.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        _, _, c = blocks(s, part)
        residual = verify_witness(c, i_symplectic_form(part.l), c, tol)
        return FeasibilityResult(Status.FEASIBLE, c, residual, 0, ("k1-convention",))
    lower = i_symplectic_form(part.l)
    upper = upper_bound_k(s, part, k)
    result = solve_sandwich(SandwichProblem(lower, upper, tol=tol, max_evals=max_evals))
    if _schur_singular(s, part):
        result = FeasibilityResult(result.status, result.witness, result.residual,
                                   result.iterations, result.flags + ("schur-pseudo-inverse",))
    return result


@dataclass(frozen=True)
class ExtendabilityReport:
    """Joint separability / PPT / max-k verdict for one sample."""

    separable: bool
    ppt: bool
    max_k: int
    max_k_at_cap: bool
    per_k: tuple[tuple[int, Status], ...]
    k_cap: int
    undecided_ks: tuple[int, ...] = ()
    separability_residual: float = 0.0
    ppt_defect: float = 0.0
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def max_k_label(self) -> str:
        return f">={self.k_cap}" if self.max_k_at_cap else str(self.max_k)


def max_extendability(s, part: ModeBipartition, k_cap: int = 64,
                      tol: float = DEFAULT_TOL) -> ExtendabilityReport:
    """Largest k <= k_cap at which the sample is k-extendable.

    Separable samples are reported as ">= k_cap" without a per-k search.
    Monotonicity (k-extendable implies j-extendable for j <= k) justifies the
    doubling + binary search; Undecided probes are treated conservatively as
    infeasible for the search and recorded.
    """
    if isinstance(s, QuantumCovarianceMatrix):
        matrix = s.matrix
    else:
        matrix = np.asarray(s, dtype=float)
    defect = ppt_defect(matrix, part)
    ppt = bool(defect >= -tol)
    sep = is_separable(matrix, part, tol=tol)
    flags = list(sep.flags)
    undecided: list[int] = []
    per_k: dict[int, Status] = {}

    if sep.status is Status.FEASIBLE:
        return ExtendabilityReport(
            separable=True, ppt=ppt, max_k=k_cap, max_k_at_cap=True, per_k=(),
            k_cap=k_cap, separability_residual=sep.residual, ppt_defect=defect,
            flags=tuple(flags))
    if sep.status is Status.UNDECIDED:
        flags.append("separability-undecided")

    def probe(k: int) -> bool:
        result = is_k_extendable(matrix, part, k, tol=tol)
        per_k[k] = result.status
        if result.status is Status.UNDECIDED:
            undecided.append(k)
        return result.status is Status.FEASIBLE

    lo, hi = 1, None  # lo: largest known-feasible, hi: smallest known-infeasible
    k = 2
    while k <= k_cap:
        if probe(k):
            lo = k
            k *= 2
        else:
            hi = k
            break
    if hi is None and lo < k_cap:
        # doubling left (lo, k_cap] unexplored; settle the cap itself first
        if probe(k_cap):
            lo = k_cap
        else:
            hi = k_cap
    if hi is not None:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if probe(mid):
                lo = mid
            else:
                hi = mid
    return ExtendabilityReport(
        separable=False, ppt=ppt, max_k=lo, max_k_at_cap=lo >= k_cap,
        per_k=tuple(sorted(per_k.items())), k_cap=k_cap,
        undecided_ks=tuple(undecided), separability_residual=sep.residual,
        ppt_defect=defect, flags=tuple(flags))
