"""Theoretical limit laws: semicircles, Stieltjes cubics, support edges, rates.

Two families of densities are computed by solving a cubic equation for the
Cauchy transform g(z) and applying Stieltjes inversion
f(x) = -(1/pi) Im g(x + i eps):

* ``mu_sigma``: the symmetric Bernoulli plus semicircle free sum governing
  iJ - G/sqrt(2n). Subordination g = g_B(z - sigma^2 g), g_B(w) = w/(w^2-1)
  gives  sigma^4 g^3 - 2 sigma^2 z g^2 + (z^2 - 1 + sigma^2) g - z = 0.

* ``symplectic``: the Bernoulli times shifted-semicircle free product
  governing symplectic eigenvalues. From the S-transform product one gets
  z sigma^4 G^3 - sigma^2 (2z^2 + sigma^2) G^2 + z (z^2 + 2 sigma^2 - R^2) G - z^2 = 0
  whose discriminant vanishes exactly at z in {+-1, +-sqrt(F(sigma))}.

Branch selection: all three Cardano roots are computed; the Stieltjes branch
has Im g < 0 in the upper half plane and g ~ 1/z at infinity, and is tracked
by continuity (descent in the imaginary offset for scalars, left-to-right
continuation on grids, ties to the nearest previous value).

Inversion offset eps = 1e-7 with Richardson refinement: evaluating at eps and
eps/2 and extrapolating cancels the O(eps) term, which is what keeps the
density below 1e-9 just outside the support edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

EPS_INVERSION = 1e-7
QUAD_TOL = 1e-6


class DomainError(ValueError):
    """Requested quantity is undefined for this parameter range."""


class BranchError(RuntimeError):
    """Stieltjes branch selection failed beyond tolerance."""


# ---------------------------------------------------------------------------
# closed-form edges

def edge_R(sigma: float) -> float:
    """Outer support edge R(sigma) of the Bernoulli (+) semicircle free sum."""
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    r = math.sqrt(8.0 + sigma * sigma)
    return (1.0 + sigma / 4.0 * (r - sigma)) * math.sqrt(1.0 + sigma / 2.0 * (r + sigma))


def edge_L(sigma: float) -> float:
    """Inner support edge L(sigma); defined only for 0 < sigma < 1.

    At sigma = 1 the two support intervals merge (phase transition) and the
    inner edge ceases to exist.
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if sigma >= 1:
        raise DomainError(f"the inner edge exists only for sigma < 1, got {sigma}")
    r = math.sqrt(8.0 + sigma * sigma)
    return (1.0 - sigma / 4.0 * (r + sigma)) * math.sqrt(1.0 - sigma / 2.0 * (r - sigma))


def _F(sigma: float) -> float:
    r = math.sqrt(sigma * sigma + 8.0)
    s2 = sigma * sigma
    s3 = s2 * sigma
    s4 = s2 * s2
    s5 = s4 * sigma
    s6 = s4 * s2
    inner = (-4096.0 * s6 + 78336.0 * s4 + 49152.0 * s2
             + 4096.0 * r * sigma + 4096.0 * r * s5 + 33280.0 * r * s3 + 1024.0)
    return 0.5 - s4 / 8.0 + 4.0 * s2 + r * sigma + r * s3 / 8.0 + math.sqrt(inner) / 64.0


def edge_sqrtF(sigma: float) -> float:
    """Upper edge sqrt(F(sigma)) of the limiting symplectic eigenvalue support."""
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return math.sqrt(_F(sigma))


@dataclass(frozen=True)
class EdgeSet:
    """All closed-form support edges at one sigma; L present only for sigma < 1."""

    sigma: float
    R: float
    L: float | None
    sqrtF: float


def edges(sigma: float) -> EdgeSet:
    return EdgeSet(
        sigma=sigma,
        R=edge_R(sigma),
        L=edge_L(sigma) if sigma < 1 else None,
        sqrtF=edge_sqrtF(sigma),
    )


def semicircle_density(m: float, sigma: float, x) -> float | np.ndarray:
    """Semicircle density sqrt(4 sigma^2 - (x-m)^2)/(2 pi sigma^2) on |x-m| <= 2 sigma."""
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=float)
    u = 4.0 * sigma * sigma - (x - m) ** 2
    out = np.where(u > 0.0, np.sqrt(np.clip(u, 0.0, None)) / (2.0 * np.pi * sigma * sigma), 0.0)
    return out.item() if out.ndim == 0 else out


def theoretical_marginal_density(sigma: float, t: float, x) -> float | np.ndarray:
    """Limit law of a t-fraction marginal's eigenvalues: SC centered at R(sigma), width sqrt(t) sigma."""
    if not 0.0 < t <= 1.0:
        raise DomainError(f"t must lie in (0, 1], got {t}")
    return semicircle_density(edge_R(sigma), math.sqrt(t) * sigma, x)


# ---------------------------------------------------------------------------
# cubic machinery

def cardano_roots(a, b, c, d) -> np.ndarray:
    """All three complex roots of a x^3 + b x^2 + c x + d = 0, elementwise.

    Inputs broadcast; result has shape (..., 3). The leading coefficient must
    be nonzero.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex) / a
    c = np.asarray(c, dtype=complex) / a
    d = np.asarray(d, dtype=complex) / a
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    sq = np.sqrt(disc)
    u3 = -q / 2.0 + sq
    alt = -q / 2.0 - sq
    # avoid the cancellation-prone branch when one side nearly vanishes
    u3 = np.where(np.abs(u3) >= np.abs(alt), u3, alt)
    u = u3 ** (1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * omega ** k
        safe = np.where(uk == 0, 1.0, uk)
        tk = np.where(uk == 0, 0.0, safe - p / (3.0 * safe))
        roots.append(tk - b / 3.0)
    return np.stack(roots, axis=-1)


def _mu_coeffs(sigma: float, z):
    s2 = sigma * sigma
    return s2 * s2, -2.0 * s2 * z, z * z - 1.0 + s2, -z


def _symplectic_coeffs(sigma: float, z):
    s2 = sigma * sigma
    r2 = edge_R(sigma) ** 2
    return z * s2 * s2, -s2 * (2.0 * z * z + s2), z * (z * z + 2.0 * s2 - r2), -z * z


def _descend_branch(coeffs, x: float, sigma: float, eps: float) -> complex:
    """Track the Stieltjes root from far up the imaginary axis down to x + i eps."""
    t = 50.0 * max(1.0, sigma) * max(1.0, abs(x))
    z = complex(x, t)
    roots = cardano_roots(*coeffs(sigma, z))
    g = roots[np.argmin(np.abs(roots - 1.0 / z))]
    while t > eps:
        t = max(eps, t / 1.25)
        z = complex(x, t)
        roots = cardano_roots(*coeffs(sigma, z))
        g = roots[np.argmin(np.abs(roots - g))]
    if g.imag > 1e-6:
        raise BranchError(f"selected root has Im g = {g.imag:.2e} > 0 at x = {x}")
    return complex(g)


def _grid_branch(coeffs, xs: np.ndarray, sigma: float, eps: float) -> np.ndarray:
    """Stieltjes root on an ascending grid via left-to-right continuity."""
    z = xs.astype(complex) + 1j * eps
    roots = cardano_roots(*coeffs(sigma, z))
    out = np.empty(len(xs), dtype=complex)
    prev = _descend_branch(coeffs, float(xs[0]), sigma, eps)
    for i in range(len(xs)):
        cand = roots[i]
        mask = cand.imag <= 1e-9
        pool = cand[mask] if mask.any() else cand
        g = pool[np.argmin(np.abs(pool - prev))]
        out[i] = g
        prev = g
    return out


def _invert(g_eps: complex | np.ndarray, g_half: complex | np.ndarray):
    """Richardson-refined Stieltjes inversion: -(1/pi) Im (2 g(eps/2) - g(eps))."""
    val = -(2.0 * np.imag(g_half) - np.imag(g_eps)) / np.pi
    return np.clip(val, 0.0, None)


def mu_sigma_density(sigma: float, x: float, eps: float = EPS_INVERSION) -> float:
    """Density at x of mu_sigma = (Bernoulli(+-1)) boxplus SC_sigma.

    Supported on [-R, R] for sigma >= 1 and on +-[L, R] for sigma < 1.
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    g1 = _descend_branch(_mu_coeffs, x, sigma, eps)
    g2 = _descend_branch(_mu_coeffs, x, sigma, eps / 2.0)
    return float(_invert(g1, g2))


def symplectic_limit_density(sigma: float, x: float, eps: float = EPS_INVERSION) -> float:
    """Density at x >= 0 of the limiting symplectic eigenvalue law.

    The underlying free product measure is symmetric; its non-negative part
    carries mass 1 after doubling. Supported on [1, sqrt(F(sigma))].
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if x < 0:
        raise DomainError(f"symplectic density is defined for x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    g1 = _descend_branch(_symplectic_coeffs, x, sigma, eps)
    g2 = _descend_branch(_symplectic_coeffs, x, sigma, eps / 2.0)
    return float(2.0 * _invert(g1, g2))


def stieltjes_transform(kind: str, sigma: float, z: complex) -> complex:
    """The cubic's Stieltjes branch at one point of the upper half plane."""
    if np.imag(z) <= 0:
        raise DomainError("z must lie in the open upper half plane")
    coeffs = {"mu": _mu_coeffs, "symplectic": _symplectic_coeffs}[kind]
    return _descend_branch(coeffs, float(np.real(z)), sigma, float(np.imag(z)))


# ---------------------------------------------------------------------------
# quadrature

def _simpson(f, a, fa, b, fb, m, fm):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(f, a, fa, m, fm, lm, flm)
    right = _simpson(f, m, fm, b, fb, rm, frm)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return (_adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + _adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1))


def adaptive_simpson(f, a: float, b: float, tol: float = QUAD_TOL, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, fa, b, fb, m, fm)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def integrate_with_soft_edges(f, a: float, b: float, tol: float = QUAD_TOL) -> float:
    """Integrate f over [a, b] with x = edge +- u^2 substitutions at both ends.

    The substitution flattens inverse-square-root behaviour at hard spectral
    edges, where plain Simpson converges poorly.
    """
    if b <= a:
        return 0.0
    m = 0.5 * (a + b)
    wa = math.sqrt(m - a)
    wb = math.sqrt(b - m)
    left = adaptive_simpson(lambda u: 2.0 * u * f(a + u * u), 0.0, wa, tol / 2.0)
    right = adaptive_simpson(lambda u: 2.0 * u * f(b - u * u), 0.0, wb, tol / 2.0)
    return left + right


def purity_rate_LD(sigma: float, tol: float = QUAD_TOL) -> float:
    """LD(sigma) = integral of log(x) against SC_{R(sigma), sigma}.

    Well defined for every sigma > 0 since R(sigma) > 2 sigma keeps the
    semicircle support strictly positive.
    """
    r = edge_R(sigma)
    return integrate_with_soft_edges(
        lambda x: math.log(x) * semicircle_density(r, sigma, x),
        r - 2.0 * sigma, r + 2.0 * sigma, tol)


def energy_per_mode(sigma: float, tol: float = 1e-5) -> float:
    """Mean of the limiting symplectic eigenvalue law: integral of x f(x) on [1, sqrt F]."""
    hi = edge_sqrtF(sigma)
    return integrate_with_soft_edges(
        lambda x: x * symplectic_limit_density(sigma, x), 1.0, hi, tol)


# ---------------------------------------------------------------------------
# sampled curves

@dataclass(frozen=True)
class DensityCurve:
    """A sampled theoretical density with its declared support."""

    grid: np.ndarray
    density: np.ndarray
    support: tuple[tuple[float, float], ...]
    kind: str
    sigma: float
    total_mass: float = field(default=0.0)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        d = np.asarray(self.density, dtype=float)
        if g.shape != d.shape or g.ndim != 1:
            raise ValueError("grid and density must be 1-d arrays of equal length")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly ascending")
        if np.any(d < 0):
            raise ValueError("density must be non-negative")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "density", d)
        object.__setattr__(self, "total_mass", float(np.trapezoid(d, g)))

    def __call__(self, x) -> np.ndarray:
        """Linear interpolation on the grid, zero outside."""
        return np.interp(np.asarray(x, dtype=float), self.grid, self.density, left=0.0, right=0.0)


def mu_sigma_curve(sigma: float, points: int = 801, eps: float = EPS_INVERSION) -> DensityCurve:
    """mu_sigma density sampled on [-R, R] (the gap shows as zero density for sigma < 1)."""
    r = edge_R(sigma)
    xs = np.linspace(-r, r, points)
    g1 = _grid_branch(_mu_coeffs, xs, sigma, eps)
    g2 = _grid_branch(_mu_coeffs, xs, sigma, eps / 2.0)
    dens = _invert(g1, g2)
    if sigma < 1:
        left = edge_L(sigma)
        support = ((-r, -left), (left, r))
    else:
        support = ((-r, r),)
    return DensityCurve(xs, dens, support, "mu", sigma)


def eigenvalue_limit_curve(sigma: float, points: int = 801) -> DensityCurve:
    """Shifted semicircle SC_{R(sigma), sigma}, the eigenvalue limit law."""
    r = edge_R(sigma)
    xs = np.linspace(r - 2.0 * sigma, r + 2.0 * sigma, points)
    return DensityCurve(xs, semicircle_density(r, sigma, xs),
                        ((r - 2.0 * sigma, r + 2.0 * sigma),), "eigen", sigma)


def symplectic_limit_curve(sigma: float, points: int = 801, eps: float = EPS_INVERSION) -> DensityCurve:
    """Limiting symplectic eigenvalue density on [1, sqrt(F(sigma))]."""
    hi = edge_sqrtF(sigma)
    xs = np.linspace(1.0, hi, points)
    g1 = _grid_branch(_symplectic_coeffs, xs, sigma, eps)
    g2 = _grid_branch(_symplectic_coeffs, xs, sigma, eps / 2.0)
    dens = 2.0 * _invert(g1, g2)
    return DensityCurve(xs, dens, ((1.0, hi),), "symplectic", sigma)


def marginal_limit_curve(sigma: float, t: float, points: int = 801) -> DensityCurve:
    """Eigenvalue limit of the t-fraction marginal: SC_{R(sigma), sqrt(t) sigma}."""
    if not 0.0 < t <= 1.0:
        raise DomainError(f"t must lie in (0, 1], got {t}")
    r = edge_R(sigma)
    w = math.sqrt(t) * sigma
    xs = np.linspace(r - 2.0 * w, r + 2.0 * w, points)
    return DensityCurve(xs, semicircle_density(r, w, xs),
                        ((r - 2.0 * w, r + 2.0 * w),), "marginal", sigma, meta={"t": t})
