"""Dense complex linear-algebra substrate.

Hermitian certification, the Loewner (positive semidefinite) order,
functional calculus through eigendecompositions, Kronecker products,
real/imaginary parts, numerical-range sector estimation, and Douglas
factorization of range inclusions.

All matrix functions accept stacked inputs with shape ``(..., n, n)`` and
broadcast over the leading axes; single matrices are the zero-leading-axes
case.  Tolerances are relative: every threshold is scaled by
``(1 + Frobenius norm)`` of the quantity it guards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotSectorial,
    RangeInclusionViolated,
    SpectrumOutOfDomain,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SectorEstimate",
    "dagger",
    "herm_part",
    "skew_defect",
    "fro_norm",
    "herm_certify",
    "loewner_leq",
    "loewner_margin",
    "min_eig",
    "funcalc",
    "tensor",
    "re_part",
    "im_part",
    "sector_estimate",
    "sector_certified_alpha",
    "douglas_factor",
    "psd_project_sqrt",
    "truncated_pinv",
]


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerance bundle.

    herm: Hermitian-defect acceptance, psd: semidefiniteness slack,
    rank: pseudoinverse truncation and range-inclusion residuals,
    eq: generic equality comparisons.
    """

    herm: float = 1e-9
    psd: float = 1e-9
    rank: float = 1e-10
    eq: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("herm", "psd", "rank", "eq"):
            if getattr(self, name) < 0:
                raise ValueError(f"tolerance {name} must be nonnegative")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SectorEstimate:
    """Certified sector of the numerical range.

    alpha: half-angle in [0, pi/2) such that all sampled numerical-range
    boundary points lie in {Re z > 0, |Im z| <= Re z * tan(alpha)};
    margin: smallest real part found among the sampled points.
    """

    alpha: float
    margin: float


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, acting on the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def herm_part(a: np.ndarray) -> np.ndarray:
    """(A + A*)/2."""
    return (a + dagger(a)) / 2


def fro_norm(a: np.ndarray) -> np.ndarray | float:
    """Frobenius norm over the last two axes."""
    out = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-1, -2)))
    return float(out) if out.ndim == 0 else out


def skew_defect(a: np.ndarray) -> float:
    """Largest entrywise deviation from Hermitian symmetry."""
    return float(np.max(np.abs(a - dagger(a))))


def _require_square(a: np.ndarray) -> None:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {a.shape}")


def herm_certify(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Certify that ``m`` is Hermitian within tolerance and symmetrize it.

    Returns (M + M*)/2.  Raises NotHermitian when the defect exceeds
    ``tol.herm * (1 + ||M||_F)``.
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    defect = skew_defect(m)
    scale = 1.0 + float(np.max(np.atleast_1d(fro_norm(m))))
    if defect > tol.herm * scale:
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds {tol.herm * scale:.3e}")
    return herm_part(m)


def min_eig(a: np.ndarray) -> np.ndarray | float:
    """Smallest eigenvalue of the Hermitian part, batched."""
    w = np.linalg.eigvalsh(herm_part(np.asarray(a, dtype=complex)))
    out = w[..., 0]
    return float(out) if out.ndim == 0 else out


def loewner_margin(a: np.ndarray, b: np.ndarray) -> np.ndarray | float:
    """lambda_min(B - A): nonnegative iff A <= B in the Loewner order."""
    return min_eig(np.asarray(b, dtype=complex) - np.asarray(a, dtype=complex))


def loewner_leq(a: np.ndarray, b: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """A <= B in the Loewner order, within the graded PSD tolerance."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    diff = b - a
    lam = np.min(np.atleast_1d(min_eig(diff)))
    scale = 1.0 + float(np.max(np.atleast_1d(fro_norm(diff))))
    return bool(lam >= -tol.psd * scale)


def funcalc(
    f: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    domain: tuple[float, float] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Hermitian functional calculus ``U f(Lambda) U*``.

    ``domain``, when given, is a closed interval the spectrum must lie in
    (up to the relative eq tolerance); otherwise a non-finite value of
    ``f`` on the spectrum raises SpectrumOutOfDomain.
    """
    a = herm_part(np.asarray(a, dtype=complex))
    _require_square(a)
    w, u = np.linalg.eigh(a)
    if domain is not None:
        lo, hi = domain
        slack = tol.eq * (1.0 + float(np.max(np.abs(w))))
        if np.any(w < lo - slack) or np.any(w > hi + slack):
            raise SpectrumOutOfDomain(
                f"spectrum [{w.min():.4g}, {w.max():.4g}] outside [{lo:.4g}, {hi:.4g}]"
            )
    with np.errstate(invalid="ignore", divide="ignore"):
        fw = np.asarray(f(w))
    if not np.all(np.isfinite(fw)):
        raise SpectrumOutOfDomain("function not finite on the spectrum")
    return (u * fw[..., None, :]) @ dagger(u)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block (i, j) equals A[i, j] * B."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def re_part(a: np.ndarray) -> np.ndarray:
    """(A + A*)/2, Hermitian by construction."""
    a = np.asarray(a, dtype=complex)
    _require_square(a)
    return herm_part(a)


def im_part(a: np.ndarray) -> np.ndarray:
    """(A - A*)/(2i), Hermitian by construction."""
    a = np.asarray(a, dtype=complex)
    _require_square(a)
    return (a - dagger(a)) / 2j


def sector_certified_alpha(
    mats: np.ndarray, theta_grid_size: int = 256
) -> tuple[np.ndarray, np.ndarray]:
    """Certified sector angles and real-part margins of a matrix stack.

    The sector of half-angle alpha is exactly the intersection of the two
    rotated half-planes {Re(e^{+-i(pi/2 - alpha)} z) >= 0}, so containment
    of the numerical range is certified by lambda_min of the two rotated
    real parts.  Scanning a grid of rotations gives the smallest angle
    certified at a grid node: an upper bound on the true sector angle, the
    safe direction for sec^2(alpha) norm estimates.  Returns (alphas,
    margins) with margin = lambda_min(Re A); margin <= 0 flags a
    non-sectorial matrix (alpha is then pi/2).
    """
    mats = np.atleast_3d(np.asarray(mats, dtype=complex))
    half = max(theta_grid_size // 2, 4)
    phis = np.linspace(0.0, np.pi / 2, half, endpoint=True)
    angles = np.concatenate([phis, -phis[1:]])
    phases = np.exp(1j * angles)
    rotated = herm_part(phases[:, None, None, None] * mats[None, :, :, :])
    g = np.linalg.eigvalsh(rotated)[..., 0]  # (n_angles, m)
    g_pos = g[:half]
    g_neg = np.vstack([g[:1], g[half:]])
    margins = g[0]
    floor = -1e-12 * (1.0 + np.atleast_1d(fro_norm(mats)))
    feasible = (g_pos >= floor[None, :]) & (g_neg >= floor[None, :])
    alphas = np.full(mats.shape[0], np.pi / 2)
    for m in range(mats.shape[0]):
        idx = np.nonzero(feasible[:, m])[0]
        if idx.size:
            alphas[m] = np.pi / 2 - phis[idx.max()]
    return alphas, margins


def sector_estimate(
    a: np.ndarray,
    theta_grid_size: int = 256,
    tol: Tolerances = DEFAULT_TOL,
) -> SectorEstimate:
    """Estimate the smallest sector containing the numerical range.

    Samples boundary points of W(A) as Rayleigh quotients of extremal
    eigenvectors of Re(e^{i theta} A) over a uniform theta grid.  The grid
    is exact for the support function of W(A) up to its angular resolution.
    Raises NotSectorial when a sampled point has nonpositive real part
    (within the relative PSD tolerance).
    """
    a = np.asarray(a, dtype=complex)
    _require_square(a)
    if theta_grid_size < 8:
        raise ValueError("theta_grid_size must be at least 8")
    thetas = np.linspace(0.0, 2 * np.pi, theta_grid_size, endpoint=False)
    phases = np.exp(1j * thetas)
    rotated = herm_part(phases[:, None, None] * a[None, :, :])
    w, u = np.linalg.eigh(rotated)
    top = u[:, :, -1]  # eigenvector of the largest eigenvalue, per angle
    points = np.einsum("ti,ij,tj->t", np.conj(top), a, top)
    re = points.real
    im = points.imag
    scale = 1.0 + float(fro_norm(a))
    margin = float(re.min())
    if margin <= tol.psd * scale:
        raise NotSectorial(
            f"sampled numerical-range point with real part {margin:.3e} "
            "meets the closed left half-plane"
        )
    alpha = float(np.max(np.arctan2(np.abs(im), re)))
    return SectorEstimate(alpha=alpha, margin=margin)


def psd_project_sqrt(
    a22: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Rank-truncated square root and inverse square root of a PSD matrix.

    Eigenvalues at or below ``tol.rank * lambda_max`` are treated as zero.
    Returns (sqrt, pinv of sqrt).
    """
    a22 = herm_part(np.asarray(a22, dtype=complex))
    w, u = np.linalg.eigh(a22)
    cut = tol.rank * max(float(w[-1]), 0.0)
    keep = w > cut
    sq = np.zeros_like(w)
    isq = np.zeros_like(w)
    sq[keep] = np.sqrt(w[keep])
    isq[keep] = 1.0 / np.sqrt(w[keep])
    root = (u * sq) @ dagger(u)
    iroot = (u * isq) @ dagger(u)
    return root, iroot


def truncated_pinv(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """SVD pseudoinverse with singular values <= tol.rank * sigma_max dropped."""
    a = np.asarray(a, dtype=complex)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    cut = tol.rank * (s[0] if s.size else 0.0)
    inv = np.where(s > cut, 1.0 / np.where(s > cut, s, 1.0), 0.0)
    return dagger(vh) @ (inv[:, None] * dagger(u))


def douglas_factor(
    a22: np.ndarray, a21: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Solve A22^{1/2} C = A21 for C via the Douglas factorization.

    Requires ran(A21) inside ran(A22^{1/2}); the inclusion is certified a
    posteriori by the residual ``||A22^{1/2} C - A21|| <= tol.rank * ||A21||``.
    The pseudoinverse truncates the spectrum of A22 at ``tol.rank * lambda_max``
    so that components of A21 against numerically null directions surface in
    the residual instead of being inverted.
    """
    a21 = np.asarray(a21, dtype=complex)
    root, iroot = psd_project_sqrt(a22, tol)
    if root.shape[-1] != a21.shape[0]:
        raise DimensionMismatch(
            f"A22 is {root.shape} but A21 has {a21.shape[0]} rows"
        )
    c = iroot @ a21
    residual = float(np.linalg.norm(root @ c - a21))
    bound = tol.rank * float(np.linalg.norm(a21))
    if residual > bound:
        raise RangeInclusionViolated(
            f"factorization residual {residual:.3e} exceeds {bound:.3e}; "
            "A21 has a component outside ran(A22^{1/2})"
        )
    return c
