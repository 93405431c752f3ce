"""Shorted operators and Schur complements.

Two pivot conventions coexist in the literature and both are served here:
the shorted operator of a PSD matrix keeps the pivot block (maximality
semantics), while half-plane and sector results usually keep the block
complementary to the eliminated one.  ``schur_generic`` takes an explicit
``keep`` selector so each call site states its convention.

The shorted operator tolerates singular eliminated blocks through the
Douglas factorization (range inclusion holds for PSD inputs);
``schur_generic`` refuses singular eliminated blocks instead, since no
range guarantee exists for general matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotSectorial,
    DomainViolation,
    EliminatedBlockSingular,
    NotPSD,
    RotationNotFound,
    SectorBoundViolated,
)
from .matcore import (
    DEFAULT_TOL,
    Tolerances,
    dagger,
    douglas_factor,
    fro_norm,
    herm_part,
    im_part,
    min_eig,
    re_part,
    sector_certified_alpha,
    sector_estimate,
    tensor,
    truncated_pinv,
)
from .pencil import RawPencil, pencil_eval_shifted

__all__ = [
    "PivotSubspace",
    "ShortedResult",
    "shorted_psd",
    "schur_generic",
    "sector_bound_check",
    "SectorBoundReport",
    "schur_pencil",
]


@dataclass(frozen=True)
class PivotSubspace:
    """Orthonormal basis of a distinguished subspace S and its projection."""

    ambient_dim: int
    basis: np.ndarray  # (ambient_dim, m), orthonormal columns

    def __post_init__(self) -> None:
        basis = np.asarray(self.basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionMismatch("basis must be ambient_dim x m")
        gram = dagger(basis) @ basis
        if np.linalg.norm(gram - np.eye(basis.shape[1])) > DEFAULT_TOL.eq * basis.shape[1]:
            raise DimensionMismatch("basis columns are not orthonormal")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_indices(cls, ambient_dim: int, indices: list[int]) -> "PivotSubspace":
        basis = np.zeros((ambient_dim, len(indices)), dtype=complex)
        for col, idx in enumerate(indices):
            basis[idx, col] = 1.0
        return cls(ambient_dim, basis)

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "PivotSubspace":
        v = np.asarray(v, dtype=complex).reshape(-1)
        return cls(v.size, (v / np.linalg.norm(v))[:, None])

    @classmethod
    def from_basis(cls, basis: np.ndarray) -> "PivotSubspace":
        basis = np.asarray(basis, dtype=complex)
        return cls(basis.shape[0], basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projection(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    def perp_basis(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement."""
        p = np.eye(self.ambient_dim) - self.projection
        w, u = np.linalg.eigh(herm_part(p))
        return u[:, w > 0.5]

    def embed(self, y: np.ndarray) -> np.ndarray:
        """Zero-pad an operator on S into the ambient space."""
        return self.basis @ np.asarray(y, dtype=complex) @ dagger(self.basis)


@dataclass(frozen=True)
class ShortedResult:
    """Shorted operator on S, its Douglas factor, and the factorization defect."""

    shorted: np.ndarray
    factor_c: np.ndarray
    defect: float


def _blocks(a: np.ndarray, s: PivotSubspace) -> tuple[np.ndarray, ...]:
    q = s.basis
    qp = s.perp_basis()
    a = np.asarray(a, dtype=complex)
    if a.shape != (s.ambient_dim, s.ambient_dim):
        raise DimensionMismatch(f"matrix shape {a.shape} vs ambient {s.ambient_dim}")
    return (
        dagger(q) @ a @ q,
        dagger(q) @ a @ qp,
        dagger(qp) @ a @ q,
        dagger(qp) @ a @ qp,
    )


def shorted_psd(
    a: np.ndarray, s: PivotSubspace, tol: Tolerances = DEFAULT_TOL
) -> ShortedResult:
    """Shorted operator of a PSD matrix on the subspace S.

    Returns ``A_11 - C* C`` with C the Douglas factor of (A_22, A_21); the
    result is the maximal self-adjoint operator on S sitting below A.
    Singular A_22 is handled by the pseudoinverse route, justified by the
    range inclusion ran(A_21) in ran(A_22^{1/2}) valid for PSD inputs.
    """
    a = herm_part(np.asarray(a, dtype=complex))
    lam = min_eig(a)
    if lam < -tol.psd * (1.0 + fro_norm(a)):
        raise NotPSD(f"input has minimum eigenvalue {lam:.3e}")
    a11, _, a21, a22 = _blocks(a, s)
    c = douglas_factor(a22, a21, tol)
    root_res = np.linalg.norm(_sqrt_psd(a22) @ c - a21)
    shorted = herm_part(a11 - dagger(c) @ c)
    return ShortedResult(shorted=shorted, factor_c=c, defect=float(root_res))


def _sqrt_psd(a: np.ndarray) -> np.ndarray:
    w, u = np.linalg.eigh(herm_part(a))
    return (u * np.sqrt(np.clip(w, 0.0, None))) @ dagger(u)


def schur_generic(
    a: np.ndarray,
    s: PivotSubspace,
    keep: str = "s",
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Schur complement of a general matrix: kept block minus cross terms.

    ``keep="s"`` keeps the S block and eliminates its complement;
    ``keep="perp"`` keeps the complement and eliminates the S block.  The
    eliminated block must be invertible (smallest singular value above
    ``tol.rank`` times the largest).
    """
    a11, a12, a21, a22 = _blocks(np.asarray(a, dtype=complex), s)
    if keep == "s":
        kept, cross_kr, cross_rk, removed = a11, a12, a21, a22
    elif keep == "perp":
        kept, cross_kr, cross_rk, removed = a22, a21, a12, a11
    else:
        raise ValueError("keep must be 's' or 'perp'")
    if removed.size == 0:
        return kept
    sv = np.linalg.svd(removed, compute_uv=False)
    if sv[-1] <= tol.rank * sv[0]:
        raise EliminatedBlockSingular(
            f"eliminated block has singular values within {sv[-1]:.3e}/{sv[0]:.3e}"
        )
    return kept - cross_kr @ np.linalg.solve(removed, cross_rk)


@dataclass(frozen=True)
class SectorBoundReport:
    """Certified sector angle and the per-index singular value comparison."""

    alpha: float
    singular_value_pairs: tuple[tuple[float, float], ...]
    norm_pair: tuple[float, float]
    passed: bool


def sector_bound_check(
    a: np.ndarray,
    s: PivotSubspace,
    theta_grid_size: int = 256,
    tol: Tolerances = DEFAULT_TOL,
) -> SectorBoundReport:
    """Check the sec^2(alpha) singular-value bound for sectorial matrices.

    Certifies W(A) within a sector of half-angle alpha, eliminates the S
    block (keeping its complement, whose raw block is A_22), and compares
    sigma_j of the complement against sec^2(alpha) * sigma_j(A_22), plus the
    norm form ||S(A)|| <= sec^2(alpha) ||A||.
    """
    a = np.asarray(a, dtype=complex)
    alphas, margins = sector_certified_alpha(a[None, :, :], theta_grid_size)
    if margins[0] <= tol.psd * (1.0 + fro_norm(a)):
        raise NotSectorial(f"matrix real part has minimum eigenvalue {margins[0]:.3e}")
    alpha = float(alphas[0])
    comp = schur_generic(a, s, keep="perp", tol=tol)
    _, _, _, a22 = _blocks(a, s)
    sec2 = 1.0 / np.cos(alpha) ** 2
    sv_s = np.linalg.svd(comp, compute_uv=False)
    sv_a22 = np.linalg.svd(a22, compute_uv=False)
    pairs = tuple((float(x), float(sec2 * y)) for x, y in zip(sv_s, sv_a22))
    norm_pair = (
        float(np.linalg.norm(comp, 2)),
        float(sec2 * np.linalg.norm(np.asarray(a, dtype=complex), 2)),
    )
    ok = all(x <= y * (1.0 + tol.eq) for x, y in pairs)
    ok = ok and norm_pair[0] <= norm_pair[1] * (1.0 + tol.eq)
    return SectorBoundReport(
        alpha=alpha, singular_value_pairs=pairs, norm_pair=norm_pair, passed=ok
    )


def _pinv_eliminate(
    kept: np.ndarray,
    cross_kr: np.ndarray,
    cross_rk: np.ndarray,
    removed: np.ndarray,
    tol: Tolerances,
) -> np.ndarray:
    """Eliminate through a rank-truncated pseudoinverse with a range check."""
    if removed.size == 0:
        return kept
    pinv = truncated_pinv(removed, tol)
    sol = pinv @ cross_rk
    residual = float(np.linalg.norm(removed @ sol - cross_rk))
    bound = tol.rank * (1.0 + float(np.linalg.norm(cross_rk)))
    if residual > bound:
        raise EliminatedBlockSingular(
            f"pseudoinverse elimination residual {residual:.3e} exceeds {bound:.3e}"
        )
    return kept - cross_kr @ sol


def in_right_halfspace(x: tuple[np.ndarray, ...], tol: Tolerances = DEFAULT_TOL) -> bool:
    """All components have positive definite real part."""
    return all(min_eig(re_part(xi)) > tol.psd * (1.0 + fro_norm(xi)) for xi in x)


def in_upper_halfspace(x: tuple[np.ndarray, ...], tol: Tolerances = DEFAULT_TOL) -> bool:
    """All components have positive definite imaginary part."""
    return all(min_eig(im_part(xi)) > tol.psd * (1.0 + fro_norm(xi)) for xi in x)


def schur_pencil(
    pencil: RawPencil,
    x: tuple[np.ndarray, ...],
    s: PivotSubspace,
    theta_grid_size: int = 256,
    theta_search: int = 180,
    tol: Tolerances = DEFAULT_TOL,
    check_bound: bool = True,
) -> np.ndarray:
    """Schur complement of the shifted pencil evaluation, keeping P = P_S (x) I.

    Arguments must lie in one of the operator half-spaces: all Re X_i > 0 or
    all Im X_i > 0.  In the second case the matrix is rotated by e^{i theta}
    (theta searched on a uniform grid in (-pi/2, 0]) until its compressed
    real part is positive definite, complemented, then unrotated.  The
    sec^2(alpha) norm bound is asserted on the rotated matrix.
    """
    xs = tuple(np.asarray(m, dtype=complex) for m in x)
    if s.ambient_dim != pencil.size:
        raise DimensionMismatch("pivot subspace must live on the coefficient space")
    sigma = in_right_halfspace(xs, tol)
    pi = in_upper_halfspace(xs, tol)
    if not (sigma or pi):
        raise DomainViolation("tuple lies in neither operator half-space")

    n = xs[0].shape[-1]
    m = pencil_eval_shifted(pencil, xs)
    big = PivotSubspace.from_basis(tensor(s.basis, np.eye(n)))

    if s.dim == s.ambient_dim:
        return m  # trivial pivot: nothing to eliminate

    # essential subspace of the coefficient matrices; outside it the pencil is 0
    total = herm_part(pencil.b0 + pencil.coeff_sum())
    w, u = np.linalg.eigh(total)
    essential = u[:, w > tol.rank * max(float(w[-1]), 0.0)]
    ess = tensor(essential, np.eye(n))
    m_ess = dagger(ess) @ m @ ess

    if sigma:
        theta = 0.0
    else:
        theta = None
        for cand in np.linspace(0.0, -np.pi / 2, theta_search, endpoint=False):
            rotated = re_part(np.exp(1j * cand) * m_ess)
            if min_eig(rotated) > tol.psd * (1.0 + fro_norm(m_ess)):
                theta = float(cand)
                break
        if theta is None:
            raise RotationNotFound(
                "no rotation in (-pi/2, 0] makes the compressed real part positive"
            )

    phase = np.exp(1j * theta)
    rotated = phase * m
    a11, a12, a21, a22 = _blocks(rotated, big)
    comp_rot = _pinv_eliminate(a11, a12, a21, a22, tol)
    comp = np.conj(phase) * comp_rot

    if check_bound:
        alphas, margins = sector_certified_alpha((phase * m_ess)[None, :, :], theta_grid_size)
        if margins[0] <= tol.psd * (1.0 + fro_norm(m_ess)):
            raise NotSectorial("rotated pencil evaluation is not sectorial")
        sec2 = 1.0 / np.cos(float(alphas[0])) ** 2
        lhs = float(np.linalg.norm(comp, 2))
        rhs = sec2 * float(np.linalg.norm(m, 2))
        if lhs > rhs * (1.0 + tol.eq):
            raise SectorBoundViolated(
                f"||S(L(X))|| = {lhs:.6g} exceeds sec^2(alpha)||L(X)|| = {rhs:.6g}"
            )
    return comp
