"""Linear matrix pencils and their tensor-product evaluations.

A pencil is a coefficient list ``B_0, ..., B_k`` of Hermitian ``d x d``
matrices.  It evaluates at a k-tuple of ``n x n`` arguments as

    L(X) = B_0 (x) I + sum_i B_i (x) X_i

with the coefficient space always the *first* tensor factor, so block
(r, s) of the evaluation is the n x n matrix ``sum_i B_i[r, s] X_i``.

Validated pencils carry the semidefiniteness invariants: every B_i is PSD
and B_0 dominates the coefficient sum.  ``RawPencil`` skips validation for
intermediate work (homogeneous pencils with B_0 = 0 in particular).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArityMismatch,
    CoefficientNotPSD,
    DimensionMismatch,
    DominanceViolated,
    InputNotSectorial,
)
from .matcore import (
    DEFAULT_TOL,
    SectorEstimate,
    Tolerances,
    dagger,
    fro_norm,
    herm_part,
    min_eig,
    sector_estimate,
    tensor,
)

__all__ = [
    "RawPencil",
    "LinearPencil",
    "pencil_new",
    "pencil_eval",
    "pencil_eval_shifted",
    "pencil_direct_sum",
    "pencil_sectorial_check",
    "range_basis",
]


@dataclass(frozen=True)
class RawPencil:
    """Coefficient list with shape checks only."""

    coeffs: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise ArityMismatch("a pencil needs B_0 and at least one B_i")
        d = self.coeffs[0].shape[0]
        for b in self.coeffs:
            if b.shape != (d, d):
                raise DimensionMismatch("pencil coefficients must share one square shape")
        object.__setattr__(self, "coeffs", tuple(np.asarray(b, dtype=complex) for b in self.coeffs))

    @property
    def arity(self) -> int:
        return len(self.coeffs) - 1

    @property
    def size(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def b0(self) -> np.ndarray:
        return self.coeffs[0]

    @property
    def bi(self) -> tuple[np.ndarray, ...]:
        return self.coeffs[1:]

    def coeff_sum(self) -> np.ndarray:
        return sum(self.coeffs[1:])


@dataclass(frozen=True)
class LinearPencil(RawPencil):
    """Validated pencil: all coefficients PSD, B_0 >= sum of the others.

    ``coeff_margin`` is the smallest eigenvalue over all B_i and
    ``dominance_margin`` is lambda_min(B_0 - sum B_i); both are recorded at
    validation time.
    """

    coeff_margin: float = field(default=0.0, compare=False)
    dominance_margin: float = field(default=0.0, compare=False)


def pencil_new(
    coeffs: list[np.ndarray] | tuple[np.ndarray, ...],
    tol: Tolerances = DEFAULT_TOL,
) -> LinearPencil:
    """Validate coefficients and build a LinearPencil.

    Raises CoefficientNotPSD or DominanceViolated with the offending margin.
    """
    raw = RawPencil(tuple(coeffs))
    hermed = tuple(herm_part(b) for b in raw.coeffs)
    coeff_margin = np.inf
    for idx, b in enumerate(hermed):
        lam = min_eig(b)
        coeff_margin = min(coeff_margin, lam)
        if lam < -tol.psd * (1.0 + fro_norm(b)):
            raise CoefficientNotPSD(f"B_{idx} has minimum eigenvalue {lam:.3e}")
    gap = hermed[0] - sum(hermed[1:])
    dom = min_eig(gap)
    if dom < -tol.psd * (1.0 + fro_norm(gap)):
        raise DominanceViolated(f"B_0 - sum(B_i) has minimum eigenvalue {dom:.3e}")
    return LinearPencil(hermed, coeff_margin=float(coeff_margin), dominance_margin=float(dom))


def _check_arity(pencil: RawPencil, x: tuple[np.ndarray, ...] | list[np.ndarray]) -> tuple[np.ndarray, ...]:
    xs = tuple(np.asarray(m, dtype=complex) for m in x)
    if len(xs) != pencil.arity:
        raise ArityMismatch(f"pencil arity {pencil.arity}, argument tuple has {len(xs)}")
    n = xs[0].shape[-1]
    for m in xs:
        if m.shape[-1] != m.shape[-2] or m.shape[-1] != n:
            raise DimensionMismatch("tuple members must be square of equal dimension")
    return xs


def pencil_eval(pencil: RawPencil, x: tuple[np.ndarray, ...]) -> np.ndarray:
    """L(X) = B_0 (x) I + sum B_i (x) X_i."""
    xs = _check_arity(pencil, x)
    n = xs[0].shape[-1]
    out = tensor(pencil.b0, np.eye(n))
    for b, xi in zip(pencil.bi, xs):
        out = out + tensor(b, xi)
    return out


def pencil_eval_shifted(pencil: RawPencil, x: tuple[np.ndarray, ...]) -> np.ndarray:
    """B_0 (x) I + sum B_i (x) (X_i - I)."""
    xs = _check_arity(pencil, x)
    n = xs[0].shape[-1]
    eye = np.eye(n)
    out = tensor(pencil.b0, eye)
    for b, xi in zip(pencil.bi, xs):
        out = out + tensor(b, xi - eye)
    return out


def pencil_direct_sum(pencils: list[LinearPencil] | list[RawPencil]) -> LinearPencil:
    """Coefficient-wise block-diagonal sum of pencils of common arity."""
    if not pencils:
        raise ArityMismatch("empty pencil list")
    k = pencils[0].arity
    for p in pencils:
        if p.arity != k:
            raise ArityMismatch("direct sum requires a common arity")
    coeffs = []
    for i in range(k + 1):
        blocks = [p.coeffs[i] for p in pencils]
        total = sum(b.shape[0] for b in blocks)
        big = np.zeros((total, total), dtype=complex)
        off = 0
        for b in blocks:
            d = b.shape[0]
            big[off : off + d, off : off + d] = b
            off += d
        coeffs.append(big)
    return pencil_new(coeffs)


def range_basis(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the numerical range-space of PSD ``a``.

    Eigenvalues at or below ``tol.rank * lambda_max`` count as zero.
    """
    w, u = np.linalg.eigh(herm_part(np.asarray(a, dtype=complex)))
    cut = tol.rank * max(float(w[-1]), 0.0)
    return u[:, w > cut]


def pencil_sectorial_check(
    pencil: RawPencil,
    x: tuple[np.ndarray, ...],
    theta_grid_size: int = 256,
    tol: Tolerances = DEFAULT_TOL,
) -> SectorEstimate:
    """Sector estimate of L(X) compressed to ran(sum B_i) (x) E.

    Every argument must itself be sectorial; the common certified angle is
    the max over the components, and the compressed evaluation cannot exceed
    it by more than the grid resolution.  Raises InputNotSectorial when some
    X_i fails its own sector estimate.
    """
    xs = _check_arity(pencil, x)
    common = 0.0
    for idx, xi in enumerate(xs):
        try:
            est = sector_estimate(xi, theta_grid_size, tol)
        except Exception as exc:  # noqa: BLE001 - rewrap with the argument index
            raise InputNotSectorial(f"argument {idx + 1} is not sectorial: {exc}") from exc
        common = max(common, est.alpha)
    q = range_basis(pencil.coeff_sum(), tol)
    n = xs[0].shape[-1]
    iso = tensor(q, np.eye(n))
    compressed = dagger(iso) @ pencil_eval(pencil, xs) @ iso
    return sector_estimate(compressed, theta_grid_size, tol)
