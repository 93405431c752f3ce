"""Exact Frechet-derivative adjoints for the catalogue functions.

The supporting-pencil construction needs the gradient matrices G_i of
X -> v* F(X) v to near machine precision: the reconstruction identity is
exactly tight only for a true subgradient, and finite-difference noise gets
amplified through the (often barely-conditioned) eliminated block.  For
every catalogue function the adjoint of the slot derivative applied to a
Hermitian seed W (usually vv*) is available in closed form:

  * functional-calculus lifts: the Daleckii-Krein divided-difference map,
    which is self-adjoint under the trace pairing;
  * harmonic/arithmetic means: explicit congruence sandwiches;
  * the geometric mean: a Daleckii-Krein sandwich plus argument symmetry;
  * power means and the Karcher mean: implicit-function solves of the
    fixed-point equations, assembled on a real Hermitian basis.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .matcore import dagger, herm_part

__all__ = [
    "hermitian_basis",
    "dk_map",
    "map_matrix",
    "solve_linear_map",
]


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of the real vector space of n x n Hermitian matrices."""
    out: list[np.ndarray] = []
    for p in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[p, p] = 1.0
        out.append(e)
    s = 1.0 / np.sqrt(2.0)
    for p in range(n):
        for q in range(p + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[p, q] = e[q, p] = s
            out.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[p, q] = 1j * s
            e[q, p] = -1j * s
            out.append(e)
    return out


def dk_map(
    a: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    fprime: Callable[[np.ndarray], np.ndarray],
) -> Callable[[np.ndarray], np.ndarray]:
    """Daleckii-Krein derivative of the functional calculus at Hermitian ``a``.

    Returns the (self-adjoint) linear map H -> U (Phi o (U* H U)) U* with
    Phi the divided-difference table of f on the spectrum.
    """
    w, u = np.linalg.eigh(herm_part(a))
    lam_i = w[:, None]
    lam_j = w[None, :]
    diff = lam_i - lam_j
    close = np.abs(diff) < 1e-8 * (1.0 + np.abs(lam_i) + np.abs(lam_j))
    mid = (lam_i + lam_j) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = (f(lam_i) - f(lam_j)) / np.where(close, 1.0, diff)
    phi = np.where(close, fprime(mid), phi)

    def apply(h: np.ndarray) -> np.ndarray:
        return u @ (phi * (dagger(u) @ h @ u)) @ dagger(u)

    return apply


def map_matrix(apply: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Real matrix of an R-linear map on Hermitian n x n matrices."""
    basis = hermitian_basis(n)
    m = len(basis)
    out = np.empty((m, m))
    for col, s in enumerate(basis):
        img = apply(s)
        for row, t in enumerate(basis):
            out[row, col] = float(np.trace(t @ img).real)
    return out


def solve_linear_map(
    apply: Callable[[np.ndarray], np.ndarray], rhs: np.ndarray
) -> np.ndarray:
    """Solve apply(u) = rhs for Hermitian u by dense assembly on the basis."""
    n = rhs.shape[0]
    basis = hermitian_basis(n)
    mat = map_matrix(apply, n)
    vec = np.array([float(np.trace(s @ rhs).real) for s in basis])
    coeffs = np.linalg.solve(mat, vec)
    return herm_part(sum(c * s for c, s in zip(coeffs, basis)))
