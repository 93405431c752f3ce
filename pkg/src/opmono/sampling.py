"""Seeded random generators for matrices, tuples, and hypograph members.

Everything is driven by an explicit ``numpy.random.Generator`` so that a
seed pins the whole draw sequence; certification reports replay from the
stored seed alone.
"""

from __future__ import annotations

import numpy as np

from .matcore import dagger, herm_part

__all__ = [
    "rand_complex",
    "rand_herm",
    "rand_psd",
    "rand_unitary",
    "rand_isometry",
    "rand_unit_vector",
    "rand_spd_interval",
    "rand_tuple_interval",
    "ordered_pair_interval",
]


def rand_complex(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_herm(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return scale * herm_part(rand_complex(rng, n, n))


def rand_psd(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    g = rand_complex(rng, n, n)
    out = g @ dagger(g)
    return scale * out / n


def rand_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rand_complex(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def rand_isometry(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Random isometry from C^m into C^n (n >= m), V* V = I_m."""
    if m > n:
        raise ValueError("target dimension exceeds ambient dimension")
    q, _ = np.linalg.qr(rand_complex(rng, n, m))
    return q


def rand_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rand_complex(rng, n)
    return v / np.linalg.norm(v)


def rand_spd_interval(
    rng: np.random.Generator, n: int, c1: float, c2: float
) -> np.ndarray:
    """Hermitian matrix with eigenvalues drawn uniformly from [c1, c2]."""
    u = rand_unitary(rng, n)
    lam = rng.uniform(c1, c2, size=n)
    return herm_part((u * lam) @ dagger(u))


def rand_tuple_interval(
    rng: np.random.Generator, k: int, n: int, c1: float, c2: float
) -> tuple[np.ndarray, ...]:
    return tuple(rand_spd_interval(rng, n, c1, c2) for _ in range(k))


def ordered_pair_interval(
    rng: np.random.Generator, k: int, n: int, c1: float, c2: float
) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """A <= B componentwise, both with spectra inside [c1, c2].

    A is drawn in [c1, mid], then a PSD bump scaled to keep B below c2.
    """
    a = []
    b = []
    for _ in range(k):
        ai = rand_spd_interval(rng, n, c1, c1 + 0.6 * (c2 - c1))
        head = c2 - float(np.linalg.eigvalsh(ai)[-1])
        bump = rand_psd(rng, n)
        top = float(np.linalg.eigvalsh(bump)[-1])
        if top > 0:
            bump = bump * (rng.uniform(0.05, 0.95) * head / top)
        a.append(ai)
        b.append(herm_part(ai + bump))
    return tuple(a), tuple(b)
