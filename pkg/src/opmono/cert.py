"""Randomized certification and counterexample search.

Each tester draws seeded random inputs, checks a Loewner-order property of
a free function, and reports either a clean pass, the first counterexample
found (with the inputs stored for replay), or inconclusive when evaluation
itself failed.  Identical seeds reproduce identical reports.

Trial inputs are generated sequentially from one generator (so the draw
order is pinned by the seed) and evaluated in stacked chunks, which keeps
the iterative means affordable at four-digit trial budgets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ChainNotIncreasing, OpmonoError
from .freefun import FreeFn, frechet_many
from .matcore import (
    DEFAULT_TOL,
    Tolerances,
    fro_norm,
    herm_part,
    min_eig,
)
from .sampling import (
    ordered_pair_interval,
    rand_isometry,
    rand_psd,
    rand_tuple_interval,
)

__all__ = [
    "CertReport",
    "HypoSample",
    "hypograph_member",
    "LipschitzReport",
    "monotone_test",
    "concave_test",
    "derivative_monotone_test",
    "doubling_concavity_check",
    "hypograph_convexity_test",
    "lipschitz_estimate",
    "chain_semicontinuity_test",
]

DEFAULT_INTERVAL = (0.5, 2.0)
_CHUNK = 512


@dataclass(frozen=True)
class HypoSample:
    """A hypograph member (Y, X) with Y = F(X) - slack for PSD slack.

    ``slack_margin`` records lambda_min(F(X) - Y), which is nonnegative up
    to the PSD tolerance by construction.
    """

    y: np.ndarray
    x: tuple[np.ndarray, ...]
    slack_margin: float


def hypograph_member(
    fn: FreeFn,
    rng: np.random.Generator,
    n: int,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
    slack_scale: float | None = None,
) -> HypoSample:
    """Draw a random hypograph member at size n inside the interval."""
    c1, c2 = interval
    x = rand_tuple_interval(rng, fn.arity, n, c1, c2)
    scale = abs(float(rng.normal(0.0, 0.3))) if slack_scale is None else slack_scale
    slack = scale * rand_psd(rng, n)
    y = herm_part(fn(x)) - slack
    return HypoSample(y=y, x=x, slack_margin=float(np.linalg.eigvalsh(slack)[0]))


@dataclass(frozen=True)
class CertReport:
    """Outcome of one randomized property test.

    ``worst_margin`` is the most negative (or smallest) eigenvalue margin
    encountered across all trials; a counterexample stores the violating
    inputs so the verdict can be replayed without the seed.
    """

    property_name: str
    verdict: str  # "pass" | "counterexample" | "inconclusive"
    trials_run: int
    worst_margin: float
    seed: int
    counterexample: dict[str, Any] | None = None
    details: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.verdict == "counterexample") != (self.counterexample is not None):
            raise ValueError("counterexample present iff verdict is 'counterexample'")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _chunked_eval(fn: FreeFn, tuples: list[tuple[np.ndarray, ...]]) -> list[np.ndarray]:
    """Evaluate fn on many argument tuples via stacked chunks."""
    out: list[np.ndarray] = []
    for lo in range(0, len(tuples), _CHUNK):
        batch = tuples[lo : lo + _CHUNK]
        stacked = tuple(
            np.stack([t[i] for t in batch]) for i in range(fn.arity)
        )
        vals = fn(stacked)
        out.extend(vals[j] for j in range(len(batch)))
    return out


def _margin_scale(diff: np.ndarray) -> float:
    return 1.0 + float(fro_norm(diff))


def _report(name, verdict, trials, worst, seed, counter=None, details=None) -> CertReport:
    return CertReport(
        property_name=name,
        verdict=verdict,
        trials_run=trials,
        worst_margin=float(worst),
        seed=seed,
        counterexample=counter,
        details=details or {},
    )


def monotone_test(
    fn: FreeFn,
    n: int,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
) -> CertReport:
    """Sample ordered pairs A <= B inside the interval and check F(A) <= F(B)."""
    rng = np.random.default_rng(seed)
    c1, c2 = interval
    pairs = [ordered_pair_interval(rng, fn.arity, n, c1, c2) for _ in range(trials)]
    try:
        fa = _chunked_eval(fn, [p[0] for p in pairs])
        fb = _chunked_eval(fn, [p[1] for p in pairs])
    except OpmonoError as exc:
        return _report("monotone", "inconclusive", 0, np.nan, seed, details={"error": str(exc)})
    worst = np.inf
    for idx, (a, b) in enumerate(pairs):
        diff = fb[idx] - fa[idx]
        lam = min_eig(diff)
        worst = min(worst, lam)
        if lam < -tol.psd * _margin_scale(diff):
            counter = {"A": a, "B": b, "margin": float(lam)}
            return _report("monotone", "counterexample", idx + 1, worst, seed, counter)
    return _report("monotone", "pass", trials, worst, seed)


def concave_test(
    fn: FreeFn,
    n: int,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
) -> CertReport:
    """Check the matrix Jensen inequality on random pairs and mixing weights."""
    rng = np.random.default_rng(seed)
    c1, c2 = interval
    grid = (0.25, 0.5, 0.75)
    cases = []
    for _ in range(trials):
        a = rand_tuple_interval(rng, fn.arity, n, c1, c2)
        b = rand_tuple_interval(rng, fn.arity, n, c1, c2)
        lam = float(rng.uniform(0.05, 0.95))
        cases.append((a, b, grid + (lam,)))
    evals: list[tuple[np.ndarray, ...]] = []
    for a, b, lams in cases:
        evals.append(a)
        evals.append(b)
        for lam in lams:
            evals.append(tuple((1 - lam) * ai + lam * bi for ai, bi in zip(a, b)))
    try:
        values = _chunked_eval(fn, evals)
    except OpmonoError as exc:
        return _report("concave", "inconclusive", 0, np.nan, seed, details={"error": str(exc)})
    worst = np.inf
    per_case = 2 + len(grid) + 1
    for idx, (a, b, lams) in enumerate(cases):
        base = idx * per_case
        fa, fb = values[base], values[base + 1]
        for j, lam in enumerate(lams):
            fmix = values[base + 2 + j]
            diff = fmix - ((1 - lam) * fa + lam * fb)
            m = min_eig(diff)
            worst = min(worst, m)
            if m < -tol.psd * _margin_scale(diff):
                counter = {"A": a, "B": b, "lambda": lam, "margin": float(m)}
                return _report("concave", "counterexample", idx + 1, worst, seed, counter)
    return _report("concave", "pass", trials, worst, seed)


def derivative_monotone_test(
    fn: FreeFn,
    n: int,
    trials: int = 500,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
) -> CertReport:
    """Check DF(X)(H) >= 0 at random interior points and PSD directions."""
    rng = np.random.default_rng(seed)
    c1, c2 = interval
    pad = 0.15 * (c2 - c1)
    cases = []
    for _ in range(trials):
        x = rand_tuple_interval(rng, fn.arity, n, c1 + pad, c2 - pad)
        h = tuple(rand_psd(rng, n) for _ in range(fn.arity))
        nh = max(float(fro_norm(hi)) for hi in h)
        h = tuple(hi / nh for hi in h)
        cases.append((x, h))
    step = 1e-3 * (1.0 + c2)
    worst = np.inf
    try:
        for lo in range(0, trials, 256):
            block = cases[lo : lo + 256]
            # one batched Richardson stencil per block of trials
            n_dim = n
            stacks = []
            for i in range(fn.arity):
                rows = np.empty((4 * len(block), n_dim, n_dim), dtype=complex)
                for j, (x, h) in enumerate(block):
                    rows[4 * j + 0] = x[i] + step * h[i]
                    rows[4 * j + 1] = x[i] - step * h[i]
                    rows[4 * j + 2] = x[i] + (step / 2) * h[i]
                    rows[4 * j + 3] = x[i] - (step / 2) * h[i]
                stacks.append(rows)
            vals = fn(tuple(stacks))
            for j, (x, h) in enumerate(block):
                d_h = (vals[4 * j] - vals[4 * j + 1]) / (2 * step)
                d_h2 = (vals[4 * j + 2] - vals[4 * j + 3]) / step
                deriv = herm_part((4.0 * d_h2 - d_h) / 3.0)
                lam = min_eig(deriv)
                worst = min(worst, lam)
                if lam < -10 * tol.psd * _margin_scale(deriv):
                    counter = {"X": x, "H": h, "margin": float(lam)}
                    return _report(
                        "derivative", "counterexample", lo + j + 1, worst, seed, counter
                    )
    except OpmonoError as exc:
        return _report("derivative", "inconclusive", 0, np.nan, seed, details={"error": str(exc)})
    return _report("derivative", "pass", trials, worst, seed)


def doubling_concavity_check(
    fn: FreeFn,
    n: int,
    lambda_grid: tuple[float, ...] = (0.25, 0.5, 0.75),
    eps_ladder: tuple[float, ...] = (1e-1, 1e-3, 1e-6),
    trials: int = 100,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
) -> CertReport:
    """Exercise the doubling construction behind monotone => concave.

    For each pair and mixing weight this builds the rotation

        V = [[lam^{1/2} I, -(1-lam)^{1/2} I], [(1-lam)^{1/2} I, lam^{1/2} I]]

    and verifies (i) V is unitary, (ii) the conjugation V* diag(A, B) V has
    the mixed block form, (iii) the dominance by diag(mix + eps I, 2Z) for
    Z = (1-lam) A + lam B + D^2 / eps, and (iv) the shifted Jensen
    inequality that follows by monotonicity at doubled size.
    """
    rng = np.random.default_rng(seed)
    c1, c2 = interval
    eye = np.eye(n)
    worst = np.inf
    unit_defect = 0.0
    block_defect = 0.0
    trials_run = 0
    for lam in lambda_grid:
        s_mix = np.sqrt(lam * (1 - lam))
        v = np.block(
            [
                [np.sqrt(lam) * eye, -np.sqrt(1 - lam) * eye],
                [np.sqrt(1 - lam) * eye, np.sqrt(lam) * eye],
            ]
        )
        unit_defect = max(unit_defect, float(np.linalg.norm(v.conj().T @ v - np.eye(2 * n))))
        for _ in range(trials):
            a = rand_tuple_interval(rng, fn.arity, n, c1, c2)
            b = rand_tuple_interval(rng, fn.arity, n, c1, c2)
            trials_run += 1
            for ai, bi in zip(a, b):
                big = np.block([[ai, np.zeros((n, n))], [np.zeros((n, n)), bi]])
                conj = v.conj().T @ big @ v
                mix = lam * ai + (1 - lam) * bi
                anti = (1 - lam) * ai + lam * bi
                d = -s_mix * (bi - ai)
                expected = np.block([[mix, -d], [-d, anti]])
                block_defect = max(block_defect, float(np.linalg.norm(conj - expected)))
                for eps in eps_ladder:
                    z = anti + (d @ d) / eps
                    dom = np.block(
                        [[mix + eps * eye, np.zeros((n, n))], [np.zeros((n, n)), 2 * z]]
                    ) - conj
                    m = min_eig(dom)
                    worst = min(worst, m)
                    if m < -tol.psd * _margin_scale(dom):
                        counter = {"A": a, "B": b, "lambda": lam, "eps": eps, "margin": float(m)}
                        return _report(
                            "doubling", "counterexample", trials_run, worst, seed, counter,
                            {"unitarity_defect": unit_defect, "block_defect": block_defect},
                        )
            fa, fb = fn(a), fn(b)
            for eps in eps_ladder:
                shifted = fn(tuple(lam * ai + (1 - lam) * bi + eps * eye for ai, bi in zip(a, b)))
                diff = shifted - (lam * fa + (1 - lam) * fb)
                m = min_eig(diff)
                worst = min(worst, m)
                if m < -tol.psd * _margin_scale(diff):
                    counter = {"A": a, "B": b, "lambda": lam, "eps": eps, "margin": float(m)}
                    return _report(
                        "doubling", "counterexample", trials_run, worst, seed, counter,
                        {"unitarity_defect": unit_defect, "block_defect": block_defect},
                    )
    return _report(
        "doubling", "pass", trials_run, worst, seed,
        details={"unitarity_defect": unit_defect, "block_defect": block_defect},
    )


def hypograph_convexity_test(
    fn: FreeFn,
    n: int,
    m: int,
    trials: int = 500,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    interval: tuple[float, float] = DEFAULT_INTERVAL,
) -> CertReport:
    """Isometry compressions and convex combinations of hypograph members.

    Members are (Y, X) with Y = F(X) - slack; compressions by random
    isometries V : C^m -> C^n must stay members, and scalar convex
    combinations of two members must stay members.
    """
    if m > n:
        raise ValueError("isometry target dimension m must not exceed n")
    rng = np.random.default_rng(seed)
    c1, c2 = interval
    cases = []
    for _ in range(trials):
        x = rand_tuple_interval(rng, fn.arity, n, c1, c2)
        x2 = rand_tuple_interval(rng, fn.arity, n, c1, c2)
        slack_scale = abs(float(rng.normal(0.0, 0.3)))
        slack2 = abs(float(rng.normal(0.0, 0.3)))
        v = rand_isometry(rng, n, m)
        lam = float(rng.uniform(0.0, 1.0))
        cases.append((x, x2, slack_scale, slack2, rand_psd(rng, n), rand_psd(rng, n), v, lam))
    try:
        fx = _chunked_eval(fn, [c[0] for c in cases])
        fx2 = _chunked_eval(fn, [c[1] for c in cases])
        fcomp = _chunked_eval(
            fn,
            [tuple(c[6].conj().T @ xi @ c[6] for xi in c[0]) for c in cases],
        )
        fmix = _chunked_eval(
            fn,
            [
                tuple((1 - c[7]) * ai + c[7] * bi for ai, bi in zip(c[0], c[1]))
                for c in cases
            ],
        )
    except OpmonoError as exc:
        return _report("hypograph", "inconclusive", 0, np.nan, seed, details={"error": str(exc)})
    worst = np.inf
    for idx, (x, x2, s1, s2, r1, r2, v, lam) in enumerate(cases):
        y = fx[idx] - s1 * r1
        y2 = fx2[idx] - s2 * r2
        comp_diff = fcomp[idx] - v.conj().T @ y @ v
        m1 = min_eig(comp_diff)
        mix_diff = fmix[idx] - ((1 - lam) * y + lam * y2)
        m2 = min_eig(mix_diff)
        worst = min(worst, m1, m2)
        if m1 < -tol.psd * _margin_scale(comp_diff):
            counter = {"X": x, "Y": y, "V": v, "margin": float(m1), "kind": "isometry"}
            return _report("hypograph", "counterexample", idx + 1, worst, seed, counter)
        if m2 < -tol.psd * _margin_scale(mix_diff):
            counter = {
                "X": x, "Y": y, "X2": x2, "Y2": y2, "lambda": lam,
                "margin": float(m2), "kind": "combination",
            }
            return _report("hypograph", "counterexample", idx + 1, worst, seed, counter)
    return _report("hypograph", "pass", trials, worst, seed)


@dataclass(frozen=True)
class LipschitzReport:
    """Empirical Lipschitz quotient and the two candidate local bounds."""

    quotient: float
    local_bound: float  # max ||F|| over the doubled ball
    bound_m_over_r: float
    bound_2m_over_r: float
    samples: int


def lipschitz_estimate(
    fn: FreeFn,
    center: tuple[np.ndarray, ...],
    radius: float,
    samples: int = 200,
    seed: int = 0,
) -> LipschitzReport:
    """Empirical Lipschitz quotient of F on a tuple-norm ball.

    The tuple norm is the sum of component operator norms.  The local bound
    M is taken over the ball of doubled radius; both M/r and 2M/r are
    reported since either appears as the constant in the continuity
    estimate for concave functions.
    """
    rng = np.random.default_rng(seed)
    center = tuple(np.asarray(c, dtype=complex) for c in center)
    k = len(center)
    n = center[0].shape[-1]

    def draw(rad: float) -> tuple[np.ndarray, ...]:
        deltas = [herm_part(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) for _ in range(k)]
        total = sum(float(np.linalg.norm(d, 2)) for d in deltas)
        scale = rng.uniform(0.0, rad) / total
        return tuple(c + scale * d for c, d in zip(center, deltas))

    quotient = 0.0
    local = 0.0
    for _ in range(samples):
        x = draw(radius)
        y = draw(radius)
        dist = sum(float(np.linalg.norm(yi - xi, 2)) for xi, yi in zip(x, y))
        if dist <= 0:
            continue
        fxy = float(np.linalg.norm(fn(y) - fn(x), 2))
        quotient = max(quotient, fxy / dist)
        z = draw(2 * radius)
        local = max(local, float(np.linalg.norm(fn(z), 2)))
    return LipschitzReport(
        quotient=quotient,
        local_bound=local,
        bound_m_over_r=local / radius,
        bound_2m_over_r=2 * local / radius,
        samples=samples,
    )


def chain_semicontinuity_test(
    fn: FreeFn,
    chain: list[tuple[np.ndarray, ...]],
    tol: Tolerances = DEFAULT_TOL,
) -> CertReport:
    """F(A_j) <= F(A_last) along a finite increasing chain of tuples."""
    if len(chain) < 2:
        raise ValueError("chain needs at least two tuples")
    for j in range(len(chain) - 1):
        for ai, bi in zip(chain[j], chain[j + 1]):
            gap = bi - ai
            if min_eig(gap) < -tol.psd * _margin_scale(gap):
                raise ChainNotIncreasing(f"chain decreases between steps {j} and {j + 1}")
    top = fn(chain[-1])
    worst = np.inf
    for j, a in enumerate(chain[:-1]):
        diff = top - fn(a)
        m = min_eig(diff)
        worst = min(worst, m)
        if m < -tol.psd * _margin_scale(diff):
            counter = {"index": j, "margin": float(m)}
            return _report("chain", "counterexample", j + 1, worst, 0, counter)
    return _report("chain", "pass", len(chain) - 1, worst, 0)
