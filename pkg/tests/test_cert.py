import numpy as np
import pytest

from opmono import errors
from opmono.cert import (
    chain_semicontinuity_test,
    concave_test,
    derivative_monotone_test,
    doubling_concavity_check,
    hypograph_convexity_test,
    lipschitz_estimate,
    monotone_test,
)
from opmono.freefun import (
    FreeFn,
    fake_trace_fn,
    harmonic_mean,
    lift_scalar,
)
from opmono.matcore import herm_part


def affine_plus_one():
    return FreeFn(
        name="xplus1",
        arity=1,
        evaluator=lambda xs: xs[0] + np.eye(xs[0].shape[-1]),
    )


def double_fn():
    return FreeFn(name="2x", arity=1, evaluator=lambda xs: 2 * xs[0])


class TestMonotone:
    def test_sqrt_passes(self):
        rep = monotone_test(lift_scalar("sqrt"), n=4, trials=300, seed=7)
        assert rep.passed

    def test_identity_nonnegative_margin(self):
        rep = monotone_test(lift_scalar("identity"), n=3, trials=100, seed=0)
        assert rep.passed and rep.worst_margin >= -1e-12

    def test_xsq_counterexample_found(self):
        rep = monotone_test(lift_scalar("xsq"), n=2, trials=1000, seed=1)
        assert rep.verdict == "counterexample"
        a, b = rep.counterexample["A"], rep.counterexample["B"]
        # replaying the stored inputs reproduces the violation
        fn = lift_scalar("xsq")
        lam = np.linalg.eigvalsh(herm_part(fn(b) - fn(a)))[0]
        assert lam < -1e-9

    def test_known_xsq_pair(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        b = np.array([[2.0, 1.0], [1.0, 1.0]])
        diff = b @ b - a @ a
        assert np.linalg.det(diff) < 0  # eigenvalue of each sign

    def test_deterministic(self):
        r1 = monotone_test(lift_scalar("sqrt"), n=3, trials=50, seed=11)
        r2 = monotone_test(lift_scalar("sqrt"), n=3, trials=50, seed=11)
        assert r1.worst_margin == r2.worst_margin
        assert r1.verdict == r2.verdict


class TestConcave:
    def test_sqrt_passes(self):
        rep = concave_test(lift_scalar("sqrt"), n=4, trials=200, seed=3)
        assert rep.passed

    def test_xsq_fails(self):
        rep = concave_test(lift_scalar("xsq"), n=2, trials=500, seed=4)
        assert rep.verdict == "counterexample"

    def test_affine_equality_case(self):
        rep = concave_test(affine_plus_one(), n=3, trials=100, seed=5)
        assert rep.passed
        assert abs(rep.worst_margin) <= 1e-10


class TestDerivative:
    def test_identity_passes(self):
        rep = derivative_monotone_test(lift_scalar("identity"), n=3, trials=50, seed=6)
        assert rep.passed

    def test_sqrt_passes(self):
        rep = derivative_monotone_test(lift_scalar("sqrt"), n=3, trials=200, seed=7)
        assert rep.passed

    def test_xsq_fails(self):
        rep = derivative_monotone_test(lift_scalar("xsq"), n=2, trials=500, seed=8)
        assert rep.verdict == "counterexample"


class TestDoubling:
    def test_sqrt_all_layers(self):
        rep = doubling_concavity_check(
            lift_scalar("sqrt"), n=3, trials=20, seed=9
        )
        assert rep.passed
        assert rep.details["unitarity_defect"] <= 1e-12
        assert rep.details["block_defect"] <= 1e-10

    def test_equal_arguments_reduces_to_monotone_shift(self):
        rng = np.random.default_rng(10)
        fn = lift_scalar("sqrt")
        from opmono.sampling import rand_spd_interval

        a = rand_spd_interval(rng, 3, 0.5, 2.0)
        for eps in (1e-1, 1e-3, 1e-6):
            diff = fn(a + eps * np.eye(3)) - fn(a)
            assert np.linalg.eigvalsh(herm_part(diff))[0] >= -1e-12

    def test_half_mixing_matrix(self):
        # at lambda = 1/2 the rotation is (1/sqrt2) [[I, -I], [I, I]]
        n = 2
        v = np.block(
            [
                [np.sqrt(0.5) * np.eye(n), -np.sqrt(0.5) * np.eye(n)],
                [np.sqrt(0.5) * np.eye(n), np.sqrt(0.5) * np.eye(n)],
            ]
        )
        assert np.linalg.norm(v.T @ v - np.eye(2 * n)) <= 1e-15

    def test_harmonic_passes(self):
        rep = doubling_concavity_check(harmonic_mean((0.5, 0.5)), n=2, trials=10, seed=11)
        assert rep.passed


class TestHypograph:
    def test_unitary_compression_preserved_exactly(self):
        rep = hypograph_convexity_test(lift_scalar("sqrt"), n=3, m=3, trials=100, seed=12)
        assert rep.passed

    def test_harmonic_passes(self):
        rep = hypograph_convexity_test(harmonic_mean((0.5, 0.5)), n=4, m=2, trials=200, seed=13)
        assert rep.passed

    def test_xsq_compression_counterexample(self):
        rep = hypograph_convexity_test(lift_scalar("xsq"), n=2, m=1, trials=1000, seed=14)
        assert rep.verdict == "counterexample"

    def test_fake_trace_fails(self):
        rep = hypograph_convexity_test(fake_trace_fn(), n=2, m=2, trials=1000, seed=15)
        assert rep.verdict == "counterexample"


class TestLipschitz:
    def test_identity_quotient_one(self):
        center = (np.eye(3),)
        rep = lipschitz_estimate(lift_scalar("identity"), center, radius=0.1, samples=100, seed=16)
        assert abs(rep.quotient - 1.0) <= 1e-8

    def test_doubling_map_quotient_two(self):
        center = (np.eye(3),)
        rep = lipschitz_estimate(double_fn(), center, radius=0.1, samples=100, seed=17)
        assert abs(rep.quotient - 2.0) <= 1e-8

    def test_sqrt_below_bound(self):
        center = (np.eye(4),)
        rep = lipschitz_estimate(lift_scalar("sqrt"), center, radius=0.1, samples=150, seed=18)
        assert rep.quotient <= rep.bound_2m_over_r


class TestChain:
    def test_constant_chain(self):
        a = (np.eye(3),)
        rep = chain_semicontinuity_test(lift_scalar("sqrt"), [a, a, a])
        assert rep.passed and abs(rep.worst_margin) <= 1e-12

    def test_shifted_chain_monotone(self):
        rng = np.random.default_rng(19)
        from opmono.sampling import rand_spd_interval

        a = rand_spd_interval(rng, 3, 0.5, 1.5)
        chain = [(a,), (a + 0.01 * np.eye(3),), (a + 0.02 * np.eye(3),)]
        rep = chain_semicontinuity_test(lift_scalar("sqrt"), chain)
        assert rep.passed

    def test_not_increasing_rejected(self):
        with pytest.raises(errors.ChainNotIncreasing):
            chain_semicontinuity_test(
                lift_scalar("sqrt"), [(2 * np.eye(2),), (np.eye(2),)]
            )

    def test_xsq_crafted_failure(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]]) + 0.01 * np.eye(2)
        b = np.array([[2.0, 1.0], [1.0, 1.0]]) + 0.01 * np.eye(2)
        rep = chain_semicontinuity_test(lift_scalar("xsq"), [(a,), (b,)])
        assert rep.verdict == "counterexample"


class TestCrossValidation:
    # monotone <=> concave <=> derivative agreement per function
    @pytest.mark.parametrize(
        "ident,expected",
        [("sqrt", "pass"), ("identity", "pass"), ("xsq", "counterexample")],
    )
    def test_verdicts_agree(self, ident, expected):
        fn = lift_scalar(ident)
        reps = [
            monotone_test(fn, n=3, trials=400, seed=20),
            concave_test(fn, n=3, trials=400, seed=21),
            derivative_monotone_test(fn, n=3, trials=400, seed=22),
        ]
        for rep in reps:
            assert rep.verdict == expected


class TestHypographMember:
    def test_member_is_below_graph(self):
        from opmono.cert import hypograph_member

        rng = np.random.default_rng(30)
        fn = lift_scalar("sqrt")
        for _ in range(20):
            sample = hypograph_member(fn, rng, n=3)
            gap = fn(sample.x) - sample.y
            assert np.linalg.eigvalsh(herm_part(gap))[0] >= -1e-12
            assert sample.slack_margin >= -1e-12
