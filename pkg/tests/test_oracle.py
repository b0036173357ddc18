import numpy as np
import pytest
from scipy.optimize import linprog

from spyvspam import (
    ValidationError,
    best_response,
    defendability,
    solve_defendability_lp,
    solve_ne,
    support_enumeration_ne,
    verify_ne,
)
from spyvspam.oracle import simplex, solve_attacker_lp

from helpers import make_game, random_instances


class TestSimplex:
    def test_textbook_lp(self):
        # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        A = np.array([[1, 0, 1, 0, 0], [0, 2, 0, 1, 0], [3, 2, 0, 0, 1]], dtype=float)
        res = simplex([3, 5, 0, 0, 0], A, [4, 12, 18])
        assert res.status == "optimal"
        np.testing.assert_allclose(res.x[:2], [2, 6], atol=1e-12)
        assert res.objective == pytest.approx(36)
        assert res.cs_residual <= 1e-9

    def test_infeasible_and_unbounded(self):
        assert simplex([1, 0], [[1, 1]], [-1]).status == "infeasible"
        assert simplex([1, 0], [[1, -1]], [1]).status == "unbounded"

    def test_degenerate_cycling_example(self):
        # Beale's example cycles under the textbook rule; Bland's rule must stop
        c = np.array([0.75, -150, 0.02, -6, 0, 0, 0])
        A = np.array([
            [0.25, -60, -0.04, 9, 1, 0, 0],
            [0.5, -90, -0.02, 3, 0, 1, 0],
            [0, 0, 1, 0, 0, 0, 1],
        ])
        res = simplex(c, A, [0, 0, 1])
        assert res.status == "optimal"
        assert res.objective == pytest.approx(0.05)

    def test_random_lps_against_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            m, n = rng.integers(2, 6), rng.integers(2, 8)
            A = rng.uniform(0.1, 2.0, size=(m, n))
            b = rng.uniform(1.0, 3.0, size=m)
            c = rng.normal(size=n)
            A_eq = np.hstack([A, np.eye(m)])
            res = simplex(np.concatenate([c, np.zeros(m)]), A_eq, b)
            ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n)
            assert res.status == "optimal"
            assert res.objective == pytest.approx(-ref.fun, abs=1e-9)


class TestDefendabilityLP:
    def test_fig1_matches_structural(self, fig1):
        params, model, m = fig1
        lp = solve_defendability_lp(m)
        result = solve_ne(params, model, m)
        assert lp.objective == pytest.approx(result.theta_hat_shifted, abs=1e-8)
        assert lp.objective_unshifted == pytest.approx(result.theta_hat, abs=1e-8)

    def test_z_is_min_row(self, fig2):
        lp = solve_defendability_lp(fig2[2])
        rows = fig2[2].lam @ lp.beta
        assert lp.z == rows.min()
        assert np.all(rows >= lp.z)
        assert lp.beta.sum() == pytest.approx(1.0)
        assert lp.cs_residual <= 1e-9

    def test_micro_game_random_sampling(self):
        params, model, m = make_game(N=1, theta0=0.5, c_d=1.0, c_a=1.0, c_fa=1.0, p=0.5,
                                     epsilon=1.0)
        lp = solve_defendability_lp(m)
        pure = max(defendability(m, e) for e in np.eye(3))
        assert lp.objective >= pure - 1e-12
        betas = np.random.default_rng(11).dirichlet(np.ones(3), size=100_000)
        sampled = (m.lam @ betas.T).min(axis=0) - betas @ m.mu
        assert sampled.max() <= lp.objective + 1e-12
        assert lp.objective - max(pure, sampled.max()) <= 1e-3

    def test_attacker_lp_gives_equilibrium(self, fig1):
        _, _, m = fig1
        lp = solve_defendability_lp(m)
        alpha = solve_attacker_lp(m, lp.beta, lp.objective)
        assert verify_ne(m, alpha, lp.beta, tol=1e-6).is_ne


class TestVerify:
    def test_fig1_solution(self, fig1):
        params, model, m = fig1
        r = solve_ne(params, model, m)
        report = verify_ne(m, r.alpha, r.beta, tol=1e-6)
        assert report.is_ne
        assert report.defender_indifference_residual <= 1e-9

    def test_pure_non_equilibrium(self, fig1):
        params, _, m = fig1
        aN = np.eye(params.N + 1)[-1]
        b0 = np.eye(params.N + 2)[0]
        report = verify_ne(m, aN, b0)
        assert not report.is_ne
        # against T=0 the spy already attacks maximally; the defender gains by
        # moving to T=N, which still catches the spy and rarely flags the spammer
        assert report.max_attacker_improvement == 0.0
        assert report.max_defender_improvement == pytest.approx(m.mu[0] - m.mu[params.N])

    def test_tightening_never_helps(self):
        rng = np.random.default_rng(5)
        for params, model, m in random_instances(30, 6, seed=5):
            a = rng.dirichlet(np.ones(params.N + 1))
            b = rng.dirichlet(np.ones(params.N + 2))
            flags = [verify_ne(m, a, b, tol=t).is_ne for t in (1e1, 1e0, 1e-2, 1e-6, 1e-10)]
            assert all(not later or earlier for earlier, later in zip(flags, flags[1:]))

    def test_perturbed_equilibria_fail_or_tie(self):
        # moving 0.01 between two support thresholds breaks the equilibrium
        # unless the perturbed vector still maximizes defendability; a pair
        # passing at tolerance t loses at most 2t of defendability
        broken = 0
        for params, model, m in random_instances(60, 8, seed=21):
            r = solve_ne(params, model, m)
            support = np.flatnonzero(r.beta > 1e-9)
            for i in support:
                for j in support:
                    if i == j or r.beta[i] < 0.01:
                        continue
                    beta = r.beta.copy()
                    beta[i] -= 0.01
                    beta[j] += 0.01
                    if verify_ne(m, r.alpha, beta, tol=1e-6).is_ne:
                        assert defendability(m, beta) >= r.theta_hat_shifted - 2e-6
                    else:
                        broken += 1
        assert broken > 0


class TestBestResponse:
    def test_never_detect(self, fig1):
        params, _, m = fig1
        idx, value = best_response(m, "attacker", np.eye(params.N + 2)[-1])
        assert idx.tolist() == [params.N]
        assert value == -params.c_a * params.N

    def test_always_detect(self, fig1):
        params, _, m = fig1
        idx, value = best_response(m, "attacker", np.eye(params.N + 2)[0])
        scan = [params.c_d - params.c_a * H for H in range(params.N + 1)]
        assert value == min(scan) == params.c_d - params.c_a * params.N
        assert idx.tolist() == [params.N]

    def test_defender_side(self, fig2):
        params, _, m = fig2
        alpha = np.full(params.N + 1, 1 / (params.N + 1))
        idx, value = best_response(m, "defender", alpha)
        payoffs = [alpha @ m.lambda_tilde[:, T] - m.mu[T] for T in range(params.N + 2)]
        assert value == pytest.approx(max(payoffs))
        assert int(np.argmax(payoffs)) in idx

    def test_shift_invariant_argmin(self):
        rng = np.random.default_rng(8)
        for params, model, m in random_instances(50, 10, seed=8):
            beta = rng.dirichlet(np.ones(params.N + 2))
            idx, value = best_response(m, "attacker", beta)
            assert value == (m.lambda_tilde @ beta).min()
            shifted = m.lam @ beta
            same = np.flatnonzero(shifted <= shifted.min() + 1e-12 * max(1, abs(value)))
            assert same.tolist() == idx.tolist()

    def test_bad_side(self, fig1):
        with pytest.raises(ValidationError):
            best_response(fig1[2], "spammer", np.full(8, 1 / 8))


class TestSupportEnumeration:
    def test_micro_game(self):
        params, model, m = make_game(N=1, theta0=0.5, c_d=1.0, c_a=1.0, c_fa=1.0, p=0.5)
        found = support_enumeration_ne(m)
        assert found
        r = solve_ne(params, model, m)
        dist = min(max(np.abs(a - r.alpha).max(), np.abs(b - r.beta).max()) for a, b in found)
        assert dist <= 1e-8

    def test_all_returned_pairs_verify(self):
        for params, model, m in random_instances(15, 4, seed=2):
            found = support_enumeration_ne(m)
            assert len(found) >= 1
            for a, b in found:
                assert verify_ne(m, a, b, tol=1e-8).is_ne

    def test_refuses_large_games(self, fig1):
        with pytest.raises(ValidationError):
            support_enumeration_ne(fig1[2], max_N=6)
        assert support_enumeration_ne(fig1[2], max_N=7, fast=True)

    def test_deterministic_order(self, fig3):
        _, _, m = fig3
        first = support_enumeration_ne(m, max_N=7, fast=True)
        second = support_enumeration_ne(m, max_N=7, fast=True)
        assert len(first) == len(second) >= 2
        for (a1, b1), (a2, b2) in zip(first, second):
            assert np.array_equal(a1, a2) and np.array_equal(b1, b2)
