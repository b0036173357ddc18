"""Brute-force ground truth for the structural solver.

Three independent checks live here: a dense two-phase simplex for the
defendability linear program, a support-enumeration search over all support
pairs of the bimatrix game, and a best-response equilibrium verifier. None of
them use the structure of the defender's equilibrium strategy.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple

import numpy as np

from .errors import LPError, ValidationError
from .game import GameMatrices, check_distribution

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
PIVOT_TOL = 1e-11


# --------------------------------------------------------------------------
# simplex


@dataclass
class SimplexResult:
    x: np.ndarray
    status: Literal["optimal", "infeasible", "unbounded", "iteration_limit"]
    objective: float
    iterations: int
    basis: List[int]
    duals: Optional[np.ndarray] = None
    cs_residual: float = np.nan


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    column = tab[:, col].copy()
    column[row] = 0.0
    tab -= np.outer(column, tab[row])


def _run_phase(tab, basis, n_cols, max_iter, used):
    """Bland's-rule primal simplex on a tableau whose last row holds reduced costs.

    Only the first ``n_cols`` columns may enter. Returns (status, pivots).
    """
    m = tab.shape[0] - 1
    pivots = 0
    while True:
        reduced = tab[-1, :n_cols]
        entering = np.flatnonzero(reduced > PIVOT_TOL)
        if entering.size == 0:
            return "optimal", pivots
        col = int(entering[0])
        column = tab[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded", pivots
        ratios = tab[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        if used + pivots >= max_iter:
            return "iteration_limit", pivots
        _pivot(tab, row, col)
        basis[row] = col
        pivots += 1


def simplex(c, A_eq, b_eq, max_iter: Optional[int] = None) -> SimplexResult:
    """Maximize ``c'x`` subject to ``A_eq x = b_eq`` and ``x >= 0``.

    Dense tableau, two phases, Bland's rule throughout so that degenerate
    problems terminate.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n) ** 2
    sign = np.where(b < 0, -1.0, 1.0)
    A_pos = A * sign[:, None]
    b_pos = b * sign

    # phase I: artificial columns n..n+m-1, maximize -sum(artificials)
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A_pos
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b_pos
    tab[-1, :n] = A_pos.sum(axis=0)
    tab[-1, -1] = b_pos.sum()
    basis = list(range(n, n + m))
    status, iters = _run_phase(tab, basis, n, max_iter, 0)
    if status == "iteration_limit":
        return SimplexResult(np.zeros(n), status, np.nan, iters, basis)
    if tab[-1, -1] > 1e-9 * max(1.0, np.abs(b_pos).max(initial=0.0)):
        return SimplexResult(np.zeros(n), "infeasible", np.nan, iters, basis)

    # drive remaining artificials out; rows with no usable pivot are redundant
    keep = []
    for r in range(m):
        if basis[r] >= n:
            candidates = np.flatnonzero(np.abs(tab[r, :n]) > PIVOT_TOL)
            if candidates.size == 0:
                continue
            _pivot(tab, r, int(candidates[0]))
            basis[r] = int(candidates[0])
            iters += 1
        keep.append(r)
    tab = np.vstack([tab[keep][:, list(range(n)) + [-1]], np.zeros(n + 1)])
    basis = [basis[r] for r in keep]

    # phase II objective row: reduced costs c_j - c_B B^-1 A_j
    tab[-1, :n] = c
    tab[-1, -1] = 0.0
    for r, j in enumerate(basis):
        tab[-1] -= c[j] * tab[r]
    status, more = _run_phase(tab, basis, n, max_iter, iters)
    iters += more
    x = np.zeros(n)
    x[basis] = tab[:-1, -1]
    result = SimplexResult(x, status, float(c @ x), iters, list(basis))
    if status == "optimal":
        rows = keep
        B = A[rows][:, basis]
        try:
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError:
            y = np.linalg.lstsq(B.T, c[basis], rcond=None)[0]
        duals = np.zeros(m)
        duals[rows] = y
        reduced = c - A.T @ duals
        result.duals = duals
        result.cs_residual = float(np.max(np.abs(x * reduced)))
    return result


# --------------------------------------------------------------------------
# defendability LP


@dataclass
class LpSolution:
    """Optimum of the defendability program.

    ``objective`` and ``z`` are in shifted units; subtract ``shift`` for the
    unshifted values.
    """

    beta: np.ndarray
    z: float
    objective: float
    status: str
    iterations: int
    shift: float
    cs_residual: float

    @property
    def objective_unshifted(self) -> float:
        return self.objective - self.shift


def solve_defendability_lp(matrices: GameMatrices) -> LpSolution:
    """Maximize ``z - mu' beta`` s.t. ``z <= (Lambda beta)_i``, ``sum(beta) = 1``, ``beta >= 0``.

    Variables are ordered ``beta (N+2), z, slacks (N+1)``. ``z`` is kept
    nonnegative, which loses nothing because ``Lambda`` is positive.
    """
    N = matrices.N
    lam = matrices.lam
    nb = N + 2
    n = nb + 1 + (N + 1)
    A = np.zeros((N + 2, n))
    A[:N + 1, :nb] = -lam
    A[:N + 1, nb] = 1.0
    A[:N + 1, nb + 1:] = np.eye(N + 1)
    A[N + 1, :nb] = 1.0
    b = np.zeros(N + 2)
    b[N + 1] = 1.0
    c = np.zeros(n)
    c[:nb] = -matrices.mu
    c[nb] = 1.0
    cap = 10 * (N + 4) ** 2
    res = simplex(c, A, b, max_iter=cap)
    if res.status == "iteration_limit":
        raise LPError(f"simplex exceeded {cap} pivots")
    if res.status != "optimal":
        raise LPError(f"defendability LP reported {res.status}; the program is bounded and feasible")
    beta = np.clip(res.x[:nb], 0.0, None)
    beta /= beta.sum()
    z = float(np.min(lam @ beta))
    return LpSolution(
        beta=beta,
        z=z,
        objective=float(z - matrices.mu @ beta),
        status=res.status,
        iterations=res.iterations,
        shift=matrices.shift,
        cs_residual=res.cs_residual,
    )


def solve_attacker_lp(matrices: GameMatrices, beta, theta_hat: float,
                      tol: float = 1e-9) -> np.ndarray:
    """Find a spy strategy making ``beta`` a best response, given max defendability.

    Looks for ``alpha >= 0`` summing to one, supported on the minimizers of
    ``Lambda beta`` and with ``alpha' Lambda - mu' <= theta_hat`` (shifted),
    via phase I of the simplex.
    """
    b = check_distribution(beta, matrices.N + 2, name="beta")
    costs = matrices.lam @ b
    support = np.flatnonzero(costs <= costs.min() + tol * max(1.0, abs(costs.min())))
    k = support.size
    n_T = matrices.N + 2
    A = np.zeros((n_T + 1, k + n_T))
    A[:n_T, :k] = matrices.lam[support].T
    A[:n_T, k:] = np.eye(n_T)
    A[n_T, :k] = 1.0
    rhs = np.append(theta_hat + matrices.mu + tol, 1.0)
    res = simplex(np.zeros(k + n_T), A, rhs)
    if res.status != "optimal":
        raise LPError(f"attacker feasibility LP reported {res.status}")
    alpha = np.zeros(matrices.N + 1)
    alpha[support] = np.clip(res.x[:k], 0.0, None)
    return alpha / alpha.sum()


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    is_ne: bool
    max_attacker_improvement: float
    max_defender_improvement: float
    attacker_indifference_residual: float
    defender_indifference_residual: float
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "is_ne": self.is_ne,
            "max_attacker_improvement": self.max_attacker_improvement,
            "max_defender_improvement": self.max_defender_improvement,
            "attacker_indifference_residual": self.attacker_indifference_residual,
            "defender_indifference_residual": self.defender_indifference_residual,
            "tolerance": self.tolerance,
        }


def verify_ne(matrices: GameMatrices, alpha, beta, tol: float = DEFAULT_TOL,
              support_tol: float = 1e-10) -> VerificationReport:
    """Check that each strategy is a best response to the other (unshifted units)."""
    a = check_distribution(alpha, matrices.N + 1, name="alpha")
    b = check_distribution(beta, matrices.N + 2, name="beta")
    row_costs = matrices.lambda_tilde @ b
    col_payoffs = a @ matrices.lambda_tilde - matrices.mu
    cost = float(a @ row_costs)
    payoff = float(col_payoffs @ b)
    att_gain = max(0.0, cost - float(row_costs.min()))
    def_gain = max(0.0, float(col_payoffs.max()) - payoff)
    a_supp = a > support_tol
    b_supp = b > support_tol
    att_res = float(np.ptp(row_costs[a_supp])) if a_supp.any() else 0.0
    def_res = float(np.ptp(col_payoffs[b_supp])) if b_supp.any() else 0.0
    return VerificationReport(
        is_ne=bool(att_gain <= tol and def_gain <= tol),
        max_attacker_improvement=att_gain,
        max_defender_improvement=def_gain,
        attacker_indifference_residual=att_res,
        defender_indifference_residual=def_res,
        tolerance=tol,
    )


def best_response(matrices: GameMatrices, side: Literal["attacker", "defender"],
                  opponent, tol: float = 1e-12) -> Tuple[np.ndarray, float]:
    """Pure best responses and their value, by exhaustive scan.

    Attacker: minimizers of ``Lambda~ beta``. Defender: maximizers of
    ``alpha' Lambda~ - mu'``. Ties within ``tol * max(1, |value|)`` are kept.
    """
    if side == "attacker":
        b = check_distribution(opponent, matrices.N + 2, name="beta")
        values = matrices.lambda_tilde @ b
        best = float(values.min())
        idx = np.flatnonzero(values <= best + tol * max(1.0, abs(best)))
    elif side == "defender":
        a = check_distribution(opponent, matrices.N + 1, name="alpha")
        values = a @ matrices.lambda_tilde - matrices.mu
        best = float(values.max())
        idx = np.flatnonzero(values >= best - tol * max(1.0, abs(best)))
    else:
        raise ValidationError(f"side must be 'attacker' or 'defender', got {side!r}")
    return idx, best


# --------------------------------------------------------------------------
# support enumeration


def _indifferent_mix(payoff: np.ndarray, residual_tol: float):
    """Solve ``payoff @ x = v * 1`` with ``sum(x) = 1``; payoff has shape (k_rows, k_cols).

    Returns ``x`` (length k_cols) or None when the system is inconsistent or
    ``x`` is not a distribution.
    """
    k_rows, k_cols = payoff.shape
    M = np.zeros((k_rows + 1, k_cols + 1))
    M[:k_rows, :k_cols] = payoff
    M[:k_rows, k_cols] = -1.0
    M[k_rows, :k_cols] = 1.0
    rhs = np.zeros(k_rows + 1)
    rhs[k_rows] = 1.0
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    if np.max(np.abs(M @ sol - rhs)) > residual_tol * max(1.0, np.abs(payoff).max()):
        return None
    x = sol[:k_cols]
    if x.min() < -1e-12:
        return None
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def _subsets(n: int, contiguous: bool):
    if contiguous:
        for lo in range(n):
            for hi in range(lo, n):
                yield tuple(range(lo, hi + 1))
    else:
        for size in range(1, n + 1):
            yield from itertools.combinations(range(n), size)


def support_enumeration_ne(matrices: GameMatrices, max_N: int = 6, fast: bool = False,
                           residual_tol: float = 1e-9,
                           verify_tol: float = 1e-8) -> List[Tuple[np.ndarray, np.ndarray]]:
    """All equilibria found by trying every pair of supports.

    The spy minimizes ``Lambda~`` and the defender maximizes
    ``Lambda~ - 1 mu'``. ``fast=True`` restricts the defender to contiguous
    supports. Results are ordered by support pair and deduplicated at 1e-7.
    """
    N = matrices.N
    if N > max_N:
        raise ValidationError(
            f"support enumeration refused for N={N} > max_N={max_N} "
            f"({2 ** (N + 1) - 1} x {2 ** (N + 2) - 1} support pairs)"
        )
    spy_payoff = -matrices.lambda_tilde
    def_payoff = matrices.lambda_tilde - matrices.mu[None, :]
    found = []
    for I in _subsets(N + 1, contiguous=False):
        rows = list(I)
        for J in _subsets(N + 2, contiguous=fast):
            cols = list(J)
            beta_J = _indifferent_mix(spy_payoff[np.ix_(rows, cols)], residual_tol)
            if beta_J is None:
                continue
            alpha_I = _indifferent_mix(def_payoff[np.ix_(rows, cols)].T, residual_tol)
            if alpha_I is None:
                continue
            alpha = np.zeros(N + 1)
            alpha[rows] = alpha_I
            beta = np.zeros(N + 2)
            beta[cols] = beta_J
            if not verify_ne(matrices, alpha, beta, tol=verify_tol).is_ne:
                continue
            if any(np.max(np.abs(alpha - a)) <= 1e-7 and np.max(np.abs(beta - b)) <= 1e-7
                   for _, _, a, b in found):
                continue
            found.append((I, J, alpha, beta))
    found.sort(key=lambda item: (item[0], item[1]))
    logger.debug("support enumeration: %d equilibria for N=%d", len(found), N)
    return [(a, b) for _, _, a, b in found]
