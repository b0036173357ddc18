"""Polynomial-time equilibrium computation.

The defender's equilibrium strategy maximizes defendability and can be taken
from two structured families indexed by the first tight row ``s``::

    TypeI   beta = (0,..,0, 0,   bm,..,bm, 1-(N-s)bm)
    TypeII  beta = (0,..,0, 1-(N-s)bm, bm,..,bm, 0)
                            ^ index s          ^ index N+1

with ``bm = c_a / c_d``. When ``(N-s) bm = 1`` both collapse to the
Coincident vector, uniform on ``s+1..N``. The spy's strategy is then
recovered from the defender's indifference conditions restricted to rows
``s..N``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Tuple

import numpy as np
import scipy.linalg

from . import oracle
from .errors import (
    InvalidAttackerStrategy,
    LPError,
    NoStructuralCandidate,
    SingularSystemError,
    SolverError,
)
from .game import GameMatrices, GameParams, SpammerModel, build_matrices

logger = logging.getLogger(__name__)

Form = Literal["TypeI", "TypeII", "Coincident", "LP"]

FEASIBILITY_TOL = 1e-12
TIE_RTOL = 1e-10
NEGATIVE_TOL = 1e-9
SUM_TOL = 1e-9
SINGULAR_RTOL = 1e-12
VERIFY_TOL = oracle.DEFAULT_TOL

# tie-break order among equally good candidates
_FORM_RANK = {"TypeII": 0, "Coincident": 0, "TypeI": 1}


@dataclass(frozen=True)
class CandidateDefenderStrategy:
    form: Form
    s: int
    beta: np.ndarray
    theta: float  # shifted defendability

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.beta > 0)


@dataclass
class EquilibriumResult:
    """A verified equilibrium plus the data needed to audit it.

    ``theta_hat`` and ``theta_hat_shifted`` are the maximal defendability
    in unshifted and shifted units; ``delta`` is the spy's best-response
    cost (unshifted). ``form`` is ``"LP"`` when the oracle fallback produced
    the equilibrium.
    """

    alpha: np.ndarray
    beta: np.ndarray
    form: Form
    s: int
    theta_hat: float
    theta_hat_shifted: float
    delta: float
    unique: bool
    ties: List[Tuple[str, int, float]]
    candidates: List[Tuple[str, int, float]]
    verification: oracle.VerificationReport
    indifference_residual: float
    fallback: Optional[str] = None
    notes: List[str] = field(default_factory=list)


def _defendability_banded(matrices: GameMatrices, beta: np.ndarray) -> float:
    """Shifted defendability in O(N) using ``(Lambda~ beta)_i = c_d B(i) - c_a i``."""
    prm = matrices.params
    N = prm.N
    cum = np.cumsum(beta[:N + 1])
    row_costs = prm.c_d * cum - prm.c_a * np.arange(N + 1)
    return float(row_costs.min() + prm.shift - matrices.mu @ beta)


def enumerate_candidates(matrices: GameMatrices,
                         params: Optional[GameParams] = None) -> List[CandidateDefenderStrategy]:
    """All feasible TypeI/TypeII/Coincident vectors for ``s = 0..N``.

    A TypeII vector whose ``beta[s]`` equals ``bm`` is the same vector as
    the Coincident one at ``s-1`` and is listed only once, under the latter.
    """
    params = params or matrices.params
    N = params.N
    bm = params.beta_m
    out: List[CandidateDefenderStrategy] = []
    coincident_at = set()
    for s in range(N + 1):
        rest = 1.0 - (N - s) * bm
        if rest < -FEASIBILITY_TOL:
            continue
        middle = np.zeros(N + 2)
        middle[s + 1:N + 1] = bm
        if abs(rest) <= FEASIBILITY_TOL:
            beta = middle / middle.sum()
            out.append(CandidateDefenderStrategy("Coincident", s, beta,
                                                 _defendability_banded(matrices, beta)))
            coincident_at.add(s)
            continue
        for form in ("TypeI", "TypeII"):
            if form == "TypeII" and s - 1 in coincident_at and abs(rest - bm) <= FEASIBILITY_TOL:
                continue
            beta = middle.copy()
            beta[N + 1 if form == "TypeI" else s] = rest
            out.append(CandidateDefenderStrategy(form, s, beta,
                                                 _defendability_banded(matrices, beta)))
    if not out:
        raise NoStructuralCandidate(
            f"no feasible structured defender strategy (c_a/c_d = {bm!r})"
        )
    return out


def _ranked_maximizers(candidates):
    best = max(c.theta for c in candidates)
    tol = TIE_RTOL * max(1.0, abs(best))
    tied = [c for c in candidates if c.theta >= best - tol]
    tied.sort(key=lambda c: (_FORM_RANK[c.form], c.s))
    return tied


def solve_defender(matrices: GameMatrices,
                   params: Optional[GameParams] = None) -> Tuple[CandidateDefenderStrategy, float]:
    """The defendability-maximizing candidate and its shifted defendability."""
    winner = _ranked_maximizers(enumerate_candidates(matrices, params))[0]
    return winner, winner.theta


def _indifference_system(matrices: GameMatrices, rows, cols, theta_hat):
    """Column-differenced form of ``alpha_r' Lambda_r = theta_hat + mu_r'``.

    Adjacent support columns of ``Lambda`` differ by ``c_d`` in a single
    row, so differencing turns all but the last equation into
    ``c_d alpha_j = mu[j] - mu[j+1]``. The right-hand sides then come straight
    from the pmf, which keeps far-tail spy weights accurate.
    """
    lt = matrices.lambda_tilde
    diff = (lt[np.ix_(rows, cols[:-1])] - lt[np.ix_(rows, cols[:-1] + 1)]).T
    last = matrices.lam[rows, cols[-1]][None, :]
    system = np.vstack([diff, last])
    rhs = np.append(matrices.mu_step[cols[:-1]], theta_hat + matrices.mu[cols[-1]])
    return system, rhs


def _lu_solve(system, rhs, label):
    lu, piv = scipy.linalg.lu_factor(system, check_finite=False)
    scale = np.abs(system).sum(axis=1).max()
    if np.abs(np.diag(lu)).min() < SINGULAR_RTOL * scale:
        raise SingularSystemError(f"attacker system singular for {label}")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def _coincident_family(matrices, rows, cols, theta_hat, label):
    """Spy strategies for the Coincident vector.

    Here the indifference equations leave one degree of freedom, the weight
    ``t`` on row ``s``. Solve for ``t = 0`` and ``t = 1`` to get the line,
    then keep the ``t`` for which every threshold outside the support is no
    better for the defender. Returns the feasible point closest to ``t = 0``
    together with the feasible interval ``(lo, hi)``.
    """
    system, rhs = _indifference_system(matrices, rows, cols, theta_hat)
    k = rows.size
    square = np.vstack([system[:-1], np.ones(k), np.eye(k)[0]])
    ends = [_lu_solve(square, np.append(rhs[:-1], [1.0, t]), label) for t in (0.0, 1.0)]
    base, slope = ends[0], ends[1] - ends[0]

    # the dropped last-column equation must hold along the whole line
    last_res = [abs(system[-1] @ e - rhs[-1]) for e in ends]
    if max(last_res) > 1e-9 * max(1.0, abs(rhs[-1])):
        raise InvalidAttackerStrategy(f"{label}: inconsistent indifference system")

    N = matrices.N
    theta_u = theta_hat - matrices.shift
    outside = np.setdiff1d(np.arange(N + 2), cols)
    lt = matrices.lambda_tilde
    pay0 = base @ lt[rows][:, outside] - matrices.mu[outside]
    pay_slope = slope @ lt[rows][:, outside]
    # constraints g0 + t*g1 <= 0
    g0 = np.concatenate([pay0 - theta_u - 1e-12 * max(1.0, abs(theta_u)), -base])
    g1 = np.concatenate([pay_slope, -slope])
    lo, hi = -np.inf, np.inf
    for a, b in zip(g0, g1):
        if abs(b) <= 1e-15:
            if a > 0:
                raise InvalidAttackerStrategy(f"{label}: no feasible spy strategy")
        elif b > 0:
            hi = min(hi, -a / b)
        else:
            lo = max(lo, -a / b)
    if lo > hi + 1e-12:
        raise InvalidAttackerStrategy(f"{label}: empty spy strategy interval [{lo}, {hi}]")
    t = min(max(0.0, lo), hi)
    return base + t * slope, (max(lo, 0.0), hi)


def solve_attacker(matrices: GameMatrices, winner: CandidateDefenderStrategy,
                   theta_hat: float) -> np.ndarray:
    """Spy strategy from the defender's indifference on the support of ``winner``.

    Rows ``s..N`` carry the spy's support and the columns of the defender's
    support give ``alpha_r' Lambda_r = theta_hat + mu_r'`` (shifted units),
    solved by LU with partial pivoting. For the Coincident vector the system
    has one column fewer than unknowns; see ``_coincident_family``.
    """
    N = matrices.N
    s = winner.s
    label = f"{winner.form} s={s}"
    rows = np.arange(s, N + 1)
    if winner.form == "TypeI":
        cols = np.arange(s + 1, N + 2)
    elif winner.form == "TypeII":
        cols = np.arange(s, N + 1)
    else:
        cols = np.arange(s + 1, N + 1)
    if winner.form == "Coincident":
        alpha_r, _ = _coincident_family(matrices, rows, cols, theta_hat, label)
    else:
        alpha_r = _lu_solve(*_indifference_system(matrices, rows, cols, theta_hat), label)
    if alpha_r.min() < -NEGATIVE_TOL or abs(alpha_r.sum() - 1.0) > SUM_TOL:
        raise InvalidAttackerStrategy(
            f"{label}: min entry {alpha_r.min()!r}, sum {alpha_r.sum()!r}"
        )
    alpha = np.zeros(N + 1)
    alpha[rows] = np.clip(alpha_r, 0.0, None)
    return alpha / alpha.sum()


def _table(cands):
    return [(c.form, c.s, c.theta) for c in cands]


def _finish(matrices, alpha, beta, form, s, theta_shifted, tied, cands,
            fallback=None, notes=()):
    report = oracle.verify_ne(matrices, alpha, beta, tol=VERIFY_TOL)
    shift = matrices.shift
    delta = float(np.min(matrices.lambda_tilde @ beta))
    col_payoffs = alpha @ matrices.lambda_tilde - matrices.mu
    support = beta > 0
    residual = float(np.max(np.abs(col_payoffs[support] - (theta_shifted - shift))))
    return EquilibriumResult(
        alpha=alpha,
        beta=beta,
        form=form,
        s=s,
        theta_hat=theta_shifted - shift,
        theta_hat_shifted=theta_shifted,
        delta=delta,
        unique=len(tied) == 1,
        ties=_table(tied),
        candidates=_table(cands),
        verification=report,
        indifference_residual=residual,
        fallback=fallback,
        notes=list(notes),
    )


def _oracle_fallback(matrices, cands, tied, notes):
    try:
        lp = oracle.solve_defendability_lp(matrices)
        alpha = oracle.solve_attacker_lp(matrices, lp.beta, lp.objective)
    except LPError as exc:
        raise SolverError(f"structural solver failed and LP fallback failed: {exc}") from exc
    first = np.flatnonzero(lp.beta > 1e-12)
    s = int(first[0]) if first.size else 0
    result = _finish(matrices, alpha, lp.beta, "LP", s, lp.objective, tied, cands,
                     fallback="lp", notes=notes)
    if not result.verification.is_ne:
        raise SolverError("LP fallback produced a strategy pair that fails verification")
    return result


def solve_ne(params: GameParams, model: SpammerModel,
             matrices: Optional[GameMatrices] = None,
             allow_fallback: bool = True) -> EquilibriumResult:
    """Compute one verified Nash equilibrium.

    Tied maximizers are tried in order (TypeII before TypeI, then ascending
    ``s``); the first giving a valid, verified spy strategy wins. If none
    does, the LP oracle supplies the equilibrium (``result.fallback == "lp"``).
    """
    matrices = matrices or build_matrices(params, model)
    notes: List[str] = []
    try:
        cands = enumerate_candidates(matrices, params)
    except NoStructuralCandidate as exc:
        if not allow_fallback:
            raise
        notes.append(str(exc))
        return _oracle_fallback(matrices, [], [], notes)
    tied = _ranked_maximizers(cands)
    for cand in tied:
        try:
            alpha = solve_attacker(matrices, cand, cand.theta)
        except (SingularSystemError, InvalidAttackerStrategy) as exc:
            notes.append(str(exc))
            logger.debug("candidate rejected: %s", exc)
            continue
        if cand.form == "Coincident":
            rows = np.arange(cand.s, params.N + 1)
            cols = np.arange(cand.s + 1, params.N + 1)
            _, (lo, hi) = _coincident_family(matrices, rows, cols, cand.theta, "")
            if hi - lo > 1e-12:
                notes.append(f"spy strategy not unique: weight on H={cand.s} may range "
                             f"over [{float(lo)!r}, {float(hi)!r}]")
        result = _finish(matrices, alpha, cand.beta, cand.form, cand.s, cand.theta,
                         tied, cands, notes=notes)
        if result.verification.is_ne:
            return result
        notes.append(f"{cand.form} s={cand.s}: verification failed")
    if not allow_fallback:
        raise SolverError("no structured candidate yields a verified equilibrium: "
                          + "; ".join(notes))
    logger.warning("structural solver fell back to the LP oracle")
    return _oracle_fallback(matrices, cands, tied, notes)
