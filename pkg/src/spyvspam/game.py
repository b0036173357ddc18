"""Game definition: parameters, spammer model, payoff matrices and payoffs.

Rows of the cost matrices index the spy's hit count ``H = 0..N``; columns
index the defender's threshold ``T = 0..N+1``. A spy is caught when
``T <= H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .errors import ValidationError

PMF_TOL = 1e-12
PROB_TOL = 1e-9

Player = Literal["attacker", "defender"]


@dataclass(frozen=True)
class GameParams:
    """Scalar constants of one game instance.

    ``epsilon`` is the positivity shift added to every cost entry; it defaults
    to ``c_a``. Equilibria do not depend on it.
    """

    N: int
    p: float
    c_d: float
    c_a: float
    c_fa: float
    epsilon: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ValidationError(f"N must be an integer >= 1, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"p must lie in (0, 1), got {self.p!r}")
        object.__setattr__(self, "p", float(self.p))
        for name in ("c_d", "c_a", "c_fa"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive real, got {value!r}")
            object.__setattr__(self, name, value)
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", float(self.c_a))
        elif not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be a positive real, got {self.epsilon!r}")
        else:
            object.__setattr__(self, "epsilon", float(self.epsilon))

    @property
    def beta_m(self) -> float:
        """Common weight ``c_a / c_d`` on the middle thresholds."""
        return self.c_a / self.c_d

    @property
    def shift(self) -> float:
        return self.N * self.c_a + self.epsilon

    def scaled(self, factor: float) -> "GameParams":
        """Return a copy with every cost (and the shift) multiplied by ``factor``."""
        return GameParams(
            N=self.N,
            p=self.p,
            c_d=self.c_d * factor,
            c_a=self.c_a * factor,
            c_fa=self.c_fa * factor,
            epsilon=self.epsilon * factor,
        )


@dataclass(frozen=True)
class SpammerModel:
    """Distribution of the spammer's file-server hit count ``Z`` on ``0..N``."""

    pmf: np.ndarray
    source: str = "user"
    phi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pmf = np.array(self.pmf, dtype=float)
        if pmf.ndim != 1 or pmf.size < 2:
            raise ValidationError("spammer pmf must be a vector of length N+1 >= 2")
        if not np.all(np.isfinite(pmf)):
            raise ValidationError("spammer pmf has non-finite entries")
        if np.any(pmf <= 0):
            bad = np.flatnonzero(pmf <= 0).tolist()
            raise ValidationError(
                f"spammer pmf must be strictly positive (tail must strictly decrease); "
                f"nonpositive at indices {bad[:10]}"
            )
        total = pmf.sum()
        if abs(total - 1.0) > PMF_TOL:
            raise ValidationError(f"spammer pmf sums to {total!r}, not 1")
        pmf.setflags(write=False)
        # phi[T] = Pr{Z >= T}, T = 0..N+1; summed from the right to keep tails accurate
        phi = np.zeros(pmf.size + 1)
        phi[:-1] = np.cumsum(pmf[::-1])[::-1]
        phi.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "phi", phi)

    @property
    def N(self) -> int:
        return self.pmf.size - 1


def build_spammer_binomial(N: int, theta0: float) -> SpammerModel:
    """Binomial(N, theta0) hit counts, built by accumulating log pmf ratios.

    Raises ``ValidationError`` when ``theta0`` is not strictly inside (0, 1)
    or when some pmf entry underflows to zero.
    """
    if int(N) != N or N < 1:
        raise ValidationError(f"N must be an integer >= 1, got {N!r}")
    if not 0.0 < theta0 < 1.0:
        raise ValidationError(f"theta0 must lie in (0, 1), got {theta0!r}")
    N = int(N)
    k = np.arange(N)
    # log pmf[k+1] - log pmf[k] = log((N-k)/(k+1)) + log(theta0/(1-theta0))
    steps = np.log((N - k) / (k + 1.0)) + (math.log(theta0) - math.log1p(-theta0))
    log_pmf = np.empty(N + 1)
    log_pmf[0] = N * math.log1p(-theta0)
    log_pmf[1:] = log_pmf[0] + np.cumsum(steps)
    pmf = np.exp(log_pmf)
    if np.any(pmf <= 0):
        raise ValidationError(
            f"binomial({N}, {theta0}) pmf underflows to zero in double precision"
        )
    pmf /= math.fsum(pmf)
    return SpammerModel(pmf, source=f"binomial(N={N}, theta0={theta0!r})")


def tail_phi(model: SpammerModel, T: int) -> float:
    """``Pr{Z >= T}`` for ``T`` in ``0..N+1``."""
    if int(T) != T or not 0 <= T <= model.N + 1:
        raise ValidationError(f"threshold T must lie in 0..{model.N + 1}, got {T!r}")
    return float(model.phi[int(T)])


@dataclass(frozen=True)
class GameMatrices:
    """Cost matrices and false-alarm vector of a game.

    ``lambda_tilde[i, j] = c_d * 1{j <= i} - c_a * i``; ``lam`` is the same
    matrix shifted by ``N*c_a + epsilon`` so that every entry is positive;
    ``mu[T] = (1-p)/p * c_fa * Pr{Z >= T}``. ``mu_step[T] = mu[T] - mu[T+1]``
    is kept separately, computed from the pmf without cancellation.
    """

    params: GameParams
    model: SpammerModel
    lambda_tilde: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    mu_step: np.ndarray

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def shift(self) -> float:
        return self.params.shift


def spy_cost_matrix(N: int, c_d: float, c_a: float) -> np.ndarray:
    """``(N+1) x (N+2)`` matrix with entries ``c_d * 1{j <= i} - c_a * i``."""
    rows = np.arange(N + 1)[:, None]
    cols = np.arange(N + 2)[None, :]
    return c_d * (cols <= rows) - c_a * rows * np.ones_like(cols)


def build_matrices(params: GameParams, model: SpammerModel) -> GameMatrices:
    if model.N != params.N:
        raise ValidationError(
            f"spammer model has N={model.N} but game parameters have N={params.N}"
        )
    lambda_tilde = spy_cost_matrix(params.N, params.c_d, params.c_a)
    lam = lambda_tilde + params.shift
    false_alarm = (1.0 - params.p) / params.p * params.c_fa
    mu = false_alarm * model.phi
    mu_step = false_alarm * model.pmf
    for arr in (lambda_tilde, lam, mu, mu_step):
        arr.setflags(write=False)
    return GameMatrices(params, model, lambda_tilde, lam, mu, mu_step)


@dataclass(frozen=True)
class MixedStrategy:
    """A probability vector over one player's pure strategies."""

    weights: np.ndarray
    player: Player

    def __post_init__(self):
        object.__setattr__(self, "weights", check_distribution(self.weights))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)

    def __len__(self):
        return self.weights.size


def check_distribution(x, length: Optional[int] = None, tol: float = PROB_TOL,
                       name: str = "strategy") -> np.ndarray:
    """Validate and return ``x`` as a float probability vector."""
    arr = np.array(x, dtype=float).ravel()
    if length is not None and arr.size != length:
        raise ValidationError(f"{name} has length {arr.size}, expected {length}")
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be a non-empty finite vector")
    if arr.min() < -tol:
        raise ValidationError(f"{name} has negative entry {arr.min()!r}")
    if abs(arr.sum() - 1.0) > tol:
        raise ValidationError(f"{name} sums to {arr.sum()!r}, not 1")
    arr.setflags(write=False)
    return arr


def _pair(matrices: GameMatrices, alpha, beta):
    N = matrices.N
    a = check_distribution(alpha, N + 1, name="alpha")
    b = check_distribution(beta, N + 2, name="beta")
    return a, b


def attacker_cost(matrices: GameMatrices, alpha, beta) -> float:
    """Expected spy cost ``alpha' Lambda~ beta`` (unshifted)."""
    a, b = _pair(matrices, alpha, beta)
    return float(a @ matrices.lambda_tilde @ b)


def defender_payoff(matrices: GameMatrices, alpha, beta, raw: bool = False) -> float:
    """Expected defender payoff ``alpha' Lambda~ beta - mu' beta`` (unshifted).

    With ``raw=True`` the unscaled payoff is returned, which is ``p`` times
    the scaled one.
    """
    a, b = _pair(matrices, alpha, beta)
    value = float(a @ matrices.lambda_tilde @ b - matrices.mu @ b)
    return matrices.params.p * value if raw else value


def defendability(matrices: GameMatrices, beta, shifted: bool = True) -> float:
    """Defender payoff against a best-responding spy: ``min[Lambda beta] - mu' beta``."""
    b = check_distribution(beta, matrices.N + 2, name="beta")
    costs = matrices.lam @ b if shifted else matrices.lambda_tilde @ b
    return float(costs.min() - matrices.mu @ b)
